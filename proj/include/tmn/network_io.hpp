#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tmn/cycles.hpp"
#include "tmn/network.hpp"
#include "tmn/trajectory.hpp"

namespace tmn {

using nlohmann::json;

inline json load_json_file(const std::string& path)
{
	std::ifstream in(path);
	if (!in)
		throw TmnError(errc::file_not_found, "cannot open '" + path + "'");
	json j;
	try {
		j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
	} catch (const json::parse_error& e) {
		throw TmnError(errc::parse_error, std::string(e.what()) + " in '" + path + "'");
	}
	return j;
}

inline TmnNetwork network_from_json(const json& j)
{
	TmnNetwork net;
	try {
		for (const auto& m : j.value("materials", json::array()))
			net.materials.push_back({m.at("id").get<std::string>(), m.value("label", "")});
		for (const auto& v : j.value("vertices", json::array())) {
			VertexCompartment vc;
			vc.k = v.at("k").get<int>();
			vc.stock = v.at("stock").get<double>();
			vc.initial_stock = v.value("initial_stock", vc.stock);
			net.vertices.push_back(vc);
		}
		for (const auto& a : j.value("arcs", json::array())) {
			ArcCompartment ac;
			ac.k = a.at("k").get<int>();
			ac.tail = a.at("tail").get<int>();
			ac.head = a.at("head").get<int>();
			ac.flow = a.at("flow").get<double>();
			ac.material = a.value("material", "");
			net.arcs.push_back(ac);
		}
	} catch (const json::exception& e) {
		throw TmnError(errc::parse_error, e.what());
	}
	return build_network(std::move(net));
}

inline TmnNetwork load_network(const std::string& path)
{
	return network_from_json(load_json_file(path));
}

inline json network_to_json(const TmnNetwork& net)
{
	json j;
	j["materials"] = json::array();
	for (const auto& m : net.materials)
		j["materials"].push_back({{"id", m.id}, {"label", m.label}});
	j["vertices"] = json::array();
	for (const auto& v : net.vertices)
		j["vertices"].push_back({{"k", v.k}, {"stock", v.stock}, {"initial_stock", v.initial_stock}});
	j["arcs"] = json::array();
	for (const auto& a : net.arcs)
		j["arcs"].push_back(
			{{"k", a.k}, {"tail", a.tail}, {"head", a.head}, {"flow", a.flow}, {"material", a.material}});
	return j;
}

inline json report_to_json(const CircularityReport& report)
{
	json j;
	// lambda printed at 17 significant digits via a string, null when undefined
	if (report.lambda)
		j["lambda"] = format_value(*report.lambda);
	else
		j["lambda"] = nullptr;
	j["n_phi"] = report.n_phi;
	j["cycles"] = json::array();
	for (const auto& [cycle, cm] : report.cycles)
		j["cycles"].push_back({{"vertices", cycle.vertices}, {"cycle_mean", format_value(cm)}});
	j["leak_set"] = json::array();
	for (const auto& leak : report.leak_set)
		j["leak_set"].push_back(
			{{"tail", leak.tail}, {"head", leak.head}, {"flow", format_value(leak.flow)}});
	return j;
}

inline std::string report_summary_text(const CircularityReport& report)
{
	std::ostringstream out;
	if (report.lambda)
		out << "lambda = " << format_value(*report.lambda) << "\n";
	else
		out << "lambda = undefined (network carries no flow)\n";
	out << "cycles (" << report.n_phi << "):\n";
	for (const auto& [cycle, cm] : report.cycles) {
		out << "  ";
		for (std::size_t i = 0; i < cycle.vertices.size(); ++i)
			out << cycle.vertices[i] << "->";
		out << cycle.vertices.front() << "  CM = " << format_value(cm) << " kg/s\n";
	}
	out << "leak set (" << report.leak_set.size() << "):\n";
	for (const auto& leak : report.leak_set)
		out << "  " << leak.tail << "->" << leak.head << "  " << format_value(leak.flow) << " kg/s\n";
	return out.str();
}

} // namespace tmn
