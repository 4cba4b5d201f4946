#pragma once

#include <cstdlib>
#include <functional>
#include <map>
#include <string>

#include <json.hpp>

#include "tmn/engine.hpp"
#include "tmn/network_io.hpp"

namespace tmn {

inline void hub_params_from_json(const json& j, HubParams& p)
{
	p.m_l = j.value("m_l", p.m_l);
	p.m_1_0 = j.value("m_1_0", p.m_1_0);
	p.n_l = j.value("n_l", p.n_l);
}

inline void truck_params_from_json(const json& j, TruckParams& p)
{
	p.m_v = j.value("m_v", p.m_v);
	p.m_l = j.value("m_l", p.m_l);
	p.I_z = j.value("I_z", p.I_z);
	p.a = j.value("a", p.a);
	p.b = j.value("b", p.b);
	p.r = j.value("r", p.r);
	p.l = j.value("l", p.l);
	p.d = j.value("d", p.d);
	p.H = j.value("H", p.H);
	p.t_u = j.value("t_u", p.t_u);
}

inline void digester_params_from_json(const json& j, DigesterParams& p)
{
	p.alpha = j.value("alpha", p.alpha);
	p.S1_in = j.value("S1_in", p.S1_in);
	p.S2_in = j.value("S2_in", p.S2_in);
	p.k1 = j.value("k1", p.k1);
	p.k2 = j.value("k2", p.k2);
	p.k3 = j.value("k3", p.k3);
	p.mu1_max = j.value("mu1_max", p.mu1_max);
	p.mu2_max = j.value("mu2_max", p.mu2_max);
	p.K_S1 = j.value("K_S1", p.K_S1);
	p.K_S2 = j.value("K_S2", p.K_S2);
	p.K_I2 = j.value("K_I2", p.K_I2);
	p.k6 = j.value("k6", p.k6);
	p.rho_b = j.value("rho_b", p.rho_b);
	p.V_d = j.value("V_d", p.V_d);
	p.validate();
}

/// Directory searched for default parameter files; overridable through
/// the TMN_PARAM_DIR environment variable.
inline std::string default_param_dir()
{
	if (const char* env = std::getenv("TMN_PARAM_DIR"))
		return env;
	return "data";
}

inline DigesterParams load_digester_params(const std::string& path)
{
	DigesterParams p;
	digester_params_from_json(load_json_file(path), p);
	return p;
}

inline Eigen::Vector4d vector4_from_json(const json& j)
{
	if (!j.is_array() || j.size() != 4)
		throw TmnError(errc::parse_error, "expected a 4-element array");
	return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

/// Scenario file: parameter blocks plus schedule and controller bindings.
/// Every key is optional and falls back to the built-in defaults.
inline BiomethaneScenario scenario_from_json(const json& j)
{
	BiomethaneScenario scn;
	if (j.contains("hub"))
		hub_params_from_json(j.at("hub"), scn.hub);
	if (j.contains("truck"))
		truck_params_from_json(j.at("truck"), scn.truck);
	if (j.contains("digester")) {
		if (j.at("digester").is_string())
			scn.digester = load_digester_params(j.at("digester").get<std::string>());
		else
			digester_params_from_json(j.at("digester"), scn.digester);
	}
	if (j.contains("mode")) {
		const auto mode = j.at("mode").get<std::string>();
		if (mode == "open")
			scn.mode = ControlMode::open_loop;
		else if (mode == "closed")
			scn.mode = ControlMode::closed_loop;
		else
			throw TmnError(errc::parse_error, "mode must be 'open' or 'closed'");
	}
	if (j.contains("schedule")) {
		const auto& s = j.at("schedule");
		scn.step_days = s.value("step_days", scn.step_days);
		scn.n_u = s.value("n_u", scn.n_u);
		scn.n_d = s.value("n_d", scn.n_d);
		scn.digestion_span_days = s.value("digestion_span_days", scn.digestion_span_days);
		scn.truck_step_s = s.value("truck_step_s", scn.truck_step_s);
		scn.digester_step_days = s.value("digester_step_days", scn.digester_step_days);
	}
	if (j.contains("controllers")) {
		const auto& c = j.at("controllers");
		if (c.contains("digester")) {
			const auto& d = c.at("digester");
			scn.p_gain = d.value("p", scn.p_gain);
			if (d.contains("u_nominal"))
				scn.u_nominal = vector4_from_json(d.at("u_nominal"));
			if (d.contains("xtilde0"))
				scn.xtilde0_closed = vector4_from_json(d.at("xtilde0"));
			if (d.contains("x0_open"))
				scn.x0_open = vector4_from_json(d.at("x0_open"));
		}
	}
	return scn;
}

/// Apply a dotted-key override like "digester.mu1_max=1.3" or
/// "schedule.digestion_span_days=2". Unknown keys are an error so sweep
/// scripts fail loudly on typos.
inline void apply_override(BiomethaneScenario& scn, const std::string& key, double value)
{
	std::map<std::string, std::function<void(double)>> setters = {
		{"hub.m_l", [&](double v) { scn.hub.m_l = v; }},
		{"hub.m_1_0", [&](double v) { scn.hub.m_1_0 = v; }},
		{"hub.n_l", [&](double v) { scn.hub.n_l = static_cast<int>(v); }},
		{"truck.m_v", [&](double v) { scn.truck.m_v = v; }},
		{"truck.m_l", [&](double v) { scn.truck.m_l = v; }},
		{"truck.I_z", [&](double v) { scn.truck.I_z = v; }},
		{"truck.a", [&](double v) { scn.truck.a = v; }},
		{"truck.b", [&](double v) { scn.truck.b = v; }},
		{"truck.r", [&](double v) { scn.truck.r = v; }},
		{"truck.l", [&](double v) { scn.truck.l = v; }},
		{"truck.d", [&](double v) { scn.truck.d = v; }},
		{"truck.H", [&](double v) { scn.truck.H = v; }},
		{"truck.t_u", [&](double v) { scn.truck.t_u = v; }},
		{"digester.alpha", [&](double v) { scn.digester.alpha = v; }},
		{"digester.S1_in", [&](double v) { scn.digester.S1_in = v; }},
		{"digester.S2_in", [&](double v) { scn.digester.S2_in = v; }},
		{"digester.k1", [&](double v) { scn.digester.k1 = v; }},
		{"digester.k2", [&](double v) { scn.digester.k2 = v; }},
		{"digester.k3", [&](double v) { scn.digester.k3 = v; }},
		{"digester.mu1_max", [&](double v) { scn.digester.mu1_max = v; }},
		{"digester.mu2_max", [&](double v) { scn.digester.mu2_max = v; }},
		{"digester.K_S1", [&](double v) { scn.digester.K_S1 = v; }},
		{"digester.K_S2", [&](double v) { scn.digester.K_S2 = v; }},
		{"digester.K_I2", [&](double v) { scn.digester.K_I2 = v; }},
		{"digester.k6", [&](double v) { scn.digester.k6 = v; }},
		{"digester.rho_b", [&](double v) { scn.digester.rho_b = v; }},
		{"digester.V_d", [&](double v) { scn.digester.V_d = v; }},
		{"control.p", [&](double v) { scn.p_gain = v; }},
		{"control.D_bar", [&](double v) { scn.u_nominal.setConstant(v); }},
		{"schedule.step_days", [&](double v) { scn.step_days = v; }},
		{"schedule.n_u", [&](double v) { scn.n_u = static_cast<int>(v); }},
		{"schedule.n_d", [&](double v) { scn.n_d = static_cast<int>(v); }},
		{"schedule.digestion_span_days", [&](double v) { scn.digestion_span_days = v; }},
		{"schedule.truck_step_s", [&](double v) { scn.truck_step_s = v; }},
		{"schedule.digester_step_days", [&](double v) { scn.digester_step_days = v; }},
	};
	auto it = setters.find(key);
	if (it == setters.end())
		throw TmnError(errc::unknown_key, "no parameter named '" + key + "'");
	it->second(value);
}

inline void apply_override_expr(BiomethaneScenario& scn, const std::string& expr)
{
	const auto eq = expr.find('=');
	if (eq == std::string::npos)
		throw TmnError(errc::parse_error, "override must look like key=value: '" + expr + "'");
	const std::string key = expr.substr(0, eq);
	double value = 0.0;
	try {
		value = std::stod(expr.substr(eq + 1));
	} catch (const std::exception&) {
		throw TmnError(errc::parse_error, "override value is not a number: '" + expr + "'");
	}
	apply_override(scn, key, value);
}

} // namespace tmn
