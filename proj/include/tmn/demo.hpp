#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tmn/cycles.hpp"
#include "tmn/engine.hpp"
#include "tmn/network_io.hpp"

namespace tmn {

/// Five-vertex network with split fraction alpha: a recirculation cycle
/// 2->3->4->2 fed from a source stock (vertex 5) and leaking a fraction
/// alpha of the main stream to a sink stock (vertex 1). All flows are
/// multiples of the main stream rate m_alpha.
inline TmnNetwork build_split_fraction_network(double alpha, double m_alpha = 1.0,
                                               double source_stock = 1.0e6)
{
	if (alpha < 0.0 || alpha > 1.0)
		throw TmnError(errc::alpha_out_of_range, "split fraction must be in [0, 1]");
	TmnNetwork net;
	net.materials.push_back({"beta1", "target material"});
	for (int k = 1; k <= 5; ++k)
		net.vertices.push_back({k, k == 5 ? source_stock : 0.0, k == 5 ? source_stock : 0.0});
	net.arcs.push_back({6, 2, 3, (1.0 - alpha) * m_alpha, "beta1"});
	net.arcs.push_back({7, 3, 4, m_alpha, "beta1"});
	net.arcs.push_back({8, 4, 2, (1.0 - alpha) * m_alpha, "beta1"});
	net.arcs.push_back({9, 4, 1, alpha * m_alpha, "beta1"});
	net.arcs.push_back({10, 5, 3, alpha * m_alpha, "beta1"});
	return build_network(std::move(net));
}

/// (alpha, lambda) table over a sweep of split fractions.
inline std::vector<std::pair<double, double>> circularity_sweep(const std::vector<double>& alphas)
{
	std::vector<std::pair<double, double>> table;
	table.reserve(alphas.size());
	for (double a : alphas) {
		const auto report = circularity(build_split_fraction_network(a));
		table.emplace_back(a, report.lambda.value_or(0.0));
	}
	return table;
}

inline json summary_to_json(const BiomethaneSummary& s)
{
	json j;
	j["delivery_error_m"] = format_value(s.delivery_error_m);
	j["final_speed_m_per_s"] = format_value(s.final_speed_m_per_s);
	j["hub_final_kg"] = format_value(s.hub_final_kg);
	j["reservoir_final_kg"] = format_value(s.reservoir_final_kg);
	j["digester_received_kg"] = format_value(s.digester_received_kg);
	j["methane_cumulative"] = format_value(s.methane_cumulative);
	j["settling_bound_days"] = format_value(s.settling_bound_days);
	if (s.settling_time_days)
		j["settling_time_days"] = format_value(*s.settling_time_days);
	if (s.feed_stopped_day)
		j["feed_stopped_day"] = format_value(*s.feed_stopped_day);
	j["digester_final_state"] = {format_value(s.digester_final_state(0)),
	                             format_value(s.digester_final_state(1)),
	                             format_value(s.digester_final_state(2)),
	                             format_value(s.digester_final_state(3))};
	j["x_star"] = {format_value(s.x_star(0)), format_value(s.x_star(1)), format_value(s.x_star(2)),
	               format_value(s.x_star(3))};
	j["negative_kinetics_samples"] = s.negative_kinetics_samples;
	return j;
}

/// Run a scenario and write trajectories, ledger and summary under
/// `out_dir`. Output is deterministic: same inputs, same bytes.
inline BiomethaneResult write_scenario_outputs(const BiomethaneScenario& scn,
                                               const std::string& out_dir)
{
	namespace fs = std::filesystem;
	fs::create_directories(out_dir);
	BiomethaneResult result = run_scenario(scn);
	for (const auto& [name, traj] : result.trajectories)
		traj.write_csv((fs::path(out_dir) / (name + ".csv")).string());
	result.ledger.write_csv((fs::path(out_dir) / "ledger.csv").string());
	std::ofstream summary((fs::path(out_dir) / "summary.json").string());
	summary << summary_to_json(result.summary).dump(2) << '\n';
	return result;
}

} // namespace tmn
