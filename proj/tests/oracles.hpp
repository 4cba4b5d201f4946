#pragma once

// Test-only oracles, independent of the library's algorithm paths.

#include <functional>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "tmn/cycles.hpp"
#include "tmn/network.hpp"

namespace tmn_test {

/// Exhaustive elementary-cycle enumeration by DFS over vertex sequences:
/// every cycle is found starting from its smallest vertex, using only
/// larger vertices internally. Independent of the Johnson implementation.
inline std::vector<tmn::DirectedCycle> brute_force_cycles(const tmn::TmnNetwork& net)
{
	const auto gamma = tmn::mass_flow_matrix(net);
	const int n = static_cast<int>(gamma.vertex_ids.size());
	auto has_arc = [&](int i, int j) { return i != j && gamma.gamma(i, j) > 0.0; };

	std::vector<tmn::DirectedCycle> cycles;
	std::vector<int> path;
	std::vector<bool> used(static_cast<std::size_t>(n), false);

	std::function<void(int, int)> extend = [&](int start, int v) {
		if (has_arc(v, start)) {
			std::vector<int> ids;
			for (int pos : path)
				ids.push_back(gamma.vertex_ids[static_cast<std::size_t>(pos)]);
			cycles.push_back(tmn::canonical_cycle(std::move(ids)));
		}
		for (int w = start + 1; w < n; ++w) {
			if (used[static_cast<std::size_t>(w)] || !has_arc(v, w))
				continue;
			used[static_cast<std::size_t>(w)] = true;
			path.push_back(w);
			extend(start, w);
			path.pop_back();
			used[static_cast<std::size_t>(w)] = false;
		}
	};

	for (int s = 0; s < n; ++s) {
		used[static_cast<std::size_t>(s)] = true;
		path.push_back(s);
		extend(s, s);
		path.pop_back();
		used[static_cast<std::size_t>(s)] = false;
	}
	std::sort(cycles.begin(), cycles.end());
	return cycles;
}

/// Circularity recomputed from the brute-force cycle set and the matrix
/// definition directly.
inline std::optional<double> brute_force_lambda(const tmn::TmnNetwork& net)
{
	const auto gamma = tmn::mass_flow_matrix(net);
	const auto cycles = brute_force_cycles(net);
	std::set<std::pair<int, int>> on_cycle;
	double cm_sum = 0.0;
	for (const auto& c : cycles) {
		double sum = 0.0;
		for (std::size_t t = 0; t < c.length(); ++t) {
			const int i = c.vertices[t];
			const int j = c.vertices[(t + 1) % c.length()];
			sum += gamma.flow(i, j);
			on_cycle.emplace(i, j);
		}
		cm_sum += sum / static_cast<double>(c.length());
	}
	double leak = 0.0;
	for (int i : gamma.vertex_ids)
		for (int j : gamma.vertex_ids)
			if (i != j && gamma.flow(i, j) > 0.0 && !on_cycle.count({i, j}))
				leak += gamma.flow(i, j);
	if (cm_sum + leak == 0.0)
		return std::nullopt;
	return cm_sum / (cm_sum + leak);
}

/// Random digraph with up to max_vertices vertices and arc probability p.
inline tmn::TmnNetwork random_network(std::mt19937& rng, int max_vertices = 6, double arc_prob = 0.35)
{
	std::uniform_int_distribution<int> nv_dist(1, max_vertices);
	std::uniform_real_distribution<double> coin(0.0, 1.0);
	std::uniform_real_distribution<double> flow_dist(0.1, 2.0);

	tmn::TmnNetwork net;
	const int n = nv_dist(rng);
	for (int k = 1; k <= n; ++k)
		net.vertices.push_back({k, 1.0, 1.0});
	int arc_k = n + 1;
	for (int i = 1; i <= n; ++i)
		for (int j = 1; j <= n; ++j)
			if (i != j && coin(rng) < arc_prob)
				net.arcs.push_back({arc_k++, i, j, flow_dist(rng), ""});
	return tmn::build_network(std::move(net));
}

} // namespace tmn_test
