#pragma once

#include <algorithm>
#include <cstddef>
#include <list>
#include <optional>
#include <set>
#include <vector>

#include "tmn/network.hpp"

namespace tmn {

/// An elementary directed cycle of the mass-flow digraph, stored as the
/// canonical vertex sequence (rotated so the smallest vertex id comes
/// first; the last vertex closes back to the first).
struct DirectedCycle {
	std::vector<int> vertices;

	std::size_t length() const noexcept { return vertices.size(); }

	bool operator==(const DirectedCycle&) const = default;
	bool operator<(const DirectedCycle& other) const { return vertices < other.vertices; }
};

inline DirectedCycle canonical_cycle(std::vector<int> vertices)
{
	auto min_it = std::min_element(vertices.begin(), vertices.end());
	std::rotate(vertices.begin(), min_it, vertices.end());
	return DirectedCycle{std::move(vertices)};
}

inline constexpr std::size_t default_cycle_budget = 1'000'000;

namespace detail {

// Johnson's elementary-circuit enumeration on an adjacency-list digraph
// over vertex positions 0..n-1. Emits canonical sequences of positions.
class JohnsonEnumerator {
public:
	JohnsonEnumerator(std::vector<std::vector<int>> adjacency, std::size_t budget)
		: adj_(std::move(adjacency)), budget_(budget)
	{
		const auto n = adj_.size();
		blocked_.assign(n, false);
		block_map_.assign(n, {});
		for (auto& nbrs : adj_)
			std::sort(nbrs.begin(), nbrs.end());
	}

	std::vector<std::vector<int>> run()
	{
		const int n = static_cast<int>(adj_.size());
		for (start_ = 0; start_ < n; ++start_) {
			for (int v = start_; v < n; ++v) {
				blocked_[v] = false;
				block_map_[v].clear();
			}
			circuit(start_);
		}
		return std::move(cycles_);
	}

private:
	bool circuit(int v)
	{
		bool found = false;
		stack_.push_back(v);
		blocked_[v] = true;
		for (int w : adj_[v]) {
			if (w < start_)
				continue; // subgraph induced by vertices >= start_
			if (w == start_) {
				if (cycles_.size() >= budget_)
					throw TmnError(errc::cycle_budget_exceeded,
					               "more than " + std::to_string(budget_) + " directed cycles");
				cycles_.push_back(stack_);
				found = true;
			} else if (!blocked_[w]) {
				if (circuit(w))
					found = true;
			}
		}
		if (found) {
			unblock(v);
		} else {
			for (int w : adj_[v]) {
				if (w < start_)
					continue;
				auto& bm = block_map_[w];
				if (std::find(bm.begin(), bm.end(), v) == bm.end())
					bm.push_back(v);
			}
		}
		stack_.pop_back();
		return found;
	}

	void unblock(int v)
	{
		blocked_[v] = false;
		auto pending = std::move(block_map_[v]);
		block_map_[v].clear();
		for (int w : pending)
			if (blocked_[w])
				unblock(w);
	}

	std::vector<std::vector<int>> adj_;
	std::size_t budget_;
	int start_ = 0;
	std::vector<bool> blocked_;
	std::vector<std::vector<int>> block_map_;
	std::vector<int> stack_;
	std::vector<std::vector<int>> cycles_;
};

// Aggregated digraph of a network restricted to positive flows: arcs with
// zero rate carry no material and do not count for circularity.
inline std::vector<std::vector<int>> positive_flow_adjacency(const TmnNetwork& net,
                                                             const MassFlowMatrix& gamma)
{
	const auto n = static_cast<Eigen::Index>(gamma.vertex_ids.size());
	std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
	for (Eigen::Index i = 0; i < n; ++i)
		for (Eigen::Index j = 0; j < n; ++j)
			if (i != j && gamma.gamma(i, j) > 0.0)
				adj[static_cast<std::size_t>(i)].push_back(static_cast<int>(j));
	(void)net;
	return adj;
}

} // namespace detail

/// All elementary directed cycles of the mass-flow digraph, each reported
/// once in canonical form, sorted lexicographically on the vertex
/// sequence. Cycle enumeration runs on the aggregated digraph of
/// positive flows (one arc per ordered vertex pair).
inline std::vector<DirectedCycle> enumerate_directed_cycles(const TmnNetwork& net,
                                                            std::size_t max_cycles = default_cycle_budget)
{
	const auto gamma = mass_flow_matrix(net);
	detail::JohnsonEnumerator johnson(detail::positive_flow_adjacency(net, gamma), max_cycles);
	auto position_cycles = johnson.run();

	std::vector<DirectedCycle> out;
	out.reserve(position_cycles.size());
	for (auto& pc : position_cycles) {
		std::vector<int> ids(pc.size());
		for (std::size_t t = 0; t < pc.size(); ++t)
			ids[t] = gamma.vertex_ids[static_cast<std::size_t>(pc[t])];
		out.push_back(canonical_cycle(std::move(ids)));
	}
	std::sort(out.begin(), out.end());
	return out;
}

/// Cycle mean CM(phi) = (1/l) * sum of the aggregated flow rates along the cycle.
inline double cycle_mean(const DirectedCycle& cycle, const MassFlowMatrix& gamma)
{
	const std::size_t l = cycle.length();
	double sum = 0.0;
	for (std::size_t t = 0; t < l; ++t)
		sum += gamma.flow(cycle.vertices[t], cycle.vertices[(t + 1) % l]);
	return sum / static_cast<double>(l);
}

/// A non-cycle ("leak") flow, identified by its ordered vertex pair.
struct LeakFlow {
	int tail = 0;
	int head = 0;
	double flow = 0.0; // kg/s, aggregated
};

struct CircularityReport {
	std::optional<double> lambda;  // empty when the network has no flow at all
	std::vector<std::pair<DirectedCycle, double>> cycles; // cycle, cycle mean
	std::vector<LeakFlow> leak_set;
	std::size_t n_phi = 0;
};

/// Graph-based circularity indicator: sum of cycle means over sum of
/// cycle means plus leak flows. Undefined (0/0) when there is no flow.
inline CircularityReport circularity(const TmnNetwork& net,
                                     std::size_t max_cycles = default_cycle_budget)
{
	const auto gamma = mass_flow_matrix(net);
	auto cycles = enumerate_directed_cycles(net, max_cycles);

	CircularityReport report;
	report.n_phi = cycles.size();

	std::set<std::pair<int, int>> cycle_pairs;
	double cm_sum = 0.0;
	for (auto& c : cycles) {
		const double cm = cycle_mean(c, gamma);
		for (std::size_t t = 0; t < c.length(); ++t)
			cycle_pairs.emplace(c.vertices[t], c.vertices[(t + 1) % c.length()]);
		cm_sum += cm;
		report.cycles.emplace_back(std::move(c), cm);
	}

	double leak_sum = 0.0;
	const auto n = static_cast<Eigen::Index>(gamma.vertex_ids.size());
	for (Eigen::Index i = 0; i < n; ++i) {
		for (Eigen::Index j = 0; j < n; ++j) {
			if (i == j || gamma.gamma(i, j) <= 0.0)
				continue;
			const int ti = gamma.vertex_ids[static_cast<std::size_t>(i)];
			const int hj = gamma.vertex_ids[static_cast<std::size_t>(j)];
			if (!cycle_pairs.count({ti, hj})) {
				report.leak_set.push_back({ti, hj, gamma.gamma(i, j)});
				leak_sum += gamma.gamma(i, j);
			}
		}
	}

	const double denom = cm_sum + leak_sum;
	if (denom > 0.0)
		report.lambda = cm_sum / denom;
	return report;
}

} // namespace tmn
