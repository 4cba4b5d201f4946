#pragma once

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "tmn/network.hpp"

namespace tmn {

/// Known quantities handed to solve_consistent_flows. Any arc or vertex
/// not listed is treated as an unknown of the balance system.
struct BalanceKnowns {
	std::map<int, double> arc_flows;    // arc k -> kg/s
	std::map<int, double> stock_rates;  // vertex k -> kg/s
};

struct FlowSolution {
	enum class Status { solved, needs_inversion };

	Status status = Status::solved;
	std::map<int, double> arc_flows;    // every arc, known + solved
	std::map<int, double> stock_rates;  // every vertex, known + solved
	std::vector<int> negative_arcs;     // arcs whose required flow is negative: inversion candidates
};

/// Complete the unknown arc flows and stock rates so every vertex balance
/// holds. The balances are linear in the unknowns; the system is solved
/// exactly. A unique solution with negative arc flows is returned as a
/// diagnosis (needs_inversion) rather than auto-repaired.
inline FlowSolution solve_consistent_flows(const TmnNetwork& net, const BalanceKnowns& known,
                                           double tol = 1e-12)
{
	for (const auto& [k, f] : known.arc_flows)
		if (!net.find_arc(k))
			throw TmnError(errc::unknown_arc, "known flow refers to missing arc " + std::to_string(k));
	for (const auto& [k, r] : known.stock_rates)
		if (!net.find_vertex(k))
			throw TmnError(errc::unknown_vertex, "known rate refers to missing vertex " + std::to_string(k));

	std::vector<int> unknown_arcs, unknown_rates;
	for (const auto& a : net.arcs)
		if (!known.arc_flows.count(a.k))
			unknown_arcs.push_back(a.k);
	for (const auto& v : net.vertices)
		if (!known.stock_rates.count(v.k))
			unknown_rates.push_back(v.k);

	const auto n_eq = static_cast<Eigen::Index>(net.vertices.size());
	const auto n_unknown = static_cast<Eigen::Index>(unknown_arcs.size() + unknown_rates.size());

	// One balance equation per vertex: sum(in) - sum(out) - dm/dt = 0.
	Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n_eq, n_unknown);
	Eigen::VectorXd b = Eigen::VectorXd::Zero(n_eq);

	auto column_of_arc = [&](int k) {
		return static_cast<Eigen::Index>(
			std::find(unknown_arcs.begin(), unknown_arcs.end(), k) - unknown_arcs.begin());
	};
	auto column_of_rate = [&](int k) {
		return static_cast<Eigen::Index>(unknown_arcs.size()) +
		       static_cast<Eigen::Index>(
		           std::find(unknown_rates.begin(), unknown_rates.end(), k) - unknown_rates.begin());
	};

	for (Eigen::Index row = 0; row < n_eq; ++row) {
		const int vk = net.vertices[static_cast<std::size_t>(row)].k;
		for (const auto& a : net.arcs) {
			const double sign = (a.head == vk ? 1.0 : 0.0) - (a.tail == vk ? 1.0 : 0.0);
			if (sign == 0.0)
				continue;
			if (auto it = known.arc_flows.find(a.k); it != known.arc_flows.end())
				b(row) -= sign * it->second;
			else
				A(row, column_of_arc(a.k)) += sign;
		}
		if (auto it = known.stock_rates.find(vk); it != known.stock_rates.end())
			b(row) += it->second;
		else
			A(row, column_of_rate(vk)) -= 1.0;
	}

	if (n_unknown == 0) {
		if (b.size() > 0 && b.lpNorm<Eigen::Infinity>() > tol)
			throw TmnError(errc::inconsistent, "vertex balances admit no solution");
		FlowSolution trivial;
		trivial.arc_flows = known.arc_flows;
		trivial.stock_rates = known.stock_rates;
		return trivial;
	}

	Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
	lu.setThreshold(tol);
	const auto rank = lu.rank();
	if (rank < n_unknown)
		throw TmnError(errc::underdetermined,
		               "balance system has " + std::to_string(n_unknown - rank) + " free unknowns");
	Eigen::VectorXd x = lu.solve(b);
	if ((A * x - b).lpNorm<Eigen::Infinity>() > tol * (1.0 + b.lpNorm<Eigen::Infinity>()))
		throw TmnError(errc::inconsistent, "vertex balances admit no solution");

	FlowSolution sol;
	sol.arc_flows = known.arc_flows;
	sol.stock_rates = known.stock_rates;
	for (std::size_t i = 0; i < unknown_arcs.size(); ++i) {
		const double f = x(static_cast<Eigen::Index>(i));
		sol.arc_flows[unknown_arcs[i]] = f;
		if (f < -tol)
			sol.negative_arcs.push_back(unknown_arcs[i]);
	}
	for (std::size_t i = 0; i < unknown_rates.size(); ++i)
		sol.stock_rates[unknown_rates[i]] = x(static_cast<Eigen::Index>(unknown_arcs.size() + i));

	sol.status = sol.negative_arcs.empty() ? FlowSolution::Status::solved
	                                       : FlowSolution::Status::needs_inversion;
	return sol;
}

} // namespace tmn
