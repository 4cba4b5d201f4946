#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tmn/error.hpp"

namespace tmn {

/// A material class carried by the network (e.g. "biomass").
struct Material {
	std::string id;
	std::string label;
};

/// Vertex compartment: stores/transforms/uses material. Self-referential
/// indices (i = j = k), weight is the mass stock in kg.
struct VertexCompartment {
	int k = 0;              // compartment index, doubles as the digraph vertex id
	double stock = 0.0;     // kg
	double initial_stock = 0.0; // kg
};

/// Arc compartment: moves material from vertex `tail` to vertex `head`.
/// Weight is the mass flow rate in kg/s.
struct ArcCompartment {
	int k = 0;
	int tail = 0;
	int head = 0;
	double flow = 0.0;      // kg/s
	std::string material;
};

/// A thermodynamical material network: the compartment set split into
/// vertex compartments (stocks) and arc compartments (flows).
struct TmnNetwork {
	std::vector<Material> materials;
	std::vector<VertexCompartment> vertices;
	std::vector<ArcCompartment> arcs;

	std::size_t n_v() const noexcept { return vertices.size(); }
	std::size_t n_a() const noexcept { return arcs.size(); }
	std::size_t n_c() const noexcept { return vertices.size() + arcs.size(); }

	const VertexCompartment* find_vertex(int k) const
	{
		auto it = std::find_if(vertices.begin(), vertices.end(),
		                       [k](const auto& v) { return v.k == k; });
		return it == vertices.end() ? nullptr : &*it;
	}

	const ArcCompartment* find_arc(int k) const
	{
		auto it = std::find_if(arcs.begin(), arcs.end(),
		                       [k](const auto& a) { return a.k == k; });
		return it == arcs.end() ? nullptr : &*it;
	}
};

/// Validate a network description and return it as a value. Throws
/// DuplicateId, DanglingEndpoint, SelfLoopArc or NegativeWeight.
inline TmnNetwork build_network(TmnNetwork net)
{
	std::set<std::string> material_ids;
	for (const auto& m : net.materials) {
		if (!material_ids.insert(m.id).second)
			throw TmnError(errc::duplicate_id, "material id '" + m.id + "' repeats");
	}
	std::set<int> compartment_ids;
	std::set<int> vertex_ids;
	for (const auto& v : net.vertices) {
		if (!compartment_ids.insert(v.k).second)
			throw TmnError(errc::duplicate_id, "compartment index " + std::to_string(v.k) + " repeats");
		vertex_ids.insert(v.k);
		if (v.stock < 0.0 || v.initial_stock < 0.0)
			throw TmnError(errc::negative_weight, "vertex " + std::to_string(v.k) + " has negative stock");
	}
	for (const auto& a : net.arcs) {
		if (!compartment_ids.insert(a.k).second)
			throw TmnError(errc::duplicate_id, "compartment index " + std::to_string(a.k) + " repeats");
		if (a.tail == a.head)
			throw TmnError(errc::self_loop_arc, "arc " + std::to_string(a.k) + " has tail = head = " + std::to_string(a.tail));
		if (!vertex_ids.count(a.tail))
			throw TmnError(errc::dangling_endpoint, "arc " + std::to_string(a.k) + " tail " + std::to_string(a.tail) + " is not a vertex");
		if (!vertex_ids.count(a.head))
			throw TmnError(errc::dangling_endpoint, "arc " + std::to_string(a.k) + " head " + std::to_string(a.head) + " is not a vertex");
		if (a.flow < 0.0)
			throw TmnError(errc::negative_weight, "arc " + std::to_string(a.k) + " has negative flow");
	}
	return net;
}

/// Square mass-flow matrix: stocks on the diagonal, aggregated arc flow
/// rates off-diagonal. Rows/columns follow `vertex_ids` (ascending k).
struct MassFlowMatrix {
	Eigen::MatrixXd gamma;
	std::vector<int> vertex_ids;

	int index_of(int k) const
	{
		auto it = std::find(vertex_ids.begin(), vertex_ids.end(), k);
		if (it == vertex_ids.end())
			throw TmnError(errc::unknown_vertex, "vertex " + std::to_string(k) + " not in matrix");
		return static_cast<int>(it - vertex_ids.begin());
	}

	/// Aggregated flow rate from vertex i to vertex j (compartment indices).
	double flow(int i, int j) const { return gamma(index_of(i), index_of(j)); }
};

inline MassFlowMatrix mass_flow_matrix(const TmnNetwork& net)
{
	MassFlowMatrix m;
	m.vertex_ids.reserve(net.vertices.size());
	for (const auto& v : net.vertices)
		m.vertex_ids.push_back(v.k);
	std::sort(m.vertex_ids.begin(), m.vertex_ids.end());

	const auto n = static_cast<Eigen::Index>(m.vertex_ids.size());
	m.gamma = Eigen::MatrixXd::Zero(n, n);
	for (const auto& v : net.vertices)
		m.gamma(m.index_of(v.k), m.index_of(v.k)) = v.stock;
	for (const auto& a : net.arcs)
		m.gamma(m.index_of(a.tail), m.index_of(a.head)) += a.flow; // multi-arcs aggregate
	return m;
}

/// Mass-balance residual at vertex k: inflow - outflow - d(m_k)/dt.
/// Zero means the compartmental balance holds.
inline double vertex_balance_residual(const TmnNetwork& net, int k, double stock_rate)
{
	if (!net.find_vertex(k))
		throw TmnError(errc::unknown_vertex, "vertex " + std::to_string(k) + " not in network");
	double inflow = 0.0, outflow = 0.0;
	for (const auto& a : net.arcs) {
		if (a.head == k)
			inflow += a.flow;
		if (a.tail == k)
			outflow += a.flow;
	}
	return inflow - outflow - stock_rate;
}

/// Swap tail and head of one arc; everything else unchanged.
inline TmnNetwork invert_arc(TmnNetwork net, int arc_k)
{
	auto it = std::find_if(net.arcs.begin(), net.arcs.end(),
	                       [arc_k](const auto& a) { return a.k == arc_k; });
	if (it == net.arcs.end())
		throw TmnError(errc::unknown_arc, "arc " + std::to_string(arc_k) + " not in network");
	std::swap(it->tail, it->head);
	return net;
}

} // namespace tmn
