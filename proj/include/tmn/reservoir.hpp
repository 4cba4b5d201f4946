#pragma once

#include <Eigen/Dense>

#include "tmn/digester.hpp"

namespace tmn {

enum class ReservoirMode { discrete_filling, continuous_draining };

struct ReservoirState {
	double m_r = 0.0; // kg
	ReservoirMode mode = ReservoirMode::discrete_filling;
};

/// Discrete filling phase: m_r(n+1) = m_r(n) + delta_{n_u}(n) m_l.
inline double reservoir_fill_step(double m_r, int n, int n_u, double m_l)
{
	return (n == n_u) ? m_r + m_l : m_r;
}

/// Continuous draining phase: dm_r/dt = -rho_b V_d sum_j D_j, in kg/day
/// for dilution rates in 1/day. The engine converts to its master clock.
inline double reservoir_drain_rate(const Eigen::Vector4d& u, const DigesterParams& p)
{
	return -p.rho_b * p.V_d * u.sum();
}

} // namespace tmn
