#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "tmn/digester.hpp"
#include "tmn/truck.hpp"

namespace tmn {

// ---------------------------------------------------------------------------
// Open-loop truck control
// ---------------------------------------------------------------------------

/// Torque magnitude that delivers the load over distance H in time t_u
/// with a symmetric accelerate/decelerate profile.
inline double tau_bar(const TruckParams& p)
{
	return 2.0 * (p.m_v + p.m_l) * p.r * p.H / (p.t_u * p.t_u);
}

/// Symmetric bang-bang torque plan, in the truck's local clock.
struct BangBangPlan {
	double tau_bar = 0.0; // N m
	double t_l = 0.0;     // start time, s
	double t_u = 600.0;   // delivery time, s
};

inline double bang_bang_torque(double t, const BangBangPlan& plan)
{
	if (t >= plan.t_l && t < plan.t_u / 2.0)
		return plan.tau_bar;
	if (t >= plan.t_u / 2.0 && t < plan.t_u)
		return -plan.tau_bar;
	return 0.0;
}

// ---------------------------------------------------------------------------
// Finite-time digester control
// ---------------------------------------------------------------------------

/// Chatter guard around the non-Lipschitz origin: inside this ball the
/// feedback holds the nominal input and the engine clamps the state.
inline constexpr double origin_dead_zone = 1e-9;

/// Tolerance below which an actuation channel counts as lost.
inline constexpr double singular_g_tol = 1e-9;

/// V(x~) = p^(2/3) (x~' x~)^(2/3), the finite-time Lyapunov function.
inline double lyapunov_V(const Eigen::Vector4d& xt, double p_gain)
{
	return std::pow(p_gain, 2.0 / 3.0) * std::pow(xt.squaredNorm(), 2.0 / 3.0);
}

/// Gradient row of V as a column vector: (4/3) p^(2/3) (x~'x~)^(-1/3) x~.
/// Singular at the origin; the engine substitutes zero there by convention.
inline Eigen::Vector4d lyapunov_grad(const Eigen::Vector4d& xt, double p_gain)
{
	const double s = xt.squaredNorm();
	if (s == 0.0)
		throw TmnError(errc::origin_singularity, "Lyapunov gradient undefined at the origin");
	return (4.0 / 3.0) * std::pow(p_gain, 2.0 / 3.0) * std::pow(s, -1.0 / 3.0) * xt;
}

/// Input matrix of the control-affine form x_dot = f(x) + G(x) u with
/// u = [D1, D2, D3, D4] and state order [X1, S1, X2, S2]. Permuted
/// diagonal: exactly one nonzero per row/column.
inline Eigen::Matrix4d input_matrix_G(const DigesterState& x, const DigesterParams& p)
{
	Eigen::Matrix4d G = Eigen::Matrix4d::Zero();
	G(0, 0) = -p.alpha * x(0);        // X1 row, D1 channel
	G(1, 2) = p.S1_in - x(1);         // S1 row, D3 channel
	G(2, 1) = -p.alpha * x(2);        // X2 row, D2 channel
	G(3, 3) = p.S2_in - x(3);         // S2 row, D4 channel
	for (double entry : {G(0, 0), G(1, 2), G(2, 1), G(3, 3)})
		if (std::abs(entry) < singular_g_tol)
			throw TmnError(errc::singular_g, "actuation channel lost (near-zero G entry)");
	return G;
}

/// Finite-time feedback gains: scalar p, working point x*, nominal
/// input u* with f(x*) + G(x*) u* = 0.
struct FiniteTimeGains {
	double p = 1.0;
	DigesterState x_star = DigesterState::Zero();
	Eigen::Vector4d u_star = Eigen::Vector4d::Zero();
};

/// Translated drift with the nominal input folded in, so f~(0) = 0.
inline DigesterState translated_drift(const Eigen::Vector4d& xt, const FiniteTimeGains& gains,
                                      const DigesterParams& p)
{
	const DigesterState x = xt + gains.x_star;
	return digester_drift(x, p) + input_matrix_G(x, p) * gains.u_star;
}

/// Dilution command that renders the closed loop the gradient system
/// x~_dot = -1/2 V'(x~)^T. Returns u* exactly inside the origin dead zone.
inline Eigen::Vector4d finite_time_feedback(const Eigen::Vector4d& xt, const FiniteTimeGains& gains,
                                            const DigesterParams& p)
{
	if (xt.norm() <= origin_dead_zone)
		return gains.u_star;
	const DigesterState x = xt + gains.x_star;
	const Eigen::Matrix4d G = input_matrix_G(x, p);
	const DigesterState f_t = digester_drift(x, p) + G * gains.u_star;
	const Eigen::Vector4d target = -0.5 * lyapunov_grad(xt, gains.p) - f_t;
	return gains.u_star + G.inverse() * target;
}

/// Time at which the gradient system reaches the origin from x~0:
/// with s = x~'x~, s^(1/3) decays affinely with slope -(4/9) p^(2/3).
inline double settling_time_bound(const Eigen::Vector4d& xt0, double p_gain)
{
	return (9.0 / 4.0) * std::cbrt(xt0.squaredNorm()) / std::pow(p_gain, 2.0 / 3.0);
}

/// Radius below which the gradient system reaches the origin within one
/// step of size h. The vector field is non-Lipschitz there and a fixed
/// RK4 step cannot resolve the terminal arc, so integrators snap states
/// inside this radius to the origin.
inline double settling_snap_radius(double h, double p_gain)
{
	return std::pow((4.0 / 9.0) * std::pow(p_gain, 2.0 / 3.0) * h, 1.5);
}

} // namespace tmn
