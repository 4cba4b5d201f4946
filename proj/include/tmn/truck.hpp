#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "tmn/error.hpp"

namespace tmn {

/// Three-wheel transport vehicle parameters. Derived quantities
/// (total mass, inertia term) are recomputed on demand.
struct TruckParams {
	double m_v = 3500.0;  // vehicle mass, kg
	double m_l = 200.0;   // load mass, kg
	double I_z = 3000.0;  // yaw inertia, kg m^2
	double a = 2.0;       // chassis posterior length, m
	double b = 3.0;       // chassis anterior length, m
	double r = 0.4;       // wheel radius, m
	double l = 2.0;       // chassis width, m
	double d = 0.1;       // interaxis, m
	double H = 8000.0;    // hub-plant distance, m
	double t_u = 600.0;   // delivery time, s

	double total_mass() const noexcept { return m_v + m_l; }
	double epsilon() const noexcept { return I_z * r * r / (l * l); }
};

struct TruckState {
	double theta1 = 0.0;      // rad
	double theta2 = 0.0;      // rad
	double theta3 = 0.0;      // rad
	double psi = 0.0;         // steering angle, rad
	double theta1_dot = 0.0;  // rad/s
	double theta2_dot = 0.0;  // rad/s

	/// Center-of-mass coordinate in straight-line mode.
	double x_G(const TruckParams& p) const noexcept { return p.r * theta1 + p.a; }
};

/// Inertia matrix of the actuated wheel pair.
inline Eigen::Matrix2d truck_B_matrix(const TruckParams& p)
{
	const double diag = p.a * p.a * p.r * p.r / (p.l * p.l) + p.r * p.r / 4.0 + p.epsilon();
	const double off = -p.a * p.a * p.r * p.r / (p.l * p.l) + p.r * p.r / 4.0 - p.epsilon();
	Eigen::Matrix2d B;
	B << diag, off, off, diag;
	B *= p.total_mass();
	if (std::abs(B.determinant()) <= 1e-12 * B.squaredNorm())
		throw TmnError(errc::singular_b, "truck inertia matrix is singular");
	return B;
}

/// Wheel accelerations for given engine torques: B [th1dd; th2dd] = [tau1; tau2].
inline Eigen::Vector2d truck_forward_dynamics(double tau1, double tau2, const TruckParams& p)
{
	const Eigen::Matrix2d B = truck_B_matrix(p);
	return B.inverse() * Eigen::Vector2d(tau1, tau2);
}

/// Rates of the non-actuated joints: [theta3_dot; psi_dot] = F(psi) [theta1_dot; theta2_dot].
inline Eigen::Vector2d truck_passive_rates(double psi, double theta1_dot, double theta2_dot,
                                           const TruckParams& p)
{
	const double alpha = (p.a + p.b) / p.l;
	const double rho = p.r / p.d;
	const double delta_minus = std::sin(psi) / 2.0 - p.d / p.l;
	const double delta_plus = std::sin(psi) / 2.0 + p.d / p.l;
	Eigen::Matrix2d F;
	F << std::cos(psi) / 2.0 - alpha * std::sin(psi), std::cos(psi) / 2.0 + alpha * std::sin(psi),
	     rho * (-delta_minus - alpha * std::cos(psi)), rho * (-delta_plus + alpha * std::cos(psi));
	return F * Eigen::Vector2d(theta1_dot, theta2_dot);
}

/// Straight-line reduction: with psi = 0 and tau1 = tau2 = tau the two
/// wheel equations collapse to m_vl r x_G_dd = 2 tau, independent of I_z.
inline double straight_line_accel(double tau, const TruckParams& p)
{
	return 2.0 * tau / (p.total_mass() * p.r);
}

} // namespace tmn
