#pragma once

#include <cmath>
#include <functional>

#include <Eigen/Dense>

#include "tmn/error.hpp"

namespace tmn {

/// AM2 two-stage anaerobic digestion constants plus the reservoir
/// coupling quantities (biomass density, working volume).
struct DigesterParams {
	double alpha = 0.5;      // bacteria retention fraction, in (0, 1]
	double S1_in = 10.0;     // inlet organic substrate, g/L
	double S2_in = 80.0;     // inlet volatile fatty acids, mmol/L
	double k1 = 42.14;       // substrate yield, g/g
	double k2 = 116.5;       // VFA production yield, mmol/g
	double k3 = 268.0;       // VFA consumption yield, mmol/g
	double mu1_max = 1.2;    // 1/day
	double mu2_max = 0.74;   // 1/day
	double K_S1 = 7.1;       // g/L
	double K_S2 = 9.28;      // mmol/L
	double K_I2 = 256.0;     // mmol/L, Haldane inhibition
	double k6 = 453.0;       // methane yield, mmol/g
	double rho_b = 1000.0;   // biomass density, kg/m^3
	double V_d = 1.0;        // digester working volume, m^3

	void validate() const
	{
		if (!(alpha > 0.0 && alpha <= 1.0))
			throw TmnError(errc::invalid_parameter, "digester alpha must be in (0, 1]");
		for (double v : {S1_in, S2_in, k1, k2, k3, mu1_max, mu2_max, K_S1, K_S2, K_I2, k6, rho_b, V_d})
			if (!(v > 0.0))
				throw TmnError(errc::invalid_parameter, "digester parameters must be strictly positive");
	}
};

/// Digester state, ordered [X1, S1, X2, S2]:
/// acidogenic biomass, organic substrate, methanogenic biomass, volatile fatty acids.
using DigesterState = Eigen::Vector4d;

/// Monod growth rate of the acidogenic bacteria.
inline double monod_mu1(double S1, const DigesterParams& p)
{
	return p.mu1_max * S1 / (S1 + p.K_S1);
}

/// Haldane growth rate of the methanogenic bacteria: unimodal in S2 with
/// substrate inhibition at high VFA concentration.
inline double haldane_mu2(double S2, const DigesterParams& p)
{
	return p.mu2_max * S2 / (S2 + p.K_S2 + (S2 / p.K_I2) * (S2 / p.K_I2));
}

/// Right-hand side of the four-state AM2 system under dilution inputs
/// u = [D1, D2, D3, D4] (1/day). Time unit: days.
inline DigesterState digester_rates(const DigesterState& x, const Eigen::Vector4d& u,
                                    const DigesterParams& p)
{
	const double X1 = x(0), S1 = x(1), X2 = x(2), S2 = x(3);
	const double mu1 = monod_mu1(S1, p);
	const double mu2 = haldane_mu2(S2, p);
	DigesterState dx;
	dx(0) = (mu1 - p.alpha * u(0)) * X1;
	dx(1) = u(2) * (p.S1_in - S1) - p.k1 * mu1 * X1;
	dx(2) = (mu2 - p.alpha * u(1)) * X2;
	dx(3) = u(3) * (p.S2_in - S2) + p.k2 * mu1 * X1 - p.k3 * mu2 * X2;
	return dx;
}

/// Drift term of the control-affine split: digester_rates with u = 0.
inline DigesterState digester_drift(const DigesterState& x, const DigesterParams& p)
{
	return digester_rates(x, Eigen::Vector4d::Zero(), p);
}

/// Biomethane production flow q_M = k6 mu2(S2) X2.
inline double methane_flow(double S2, double X2, const DigesterParams& p)
{
	return p.k6 * haldane_mu2(S2, p) * X2;
}

/// Equilibrium state under a constant dilution vector: closed-form
/// per-channel solve (Monod inversion, Haldane quadratic on the
/// pre-inhibition branch, then the two linear biomass balances),
/// polished by damped Newton on the full system.
inline DigesterState digester_equilibrium(const Eigen::Vector4d& u, const DigesterParams& p)
{
	const double c1 = p.alpha * u(0);
	const double c2 = p.alpha * u(1);
	if (!(c1 > 0.0 && c1 < p.mu1_max))
		throw TmnError(errc::invalid_parameter, "no Monod equilibrium: alpha*D1 outside (0, mu1_max)");
	const double S1 = p.K_S1 * c1 / (p.mu1_max - c1);

	// mu2(S2) = c2  =>  (c2/K_I2^2) S2^2 + (c2 - mu2_max) S2 + c2 K_S2 = 0
	const double qa = c2 / (p.K_I2 * p.K_I2);
	const double qb = c2 - p.mu2_max;
	const double qc = c2 * p.K_S2;
	const double disc = qb * qb - 4.0 * qa * qc;
	if (!(disc > 0.0))
		throw TmnError(errc::invalid_parameter, "no Haldane equilibrium: alpha*D2 above peak rate");
	const double S2 = (-qb - std::sqrt(disc)) / (2.0 * qa); // smaller root: stable branch

	const double X1 = u(2) * (p.S1_in - S1) / (p.k1 * c1);
	const double X2 = (u(3) * (p.S2_in - S2) + p.k2 * c1 * X1) / (p.k3 * c2);

	DigesterState x(X1, S1, X2, S2);
	for (int iter = 0; iter < 25; ++iter) {
		const DigesterState f = digester_rates(x, u, p);
		if (f.lpNorm<Eigen::Infinity>() < 1e-13)
			break;
		Eigen::Matrix4d J;
		const double h = 1e-7;
		for (int j = 0; j < 4; ++j) {
			DigesterState xp = x, xm = x;
			xp(j) += h;
			xm(j) -= h;
			J.col(j) = (digester_rates(xp, u, p) - digester_rates(xm, u, p)) / (2.0 * h);
		}
		x -= J.fullPivLu().solve(f);
	}
	return x;
}

} // namespace tmn
