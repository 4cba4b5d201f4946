#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "tmn/error.hpp"

namespace tmn {

/// One classical 4th-order Runge-Kutta step. `rate(x, t)` must return a
/// vector of the same dimension as `x`.
template <typename Vec, typename RateFn>
Vec rk4_step(RateFn&& rate, const Vec& x, double t, double h)
{
	if (!(h > 0.0))
		throw TmnError(errc::invalid_parameter, "rk4 step size must be positive");
	const Vec k1 = rate(x, t);
	const Vec k2 = rate(Vec(x + 0.5 * h * k1), t + 0.5 * h);
	const Vec k3 = rate(Vec(x + 0.5 * h * k2), t + 0.5 * h);
	const Vec k4 = rate(Vec(x + h * k3), t + h);
	Vec next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
	if (!next.allFinite())
		throw TmnError(errc::non_finite_rate, "integration produced a non-finite state");
	return next;
}

} // namespace tmn
