#pragma once

#include <string>

#include "tmn/error.hpp"

namespace tmn {

/// Biomass hub: a discrete-time stock that releases one truckload at the
/// loading step n_l.
struct HubParams {
	double m_l = 200.0;    // truckload, kg
	double m_1_0 = 5000.0; // initial hub stock, kg
	int n_l = 7;           // loading step index

	void validate() const
	{
		if (m_l < 0.0)
			throw TmnError(errc::invalid_parameter, "truckload must be nonnegative");
		if (m_1_0 < m_l)
			throw TmnError(errc::invalid_parameter, "initial hub stock below one truckload");
		if (n_l < 0)
			throw TmnError(errc::invalid_parameter, "loading step must be nonnegative");
	}
};

/// One discrete hub update: m1(n+1) = m1(n) - delta_{n_l}(n) m_l.
inline double hub_step(double m1, int n, const HubParams& p)
{
	const double next = (n == p.n_l) ? m1 - p.m_l : m1;
	if (next < 0.0)
		throw TmnError(errc::stock_underflow,
		               "hub stock would drop to " + std::to_string(next) + " kg at step " + std::to_string(n));
	return next;
}

} // namespace tmn
