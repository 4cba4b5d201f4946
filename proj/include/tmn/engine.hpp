#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "tmn/control.hpp"
#include "tmn/digester.hpp"
#include "tmn/hub.hpp"
#include "tmn/reservoir.hpp"
#include "tmn/rk4.hpp"
#include "tmn/trajectory.hpp"
#include "tmn/truck.hpp"

namespace tmn {

inline constexpr double seconds_per_day = 86400.0;

enum class ControlMode { open_loop, closed_loop };

/// The hub -> truck -> reservoir -> digester composition. Discrete step
/// indices n map onto the master clock through step_days; the truck runs
/// in seconds, the digester in days.
struct BiomethaneScenario {
	HubParams hub;
	TruckParams truck;
	DigesterParams digester;

	ControlMode mode = ControlMode::closed_loop;
	double p_gain = 1.0;
	Eigen::Vector4d u_nominal{0.5, 0.5, 0.5, 0.5};          // 1/day per channel
	Eigen::Vector4d x0_open{3.43, -0.13, 7.19, 3.74};       // absolute state
	Eigen::Vector4d xtilde0_closed{2.0, -2.0, 1.0, -1.0};   // translated state

	double step_days = 1.0;          // wall time of one discrete index
	int n_u = 8;                     // unloading step
	int n_d = 9;                     // digestion start step
	double digestion_span_days = 8.0;
	double truck_step_s = 0.01;
	double digester_step_days = 0.001;
};

struct BiomethaneSummary {
	double delivery_error_m = 0.0;
	double final_speed_m_per_s = 0.0;
	double hub_final_kg = 0.0;
	double reservoir_final_kg = 0.0;
	double digester_received_kg = 0.0;
	double methane_cumulative = 0.0;       // integral of q_M over the digestion span
	double settling_bound_days = 0.0;      // analytic, closed loop only
	std::optional<double> settling_time_days; // measured, closed loop only
	std::optional<double> feed_stopped_day;   // digestion-local time when the reservoir emptied
	Eigen::Vector4d digester_final_state = Eigen::Vector4d::Zero();
	Eigen::Vector4d x_star = Eigen::Vector4d::Zero();
	long negative_kinetics_samples = 0;
};

struct BiomethaneResult {
	std::map<std::string, Trajectory> trajectories;
	MassLedger ledger;
	BiomethaneSummary summary;
};

// ---------------------------------------------------------------------------
// Reusable integration drivers
// ---------------------------------------------------------------------------

/// Integrate the truck over [0, t_u] under a torque plan, sampling the
/// torque at each step start (zero-order hold) and splitting steps at the
/// plan's switching instants so no discontinuity falls mid-step. Uses the
/// full two-wheel forward dynamics; x_G = r theta1 + a.
inline Trajectory simulate_truck(const TruckParams& p, const BangBangPlan& plan, double h)
{
	Trajectory traj;
	traj.model_id = "truck";
	traj.time_unit = "s";
	traj.channels = {"x_G_m", "v_m_per_s", "tau_Nm", "theta1_rad", "theta1_dot_rad_per_s"};
	traj.step = h;

	const Eigen::Matrix2d B_inv = truck_B_matrix(p).inverse();

	// theta1, theta2, theta1_dot, theta2_dot
	Eigen::Vector4d state = Eigen::Vector4d::Zero();
	double t = 0.0;

	auto record = [&](double tau) {
		traj.append(t, {p.r * state(0) + p.a, p.r * state(2), tau, state(0), state(2)});
	};

	std::vector<double> breakpoints;
	for (double bp : {plan.t_l, plan.t_u / 2.0, plan.t_u})
		if (bp > 0.0 && bp < p.t_u)
			breakpoints.push_back(bp);
	breakpoints.push_back(p.t_u);

	record(bang_bang_torque(0.0, plan));
	double segment_start = 0.0;
	for (double segment_end : breakpoints) {
		if (segment_end <= segment_start)
			continue;
		const auto n_steps = static_cast<long>(std::ceil((segment_end - segment_start) / h - 1e-9));
		const double hs = (segment_end - segment_start) / static_cast<double>(n_steps);
		for (long i = 0; i < n_steps; ++i) {
			const double tau = bang_bang_torque(t, plan); // held over the step
			auto rate = [&](const Eigen::Vector4d& x, double) {
				const Eigen::Vector2d acc = B_inv * Eigen::Vector2d(tau, tau);
				return Eigen::Vector4d(x(2), x(3), acc(0), acc(1));
			};
			state = rk4_step(rate, state, t, hs);
			t = segment_start + static_cast<double>(i + 1) * hs;
			record(bang_bang_torque(t, plan));
		}
		segment_start = segment_end;
	}
	return traj;
}

/// Translated closed-loop digester right-hand side: plant drift plus the
/// finite-time feedback acting through G. Algebraically equal to the
/// gradient system -1/2 V'(x~)^T.
inline Eigen::Vector4d closed_loop_digester_rates(const Eigen::Vector4d& xt,
                                                  const FiniteTimeGains& gains,
                                                  const DigesterParams& p)
{
	if (xt.norm() <= origin_dead_zone)
		return Eigen::Vector4d::Zero();
	const Eigen::Vector4d x = xt + gains.x_star;
	const Eigen::Vector4d u = finite_time_feedback(xt, gains, p);
	return digester_drift(x, p) + input_matrix_G(x, p) * u;
}

/// The reference gradient system x~_dot = -1/2 V'(x~)^T with the same
/// origin convention as the closed loop.
inline Eigen::Vector4d gradient_system_rates(const Eigen::Vector4d& xt, double p_gain)
{
	if (xt.norm() <= origin_dead_zone)
		return Eigen::Vector4d::Zero();
	return -0.5 * lyapunov_grad(xt, p_gain);
}

/// Fixed-step integration of a translated 4-state system over [0, span]
/// with the near-origin clamp. Returns sampled (t, x~) pairs including
/// both endpoints.
template <typename RateFn>
std::vector<std::pair<double, Eigen::Vector4d>> integrate_translated(RateFn&& rate,
                                                                     Eigen::Vector4d xt0,
                                                                     double span, double h,
                                                                     double snap_radius = origin_dead_zone)
{
	std::vector<std::pair<double, Eigen::Vector4d>> samples;
	const auto n_steps = static_cast<long>(std::ceil(span / h - 1e-9));
	double t = 0.0;
	samples.emplace_back(t, xt0);
	for (long i = 0; i < n_steps; ++i) {
		xt0 = rk4_step(rate, xt0, t, h);
		if (xt0.norm() < std::max(origin_dead_zone, snap_radius))
			xt0.setZero();
		t = static_cast<double>(i + 1) * h;
		samples.emplace_back(t, xt0);
	}
	return samples;
}

// ---------------------------------------------------------------------------
// Full scenario
// ---------------------------------------------------------------------------

inline BiomethaneResult run_scenario(const BiomethaneScenario& scn)
{
	scn.hub.validate();
	scn.digester.validate();

	BiomethaneResult result;
	auto& ledger = result.ledger;
	ledger.open_account("hub", scn.hub.m_1_0);
	ledger.open_account("truck", 0.0);
	ledger.open_account("reservoir", 0.0);
	ledger.open_account("digester", 0.0);
	ledger.snapshot(0.0);

	// Phase 1: hub discrete steps, loading at n_l.
	Trajectory hub_traj;
	hub_traj.model_id = "hub";
	hub_traj.time_unit = "day";
	hub_traj.channels = {"m1_kg"};
	hub_traj.step = scn.step_days;
	double m1 = scn.hub.m_1_0;
	for (int n = 0; n <= scn.hub.n_l; ++n) {
		hub_traj.append(static_cast<double>(n) * scn.step_days, {m1});
		const double next = hub_step(m1, n, scn.hub);
		if (next != m1)
			ledger.transfer(static_cast<double>(n) * scn.step_days * seconds_per_day, "hub", "truck",
			                m1 - next);
		m1 = next;
	}
	hub_traj.append(static_cast<double>(scn.hub.n_l + 1) * scn.step_days, {m1});
	ledger.snapshot(static_cast<double>(scn.hub.n_l) * scn.step_days * seconds_per_day);

	// Phase 2: truck transport under the bang-bang plan, local clock.
	BangBangPlan plan{tau_bar(scn.truck), 0.0, scn.truck.t_u};
	Trajectory truck_traj = simulate_truck(scn.truck, plan, scn.truck_step_s);
	const std::size_t last = truck_traj.times.size() - 1;
	result.summary.delivery_error_m =
		std::abs(truck_traj.value(last, "x_G_m") - (scn.truck.H + scn.truck.a));
	result.summary.final_speed_m_per_s = std::abs(truck_traj.value(last, "v_m_per_s"));

	// Phase 3: reservoir filling, unload at n_u.
	Trajectory res_traj;
	res_traj.model_id = "reservoir";
	res_traj.time_unit = "day";
	res_traj.channels = {"m_r_kg"};
	res_traj.step = scn.step_days;
	double m_r = 0.0;
	for (int n = scn.hub.n_l; n < scn.n_d; ++n) {
		const double next = reservoir_fill_step(m_r, n, scn.n_u, scn.truck.m_l);
		if (next != m_r)
			ledger.transfer(static_cast<double>(n) * scn.step_days * seconds_per_day, "truck",
			                "reservoir", next - m_r);
		m_r = next;
		res_traj.append(static_cast<double>(n) * scn.step_days, {m_r});
	}
	ledger.snapshot(static_cast<double>(scn.n_u) * scn.step_days * seconds_per_day);

	// Phase 4: digestion from n_d. The digester integrates in days.
	FiniteTimeGains gains;
	gains.p = scn.p_gain;
	gains.u_star = scn.u_nominal;
	const bool have_equilibrium =
		(scn.u_nominal.array() > 0.0).all() &&
		scn.digester.alpha * scn.u_nominal(0) < scn.digester.mu1_max;
	if (scn.mode == ControlMode::closed_loop || have_equilibrium)
		gains.x_star = digester_equilibrium(scn.u_nominal, scn.digester);
	result.summary.x_star = gains.x_star;
	if (scn.mode == ControlMode::closed_loop)
		result.summary.settling_bound_days = settling_time_bound(scn.xtilde0_closed, scn.p_gain);

	Trajectory dig_traj;
	dig_traj.model_id = "digester";
	dig_traj.time_unit = "day";
	dig_traj.channels = {"X1_g_per_L", "S1_g_per_L", "X2_g_per_L", "S2_mmol_per_L",
	                     "q_M", "D1_per_day", "D2_per_day", "D3_per_day", "D4_per_day",
	                     "m_r_kg"};
	dig_traj.step = scn.digester_step_days;

	const double t_d0_days = static_cast<double>(scn.n_d) * scn.step_days;
	Eigen::Vector4d x = (scn.mode == ControlMode::open_loop)
	                        ? scn.x0_open
	                        : Eigen::Vector4d(scn.xtilde0_closed + gains.x_star);
	bool feed_stopped = false;

	auto dilution_at = [&](const Eigen::Vector4d& state) -> Eigen::Vector4d {
		if (scn.mode == ControlMode::open_loop)
			return scn.u_nominal;
		return finite_time_feedback(Eigen::Vector4d(state - gains.x_star), gains, scn.digester);
	};

	auto record_dig = [&](double t_local) {
		const Eigen::Vector4d u = dilution_at(x);
		if (x(1) < 0.0 || x(3) < 0.0)
			++result.summary.negative_kinetics_samples; // translated coordinates, not clamped
		dig_traj.append(t_d0_days + t_local,
		                {x(0), x(1), x(2), x(3), methane_flow(x(3), x(2), scn.digester), u(0), u(1),
		                 u(2), u(3), m_r});
	};

	const auto n_steps = static_cast<long>(std::ceil(scn.digestion_span_days / scn.digester_step_days - 1e-9));
	const double h_d = scn.digestion_span_days / static_cast<double>(n_steps);
	double t_local = 0.0;
	double methane_cum = 0.0;
	record_dig(0.0);
	for (long i = 0; i < n_steps; ++i) {
		// Augmented state: digester + reservoir mass + cumulative methane,
		// integrated on the same RK4 grid so the drain quadrature matches
		// the trajectory order of accuracy.
		Eigen::Matrix<double, 6, 1> aug;
		aug << x, m_r, methane_cum;
		auto rate = [&](const Eigen::Matrix<double, 6, 1>& z, double) {
			const Eigen::Vector4d xs = z.head<4>();
			const Eigen::Vector4d u = dilution_at(xs);
			Eigen::Matrix<double, 6, 1> dz;
			dz.head<4>() = digester_rates(xs, u, scn.digester);
			dz(4) = feed_stopped ? 0.0 : reservoir_drain_rate(u, scn.digester);
			dz(5) = methane_flow(xs(3), xs(2), scn.digester);
			return dz;
		};
		aug = rk4_step(rate, aug, t_local, h_d);
		Eigen::Vector4d x_next = aug.head<4>();
		if (scn.mode == ControlMode::closed_loop &&
		    (x_next - gains.x_star).norm() < std::max(origin_dead_zone,
		                                              settling_snap_radius(h_d, gains.p)))
			x_next = gains.x_star;

		double m_r_next = aug(4);
		if (!feed_stopped && m_r_next <= 0.0) {
			m_r_next = 0.0; // reservoir exhausted: feed transfer stops
			feed_stopped = true;
			result.summary.feed_stopped_day = t_local + h_d;
		}
		const double transferred = m_r - m_r_next;
		if (transferred != 0.0)
			ledger.transfer((t_d0_days + t_local + h_d) * seconds_per_day, "reservoir", "digester",
			                transferred);

		x = x_next;
		m_r = m_r_next;
		methane_cum = aug(5);
		t_local = static_cast<double>(i + 1) * h_d;
		record_dig(t_local);
		ledger.snapshot((t_d0_days + t_local) * seconds_per_day);

		if (scn.mode == ControlMode::closed_loop && !result.summary.settling_time_days &&
		    (x - gains.x_star).norm() <= 1e-6)
			result.summary.settling_time_days = t_local;
	}

	result.summary.hub_final_kg = ledger.balance("hub");
	result.summary.reservoir_final_kg = ledger.balance("reservoir");
	result.summary.digester_received_kg = ledger.balance("digester");
	result.summary.methane_cumulative = methane_cum;
	result.summary.digester_final_state = x;

	result.trajectories.emplace("hub", std::move(hub_traj));
	result.trajectories.emplace("truck", std::move(truck_traj));
	result.trajectories.emplace("reservoir", std::move(res_traj));
	result.trajectories.emplace("digester", std::move(dig_traj));
	return result;
}

/// Max residual of the pointwise energy balance d/dt(1/2 m_vl x_G_dot^2)
/// = 2 tau theta_dot along a truck trajectory, centered differences,
/// skipping rows within `window` seconds of any excluded instant.
inline double check_energy_balance(const Trajectory& traj, const TruckParams& p,
                                   const std::vector<double>& exclude_times = {},
                                   double window = 0.0)
{
	const int iv = traj.channel_index("v_m_per_s");
	const int itau = traj.channel_index("tau_Nm");
	const int ith = traj.channel_index("theta1_dot_rad_per_s");

	double max_residual = 0.0;
	for (std::size_t i = 1; i + 1 < traj.times.size(); ++i) {
		const double t = traj.times[i];
		bool excluded = false;
		for (double te : exclude_times)
			if (std::abs(t - te) <= window)
				excluded = true;
		if (excluded)
			continue;
		const double dt = traj.times[i + 1] - traj.times[i - 1];
		const auto ke = [&](std::size_t row) {
			const double v = traj.rows[row][static_cast<std::size_t>(iv)];
			return 0.5 * p.total_mass() * v * v;
		};
		const double dke_dt = (ke(i + 1) - ke(i - 1)) / dt;
		const double power = 2.0 * traj.rows[i][static_cast<std::size_t>(itau)] *
		                     traj.rows[i][static_cast<std::size_t>(ith)];
		max_residual = std::max(max_residual, std::abs(dke_dt - power));
	}
	return max_residual;
}

} // namespace tmn
