#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "tmn/error.hpp"

namespace tmn {

/// Fixed 17-significant-digit decimal rendering used by every output
/// file, so repeated runs are byte-identical.
inline std::string format_value(double v)
{
	char buf[40];
	std::snprintf(buf, sizeof(buf), "%.16e", v);
	return buf;
}

/// Time-stamped record of named channels with unit suffixes.
struct Trajectory {
	std::string model_id;
	std::string time_unit;              // "s" or "day"
	std::vector<std::string> channels;  // names carrying units, e.g. "x_G_m"
	std::vector<double> times;
	std::vector<std::vector<double>> rows; // one vector of channel values per time stamp
	double step = 0.0;
	std::string integrator = "rk4";

	void append(double t, std::vector<double> values)
	{
		if (values.size() != channels.size())
			throw TmnError(errc::missing_channel, "row width does not match channel count");
		if (!times.empty() && t <= times.back())
			throw TmnError(errc::invalid_parameter, "trajectory time stamps must increase");
		times.push_back(t);
		rows.push_back(std::move(values));
	}

	int channel_index(const std::string& name) const
	{
		for (std::size_t i = 0; i < channels.size(); ++i)
			if (channels[i] == name)
				return static_cast<int>(i);
		throw TmnError(errc::missing_channel, "trajectory has no channel '" + name + "'");
	}

	double value(std::size_t row, const std::string& name) const
	{
		return rows[row][static_cast<std::size_t>(channel_index(name))];
	}

	void write_csv(const std::string& path) const
	{
		std::ofstream out(path);
		if (!out)
			throw TmnError(errc::file_not_found, "cannot open '" + path + "' for writing");
		out << "time_" << time_unit;
		for (const auto& c : channels)
			out << ',' << c;
		out << '\n';
		for (std::size_t i = 0; i < times.size(); ++i) {
			out << format_value(times[i]);
			for (double v : rows[i])
				out << ',' << format_value(v);
			out << '\n';
		}
	}
};

/// Per-compartment mass accounts plus a transfer log; the audit trail
/// for network-wide conservation.
class MassLedger {
public:
	struct Transfer {
		double time_s = 0.0;
		std::string from;
		std::string to;
		double amount_kg = 0.0;
	};

	void open_account(const std::string& name, double initial_kg)
	{
		names_.push_back(name);
		balances_.push_back(initial_kg);
	}

	double balance(const std::string& name) const { return balances_[index_of(name)]; }

	double total() const
	{
		double t = 0.0;
		for (double b : balances_)
			t += b;
		return t;
	}

	void transfer(double time_s, const std::string& from, const std::string& to, double amount_kg)
	{
		balances_[index_of(from)] -= amount_kg;
		balances_[index_of(to)] += amount_kg;
		log_.push_back({time_s, from, to, amount_kg});
	}

	const std::vector<Transfer>& log() const { return log_; }
	const std::vector<std::string>& accounts() const { return names_; }

	/// Snapshot of all balances at a sample time, for the audit table.
	void snapshot(double time_s)
	{
		snapshot_times_.push_back(time_s);
		snapshot_rows_.push_back(balances_);
	}

	const std::vector<double>& snapshot_times() const { return snapshot_times_; }
	const std::vector<std::vector<double>>& snapshot_rows() const { return snapshot_rows_; }

	void write_csv(const std::string& path) const
	{
		std::ofstream out(path);
		if (!out)
			throw TmnError(errc::file_not_found, "cannot open '" + path + "' for writing");
		out << "time_s";
		for (const auto& n : names_)
			out << ',' << n << "_kg";
		out << ",total_kg\n";
		for (std::size_t i = 0; i < snapshot_times_.size(); ++i) {
			out << format_value(snapshot_times_[i]);
			double total = 0.0;
			for (double v : snapshot_rows_[i]) {
				out << ',' << format_value(v);
				total += v;
			}
			out << ',' << format_value(total) << '\n';
		}
		out << "\ntime_s,from,to,amount_kg\n";
		for (const auto& t : log_)
			out << format_value(t.time_s) << ',' << t.from << ',' << t.to << ','
			    << format_value(t.amount_kg) << '\n';
	}

private:
	std::size_t index_of(const std::string& name) const
	{
		for (std::size_t i = 0; i < names_.size(); ++i)
			if (names_[i] == name)
				return i;
		throw TmnError(errc::missing_channel, "ledger has no account '" + name + "'");
	}

	std::vector<std::string> names_;
	std::vector<double> balances_;
	std::vector<Transfer> log_;
	std::vector<double> snapshot_times_;
	std::vector<std::vector<double>> snapshot_rows_;
};

} // namespace tmn
