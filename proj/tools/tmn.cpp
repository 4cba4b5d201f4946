// Command-line front end for TMN analysis and the biomethane supply
// chain simulation.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tmn/tmn.hpp"

namespace {

std::vector<double> parse_alphas(const std::string& spec)
{
	std::vector<double> alphas;
	if (spec.find(':') != std::string::npos) {
		// range syntax: start:step:stop (inclusive)
		double start = 0.0, step = 0.0, stop = 0.0;
		if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &start, &step, &stop) != 3 || step <= 0.0)
			throw tmn::TmnError(tmn::errc::parse_error, "range must be start:step:stop, got '" + spec + "'");
		for (double a = start; a <= stop + 1e-12; a += step)
			alphas.push_back(std::min(a, stop));
	} else if (!spec.empty()) {
		std::size_t pos = 0;
		while (pos < spec.size()) {
			const auto comma = spec.find(',', pos);
			const std::string tok = spec.substr(pos, comma == std::string::npos ? comma : comma - pos);
			try {
				alphas.push_back(std::stod(tok));
			} catch (const std::exception&) {
				throw tmn::TmnError(tmn::errc::parse_error, "bad alpha value '" + tok + "'");
			}
			if (comma == std::string::npos)
				break;
			pos = comma + 1;
		}
	}
	for (double a : alphas)
		if (a < 0.0 || a > 1.0)
			throw tmn::TmnError(tmn::errc::alpha_out_of_range,
			                    "alpha " + std::to_string(a) + " outside [0, 1]");
	return alphas;
}

void load_default_digester_params(tmn::BiomethaneScenario& scn, const std::string& params_file)
{
	namespace fs = std::filesystem;
	std::string path = params_file;
	if (path.empty()) {
		const auto candidate = fs::path(tmn::default_param_dir()) / "digester_am2.json";
		if (fs::exists(candidate))
			path = candidate.string();
	}
	if (!path.empty())
		scn.digester = tmn::load_digester_params(path);
}

int run(int argc, char** argv)
{
	CLI::App app{"Thermodynamical material network toolkit"};
	app.require_subcommand(1);

	// analyze
	auto* analyze = app.add_subcommand("analyze", "Circularity analysis of a network file");
	std::string network_file, out_dir;
	analyze->add_option("--network", network_file, "network definition file (JSON)")->required();
	analyze->add_option("--out", out_dir, "directory for the report file");

	// demo
	auto* demo = app.add_subcommand("demo", "Built-in example runs");
	demo->require_subcommand(1);

	auto* demo_circ = demo->add_subcommand("circularity", "lambda(alpha) sweep table");
	std::string alphas_spec;
	demo_circ->add_option("--alphas", alphas_spec, "comma list or start:step:stop range")->required();

	auto* demo_bio = demo->add_subcommand("biomethane", "hub -> truck -> reservoir -> digester run");
	std::string mode = "closed", params_file, bio_out = "out/biomethane";
	std::vector<std::string> overrides;
	demo_bio->add_option("--mode", mode, "open|closed")->check(CLI::IsMember({"open", "closed"}));
	demo_bio->add_option("--params", params_file, "digester parameter file");
	demo_bio->add_option("--set", overrides, "dotted-key override, e.g. digester.mu1_max=1.3");
	demo_bio->add_option("--out", bio_out, "output directory");

	// simulate
	auto* simulate = app.add_subcommand("simulate", "Run a scenario file");
	std::string scenario_file, sim_out = "out/scenario";
	simulate->add_option("--scenario", scenario_file, "scenario file (JSON)")->required();
	simulate->add_option("--out", sim_out, "output directory")->required();

	CLI11_PARSE(app, argc, argv);

	if (*analyze) {
		const auto net = tmn::load_network(network_file);
		const auto report = tmn::circularity(net);
		std::cout << tmn::report_summary_text(report);
		if (!out_dir.empty()) {
			std::filesystem::create_directories(out_dir);
			std::ofstream out((std::filesystem::path(out_dir) / "report.json").string());
			out << tmn::report_to_json(report).dump(2) << '\n';
		}
		return 0;
	}

	if (*demo_circ) {
		const auto table = tmn::circularity_sweep(parse_alphas(alphas_spec));
		std::cout << "alpha,lambda\n";
		for (const auto& [a, l] : table)
			std::cout << tmn::format_value(a) << ',' << tmn::format_value(l) << '\n';
		return 0;
	}

	if (*demo_bio) {
		tmn::BiomethaneScenario scn;
		load_default_digester_params(scn, params_file);
		scn.mode = (mode == "open") ? tmn::ControlMode::open_loop : tmn::ControlMode::closed_loop;
		for (const auto& expr : overrides)
			tmn::apply_override_expr(scn, expr);
		const std::string dir = bio_out + "_" + mode;
		const auto result = tmn::write_scenario_outputs(scn, dir);
		std::cout << tmn::summary_to_json(result.summary).dump(2) << '\n';
		std::cout << "outputs written to " << dir << '\n';
		return 0;
	}

	if (*simulate) {
		const auto scn = tmn::scenario_from_json(tmn::load_json_file(scenario_file));
		tmn::write_scenario_outputs(scn, sim_out);
		std::cout << "outputs written to " << sim_out << '\n';
		return 0;
	}

	return 0;
}

} // namespace

int main(int argc, char** argv)
{
	try {
		return run(argc, argv);
	} catch (const tmn::TmnError& e) {
		std::cerr << "error: " << e.what() << '\n';
		return 1;
	} catch (const std::exception& e) {
		std::cerr << "error: Internal: " << e.what() << '\n';
		return 2;
	}
}
