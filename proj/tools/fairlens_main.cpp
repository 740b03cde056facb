#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fairlens/errors.hpp"
#include "fairlens/pipeline.hpp"

namespace {

int run_analyze(const std::string& config_path, const std::optional<std::string>& out_dir,
                const std::optional<std::uint64_t>& seed, const std::optional<std::string>& format) {
    fairlens::PipelineConfig config = fairlens::pipeline_config_from_file(config_path);
    if (out_dir) config.out_dir = *out_dir;
    if (seed) config.seed = *seed;
    if (format) config.report_format = fairlens::report_format_from_string(*format);
    const auto artifacts = fairlens::run_pipeline(config, std::cout);
    std::cout << "report: " << artifacts.report_path << "\n";
    return 0;
}

int run_simulate(const std::string& scenario_path, const std::string& out_path, std::uint64_t seed) {
    const fairlens::Scenario scenario = fairlens::scenario_from_json_file(scenario_path);
    const fairlens::EventLog log = fairlens::generate_log(scenario, seed);
    fairlens::write_log_file(out_path, log);
    std::cout << "wrote " << log.provenance.row_count << " events in " << log.provenance.case_count << " cases to "
              << out_path << "\n";
    return 0;
}

int run_discover(const std::string& log_path, double tau, const std::string& out_path,
                 const std::optional<std::string>& config_path, const std::optional<std::string>& dot_path) {
    fairlens::LoadOptions load;
    if (config_path) {
        const auto config = fairlens::pipeline_config_from_file(*config_path);
        load = config.load;
    }
    const fairlens::EventLog log = fairlens::load_log_file(log_path, load);
    const auto df = fairlens::count_directly_follows(log);
    const auto graph = fairlens::mine_dependency_graph(df, tau);
    const auto net = fairlens::to_process_net(graph);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw fairlens::InputError("cannot write '" + out_path + "'");
    out << fairlens::net_to_json(net);
    if (dot_path) {
        std::ofstream dot(*dot_path, std::ios::binary);
        if (!dot) throw fairlens::InputError("cannot write '" + *dot_path + "'");
        dot << fairlens::net_to_dot(net);
    }
    std::cout << "discovered net with " << net.transitions.size() << " transitions and " << net.places.size()
              << " places (tau=" << tau << ") -> " << out_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fairlens: fairness analysis of ED triage event logs"};
    app.require_subcommand(1);

    std::string config_path, scenario_path, log_path, out_path;
    std::optional<std::string> out_dir, format, discover_config, dot_path;
    std::optional<std::uint64_t> seed_opt;
    std::uint64_t seed = 0;
    double tau = 0.8;

    auto* analyze = app.add_subcommand("analyze", "run the full fairness pipeline");
    analyze->add_option("--config", config_path, "pipeline config (JSON)")->required();
    analyze->add_option("--out", out_dir, "output directory (overrides config)");
    analyze->add_option("--seed", seed_opt, "simulator seed (overrides config)");
    analyze->add_option("--format", format, "report format: md|json|csv");

    auto* simulate = app.add_subcommand("simulate", "generate a synthetic ED event log");
    simulate->add_option("--scenario", scenario_path, "scenario config (JSON)")->required();
    simulate->add_option("--out", out_path, "output CSV path")->required();
    simulate->add_option("--seed", seed, "RNG seed");

    auto* discover = app.add_subcommand("discover", "mine a process net from a log");
    discover->add_option("--log", log_path, "event log CSV")->required();
    discover->add_option("--tau", tau, "dependency threshold")->capture_default_str();
    discover->add_option("--out", out_path, "output net JSON path")->required();
    discover->add_option("--config", discover_config, "pipeline config supplying the column map");
    discover->add_option("--dot", dot_path, "also write a DOT rendering");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(analyze)) return run_analyze(config_path, out_dir, seed_opt, format);
        if (app.got_subcommand(simulate)) return run_simulate(scenario_path, out_path, seed);
        if (app.got_subcommand(discover)) return run_discover(log_path, tau, out_path, discover_config, dot_path);
    } catch (const fairlens::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
