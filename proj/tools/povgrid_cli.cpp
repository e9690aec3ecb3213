// povgrid command-line interface.
//
//   povgrid run   [--config F] [--agent A] [--no-pov-mask] [--runs K]
//                 [--seed S] [--out DIR]           evaluate an agent, emit CSVs
//   povgrid train [--config F] --variant single|double [--no-pov-mask]
//                 [--seed S] [--out DIR]           train a DQN, emit checkpoint + curve
//   povgrid selfcheck                              run the built-in verification suite
//
// Flags override config-file fields. POVGRID_OUTPUT_DIR overrides the
// config's output_dir (a --out flag beats both).

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "povgrid/povgrid.hpp"

namespace {

povgrid::ExperimentConfig load_or_default(const std::string& config_path) {
    if (config_path.empty()) return povgrid::ExperimentConfig{};
    return povgrid::load_config(config_path);
}

void apply_output_dir(povgrid::ExperimentConfig& cfg, const std::string& out_flag) {
    if (!out_flag.empty()) {
        cfg.output_dir = out_flag;
    } else if (const char* env = std::getenv("POVGRID_OUTPUT_DIR"); env != nullptr && *env) {
        cfg.output_dir = env;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"POV-grid exploration experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::string agent_name;
    std::string variant_name;
    std::string out_dir;
    std::uint64_t seed = 0;
    int runs = 0;
    bool no_pov_mask = false;

    CLI::App* run = app.add_subcommand("run", "Evaluate an agent and write per-run/aggregate CSVs");
    run->add_option("--config", config_path, "JSON experiment config");
    run->add_option("--agent", agent_name, "random | greedy-ig | dqn-single | dqn-double");
    run->add_flag("--no-pov-mask", no_pov_mask, "Ablate the POV-mask input channels");
    run->add_option("--runs", runs, "Number of runs to aggregate over");
    run->add_option("--seed", seed, "Master seed");
    run->add_option("--out", out_dir, "Output directory");

    CLI::App* train = app.add_subcommand("train", "Train a DQN and write checkpoint + curve CSV");
    train->add_option("--config", config_path, "JSON experiment config");
    train->add_option("--variant", variant_name, "single | double")->required();
    train->add_flag("--no-pov-mask", no_pov_mask, "Ablate the POV-mask input channels");
    train->add_option("--seed", seed, "Master seed");
    train->add_option("--out", out_dir, "Output directory");

    app.add_subcommand("selfcheck", "Run the built-in verification suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("selfcheck")) {
            return povgrid::run_selfcheck(std::cout);
        }

        povgrid::ExperimentConfig cfg = load_or_default(config_path);
        if (no_pov_mask) cfg.include_pov_mask = false;
        if (run->count("--seed") || train->count("--seed")) cfg.master_seed = seed;
        apply_output_dir(cfg, out_dir);

        if (app.got_subcommand("run")) {
            if (!agent_name.empty()) cfg.agent = povgrid::agent_from_string(agent_name);
            if (runs > 0) cfg.runs = runs;
            cfg.validate();
            const auto outputs = povgrid::run_experiment(cfg);
            std::cout << "wrote " << outputs.per_run_path << "\n";
            std::cout << "wrote " << outputs.aggregate_path << "\n";
            return 0;
        }

        // train
        povgrid::QVariant variant;
        if (variant_name == "single") {
            variant = povgrid::QVariant::Single;
        } else if (variant_name == "double") {
            variant = povgrid::QVariant::Double;
        } else {
            std::cerr << "error: --variant must be 'single' or 'double'\n";
            return 1;
        }
        const auto outputs = povgrid::train_and_save(cfg, variant);
        std::cout << "wrote " << outputs.checkpoint_path << "\n";
        std::cout << "wrote " << outputs.curve_path << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
