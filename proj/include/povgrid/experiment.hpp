// povgrid/experiment.hpp - experiment configuration, the multi-run episode
// loop, and CSV emission.
#pragma once

#include <filesystem>
#include <fstream>
#include <future>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "povgrid/checkpoint.hpp"
#include "povgrid/csv.hpp"
#include "povgrid/dqn.hpp"
#include "povgrid/episode.hpp"
#include "povgrid/metrics.hpp"
#include "povgrid/policy.hpp"

namespace povgrid {

enum class AgentKind { Random, GreedyIg, DqnSingle, DqnDouble };

inline const char* to_string(AgentKind k) {
    switch (k) {
        case AgentKind::Random: return "random";
        case AgentKind::GreedyIg: return "greedy-ig";
        case AgentKind::DqnSingle: return "dqn-single";
        case AgentKind::DqnDouble: return "dqn-double";
    }
    return "?";
}

inline AgentKind agent_from_string(const std::string& name) {
    if (name == "random") return AgentKind::Random;
    if (name == "greedy-ig") return AgentKind::GreedyIg;
    if (name == "dqn-single") return AgentKind::DqnSingle;
    if (name == "dqn-double") return AgentKind::DqnDouble;
    throw ConfigError("agent: unknown name '" + name +
                      "' (valid: random, greedy-ig, dqn-single, dqn-double)");
}

struct ExperimentConfig {
    WorldConfig world;
    AgentKind agent = AgentKind::Random;
    bool include_pov_mask = true;
    int runs = 20;
    std::uint64_t master_seed = 0;
    DQNConfig dqn;
    std::string checkpoint;        // required when evaluating a DQN agent
    std::string output_dir = "out";

    void validate() const {
        world.validate();
        dqn.validate();
        if (runs < 1) throw ConfigError("runs: must be >= 1");
        if (output_dir.empty()) throw ConfigError("output_dir: must not be empty");
    }
};

namespace detail {

// Strict key check: every present key must be expected.
inline void reject_unknown_keys(const nlohmann::json& obj, const char* where,
                                std::initializer_list<const char*> expected) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : expected)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known)
            throw ConfigError(std::string("config: unknown key '") + it.key() + "' in " + where);
    }
}

template <typename T>
void read_field(const nlohmann::json& obj, const char* key, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
    }
}

}  // namespace detail

inline WorldConfig parse_world_config(const nlohmann::json& obj) {
    detail::reject_unknown_keys(obj, "world",
                                {"width", "height", "t_max", "p_vis", "count_prior", "max_steps"});
    WorldConfig w;
    detail::read_field(obj, "width", w.width);
    detail::read_field(obj, "height", w.height);
    detail::read_field(obj, "t_max", w.t_max);
    detail::read_field(obj, "p_vis", w.p_vis);
    detail::read_field(obj, "count_prior", w.count_prior);
    detail::read_field(obj, "max_steps", w.max_steps);
    // A t_max override without an explicit prior gets a uniform prior.
    if (obj.contains("t_max") && !obj.contains("count_prior"))
        w.count_prior.assign(static_cast<std::size_t>(w.t_max) + 1,
                             1.0 / (static_cast<double>(w.t_max) + 1.0));
    return w;
}

inline DQNConfig parse_dqn_config(const nlohmann::json& obj) {
    detail::reject_unknown_keys(
        obj, "dqn",
        {"gamma", "eps_start", "eps_end", "eps_decay_steps", "batch_size", "target_sync_interval",
         "learning_starts", "train_interval", "step_cost", "episodes", "eval_every",
         "replay_capacity", "learning_rate"});
    DQNConfig d;
    detail::read_field(obj, "gamma", d.gamma);
    detail::read_field(obj, "eps_start", d.eps_start);
    detail::read_field(obj, "eps_end", d.eps_end);
    detail::read_field(obj, "eps_decay_steps", d.eps_decay_steps);
    detail::read_field(obj, "batch_size", d.batch_size);
    detail::read_field(obj, "target_sync_interval", d.target_sync_interval);
    detail::read_field(obj, "learning_starts", d.learning_starts);
    detail::read_field(obj, "train_interval", d.train_interval);
    detail::read_field(obj, "step_cost", d.step_cost);
    detail::read_field(obj, "episodes", d.episodes);
    detail::read_field(obj, "eval_every", d.eval_every);
    detail::read_field(obj, "replay_capacity", d.replay_capacity);
    detail::read_field(obj, "learning_rate", d.learning_rate);
    return d;
}

inline ExperimentConfig parse_config(const nlohmann::json& root) {
    if (!root.is_object()) throw ConfigError("config: top level must be a JSON object");
    detail::reject_unknown_keys(root, "config",
                                {"world", "agent", "include_pov_mask", "runs", "master_seed",
                                 "dqn", "checkpoint", "output_dir"});
    ExperimentConfig cfg;
    if (root.contains("world")) cfg.world = parse_world_config(root.at("world"));
    if (root.contains("dqn")) cfg.dqn = parse_dqn_config(root.at("dqn"));
    if (root.contains("agent")) cfg.agent = agent_from_string(root.at("agent").get<std::string>());
    detail::read_field(root, "include_pov_mask", cfg.include_pov_mask);
    detail::read_field(root, "runs", cfg.runs);
    detail::read_field(root, "master_seed", cfg.master_seed);
    detail::read_field(root, "checkpoint", cfg.checkpoint);
    detail::read_field(root, "output_dir", cfg.output_dir);
    cfg.validate();
    return cfg;
}

// Parses + validates a JSON config file. Parse failures report the byte
// position; validation failures name the offending field.
inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("config: cannot open: " + path);
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(is);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config: parse error in " + path + ": " + e.what());
    }
    return parse_config(root);
}

inline std::unique_ptr<Policy> make_policy(const ExperimentConfig& cfg, const Checkpoint* ck) {
    switch (cfg.agent) {
        case AgentKind::Random: return std::make_unique<RandomPolicy>();
        case AgentKind::GreedyIg: return std::make_unique<GreedyIgPolicy>();
        case AgentKind::DqnSingle:
        case AgentKind::DqnDouble: {
            if (!ck) throw ConfigError("checkpoint: required for DQN evaluation");
            Checkpoint copy = *ck;  // each episode owns its network (forward caches mutate)
            return std::make_unique<DqnPolicy>(std::move(copy.net), copy.include_mask, 0.0);
        }
    }
    throw ConfigError("agent: invalid kind");
}

inline std::string per_run_csv(const std::vector<std::vector<MetricsRow>>& runs) {
    std::string out =
        "run_id,step,correct_cells,total_entropy,cumulative_ig,unique_povs_observed,agent_x,"
        "agent_y\n";
    for (const auto& rows : runs) {
        for (const MetricsRow& r : rows) {
            out += std::to_string(r.run_id);
            out += ',';
            out += std::to_string(r.step);
            out += ',';
            out += std::to_string(r.correct_cells);
            out += ',';
            out += format_double(r.total_entropy);
            out += ',';
            out += format_double(r.cumulative_ig);
            out += ',';
            out += std::to_string(r.unique_povs_observed);
            out += ',';
            out += std::to_string(r.agent_x);
            out += ',';
            out += std::to_string(r.agent_y);
            out += '\n';
        }
    }
    return out;
}

inline std::string aggregate_csv(const std::vector<AggregateRow>& rows) {
    std::string out =
        "step,correct_cells_mean,correct_cells_std,total_entropy_mean,total_entropy_std\n";
    for (const AggregateRow& r : rows) {
        out += std::to_string(r.step);
        out += ',';
        out += format_double(r.correct_cells_mean);
        out += ',';
        out += format_double(r.correct_cells_std);
        out += ',';
        out += format_double(r.total_entropy_mean);
        out += ',';
        out += format_double(r.total_entropy_std);
        out += '\n';
    }
    return out;
}

inline std::string training_curve_csv(const std::vector<TrainingCurveRow>& curve) {
    std::string out =
        "episode,env_steps,steps,epsilon,total_reward,final_entropy,final_correct,mean_loss,"
        "eval_correct,eval_entropy\n";
    for (const TrainingCurveRow& r : curve) {
        out += std::to_string(r.episode);
        out += ',';
        out += std::to_string(r.env_steps);
        out += ',';
        out += std::to_string(r.steps);
        out += ',';
        out += format_double(r.epsilon);
        out += ',';
        out += format_double(r.total_reward);
        out += ',';
        out += format_double(r.final_entropy);
        out += ',';
        out += std::to_string(r.final_correct);
        out += ',';
        out += format_double(r.mean_loss);
        out += ',';
        if (r.has_eval) {
            out += std::to_string(r.eval_correct);
            out += ',';
            out += format_double(r.eval_entropy);
        } else {
            out += ',';
        }
        out += '\n';
    }
    return out;
}

// All episodes of one experiment; runs execute in parallel, each owning its
// world/belief/rng/policy. Results are collected by run index, so output
// bytes do not depend on scheduling.
inline std::vector<std::vector<MetricsRow>> run_experiment_episodes(const ExperimentConfig& cfg) {
    cfg.validate();
    const bool is_dqn = cfg.agent == AgentKind::DqnSingle || cfg.agent == AgentKind::DqnDouble;
    std::optional<Checkpoint> ck;
    if (is_dqn) {
        if (cfg.checkpoint.empty()) throw ConfigError("checkpoint: required for DQN evaluation");
        ck = load_checkpoint(cfg.checkpoint);
        const QVariant want =
            cfg.agent == AgentKind::DqnSingle ? QVariant::Single : QVariant::Double;
        if (ck->variant != want)
            throw ConfigError("checkpoint: variant does not match the requested agent");
        if (ck->t_max != cfg.world.t_max)
            throw ConfigError("checkpoint: t_max does not match the world config");
        if (ck->include_mask != cfg.include_pov_mask)
            throw ConfigError("checkpoint: POV-mask setting does not match the config");
    }

    std::vector<std::future<EpisodeResult>> futures;
    futures.reserve(static_cast<std::size_t>(cfg.runs));
    for (int run = 0; run < cfg.runs; ++run) {
        futures.push_back(std::async(std::launch::async, [&cfg, &ck, run]() {
            const auto policy = make_policy(cfg, ck ? &*ck : nullptr);
            return run_episode(*policy, cfg.world, derive_seed(cfg.master_seed, run),
                               cfg.world.max_steps, cfg.dqn.step_cost, run);
        }));
    }
    std::vector<std::vector<MetricsRow>> runs;
    runs.reserve(futures.size());
    for (auto& f : futures) runs.push_back(f.get().rows);
    return runs;
}

struct ExperimentOutputs {
    std::string per_run_path;
    std::string aggregate_path;
};

inline ExperimentOutputs run_experiment(const ExperimentConfig& cfg) {
    const auto runs = run_experiment_episodes(cfg);
    std::filesystem::create_directories(cfg.output_dir);
    ExperimentOutputs out;
    out.per_run_path = (std::filesystem::path(cfg.output_dir) / "per_run.csv").string();
    out.aggregate_path = (std::filesystem::path(cfg.output_dir) / "aggregate.csv").string();
    write_text_file(out.per_run_path, per_run_csv(runs));
    write_text_file(out.aggregate_path, aggregate_csv(aggregate_runs(runs)));
    return out;
}

struct TrainOutputs {
    std::string checkpoint_path;
    std::string curve_path;
};

inline TrainOutputs train_and_save(const ExperimentConfig& cfg, QVariant variant) {
    cfg.world.validate();
    cfg.dqn.validate();
    TrainResult result =
        train_dqn(variant, cfg.dqn, cfg.world, cfg.master_seed, cfg.include_pov_mask);
    std::filesystem::create_directories(cfg.output_dir);
    TrainOutputs out;
    out.checkpoint_path = (std::filesystem::path(cfg.output_dir) / "checkpoint.bin").string();
    out.curve_path = (std::filesystem::path(cfg.output_dir) / "training_curve.csv").string();
    save_checkpoint(out.checkpoint_path, result.net, result.include_mask, result.t_max);
    write_text_file(out.curve_path, training_curve_csv(result.curve));
    return out;
}

}  // namespace povgrid
