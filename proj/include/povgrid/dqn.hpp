// povgrid/dqn.hpp - DQN training: epsilon schedule, TD updates against a
// periodically synced target network, and the per-episode training curve.
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "povgrid/belief.hpp"
#include "povgrid/encode.hpp"
#include "povgrid/episode.hpp"
#include "povgrid/optim.hpp"
#include "povgrid/policy.hpp"
#include "povgrid/qnet.hpp"
#include "povgrid/replay.hpp"
#include "povgrid/rng.hpp"
#include "povgrid/world.hpp"

namespace povgrid {

struct DQNConfig {
    double gamma = 0.99;
    double eps_start = 1.0;
    double eps_end = 0.05;
    std::int64_t eps_decay_steps = 50000;  // environment steps to reach eps_end
    int batch_size = 64;
    int target_sync_interval = 500;        // environment steps between target syncs
    int learning_starts = 1000;            // transitions required before updates begin
    int train_interval = 4;                // environment steps between updates
    double step_cost = 0.01;               // bits, subtracted from each reward
    int episodes = 300;
    int eval_every = 0;                    // greedy eval cadence in episodes; 0 = off
    std::size_t replay_capacity = 50000;
    double learning_rate = 1e-3;

    void validate() const {
        if (!(gamma > 0.0) || gamma >= 1.0) throw ConfigError("dqn: gamma must be in (0, 1)");
        if (eps_start < 0.0 || eps_start > 1.0 || eps_end < 0.0 || eps_end > 1.0 ||
            eps_end > eps_start)
            throw ConfigError("dqn: epsilon schedule must satisfy 0 <= eps_end <= eps_start <= 1");
        if (eps_decay_steps < 0) throw ConfigError("dqn: eps_decay_steps must be >= 0");
        if (batch_size < 1) throw ConfigError("dqn: batch_size must be >= 1");
        if (target_sync_interval < 1) throw ConfigError("dqn: target_sync_interval must be >= 1");
        if (learning_starts < batch_size)
            throw ConfigError("dqn: learning_starts must be >= batch_size");
        if (train_interval < 1) throw ConfigError("dqn: train_interval must be >= 1");
        if (episodes < 0) throw ConfigError("dqn: episodes must be >= 0");
        if (eval_every < 0) throw ConfigError("dqn: eval_every must be >= 0");
        if (replay_capacity < static_cast<std::size_t>(batch_size))
            throw ConfigError("dqn: replay_capacity must be >= batch_size");
        if (!(learning_rate > 0.0)) throw ConfigError("dqn: learning_rate must be positive");
    }
};

// Linear decay from eps_start to eps_end over eps_decay_steps; clamped after.
inline double epsilon_at(const DQNConfig& config, std::int64_t env_step) {
    if (env_step <= 0) return config.eps_start;
    if (config.eps_decay_steps == 0 || env_step >= config.eps_decay_steps) return config.eps_end;
    const double frac = static_cast<double>(env_step) / static_cast<double>(config.eps_decay_steps);
    return config.eps_start + (config.eps_end - config.eps_start) * frac;
}

struct TrainingCurveRow {
    int episode = 0;
    std::int64_t env_steps = 0;  // cumulative, at episode end
    int steps = 0;               // steps in this episode
    double epsilon = 0.0;        // at episode end
    double total_reward = 0.0;
    double final_entropy = 0.0;
    int final_correct = 0;
    double mean_loss = 0.0;      // mean Huber loss over this episode's updates
    bool has_eval = false;
    int eval_correct = 0;
    double eval_entropy = 0.0;
};

struct TrainResult {
    QNetwork net;
    QVariant variant;
    bool include_mask = true;
    int t_max = 0;
    std::vector<TrainingCurveRow> curve;
};

namespace detail {

// Max target-net Q over the admissible actions at the next state.
inline double max_next_q(QNetwork& target, const Transition& tr) {
    const Tensor q = q_forward(target, tr.next_state);
    double best = -std::numeric_limits<double>::infinity();
    for (Action a : tr.next_admissible) best = std::max(best, q[static_cast<int>(a)]);
    return best;
}

}  // namespace detail

// Standard DQN loop. Fresh world per episode (seed-derived); deterministic
// given (configs, seed). The double variant encodes both the 3x3 and 5x5
// windows each step.
inline TrainResult train_dqn(QVariant variant, const DQNConfig& dqn, const WorldConfig& world_cfg,
                             std::uint64_t seed, bool include_mask = true) {
    dqn.validate();
    world_cfg.validate();

    const int channels = encoded_channels(world_cfg.t_max, include_mask);
    Rng rng_init(derive_seed(seed, 0));
    Rng rng_policy(derive_seed(seed, 1));
    Rng rng_replay(derive_seed(seed, 2));
    const std::uint64_t episode_seed_base = derive_seed(seed, 3);
    const std::uint64_t eval_seed_base = derive_seed(seed, 4);

    TrainResult result{make_qnetwork(variant, channels, rng_init), variant, include_mask,
                       world_cfg.t_max, {}};
    QNetwork target = result.net;
    AdamState adam(q_parameters(result.net), AdamConfig{dqn.learning_rate, 0.9, 0.999, 1e-8});
    ReplayBuffer buffer(dqn.replay_capacity);

    std::int64_t env_steps = 0;

    const auto train_batch = [&]() {
        const auto batch = buffer.sample(static_cast<std::size_t>(dqn.batch_size), rng_replay);
        q_zero_grad(result.net);
        double loss_sum = 0.0;
        for (const Transition* tr : batch) {
            double y = tr->reward;
            if (!tr->terminal) y += dqn.gamma * detail::max_next_q(target, *tr);
            const Tensor q = q_forward(result.net, tr->state);
            const auto [loss, dloss] = huber_loss(q[static_cast<int>(tr->action)], y);
            loss_sum += loss;
            Tensor gout({kNumActions});
            gout[static_cast<int>(tr->action)] = dloss / static_cast<double>(dqn.batch_size);
            q_backward(result.net, gout);
        }
        adam.step(q_parameters(result.net), q_gradients(result.net));
        return loss_sum / static_cast<double>(dqn.batch_size);
    };

    for (int episode = 0; episode < dqn.episodes; ++episode) {
        GridWorld world = generate_world(world_cfg, derive_seed(episode_seed_base, episode));
        BeliefState belief = init_belief(world_cfg);
        const Grid<int> truth = true_target_map(world);

        TrainingCurveRow row;
        row.episode = episode;
        double loss_sum = 0.0;
        int loss_count = 0;

        AgentInput state = encode_input(belief, world.agent_pos(), variant, include_mask);
        for (int step = 0; step < world_cfg.max_steps; ++step) {
            const Vec2i pos = world.agent_pos();
            const double eps = epsilon_at(dqn, env_steps);
            const Action action =
                select_action(result.net, state, eps, admissible_actions(pos, world_cfg),
                              rng_policy);

            const Vec2i next_pos = apply_action(pos, action, world_cfg);
            world.set_agent_pos(next_pos);
            const double before = total_entropy(belief);
            belief.update(sense(world, next_pos), world_cfg.p_vis);
            const double after = total_entropy(belief);
            const double reward = compute_reward(before, after, dqn.step_cost);
            const bool terminal = after < kEntropyStopThreshold;

            AgentInput next_state = encode_input(belief, next_pos, variant, include_mask);
            buffer.push({std::move(state), action, reward, next_state,
                         admissible_actions(next_pos, world_cfg), terminal});
            state = std::move(next_state);

            ++env_steps;
            row.total_reward += reward;
            ++row.steps;

            if (env_steps % dqn.train_interval == 0 &&
                buffer.size() >= static_cast<std::size_t>(dqn.learning_starts)) {
                loss_sum += train_batch();
                ++loss_count;
            }
            if (env_steps % dqn.target_sync_interval == 0) target = result.net;
            if (terminal) break;
        }

        row.env_steps = env_steps;
        row.epsilon = epsilon_at(dqn, env_steps);
        row.final_entropy = total_entropy(belief);
        row.final_correct = correct_count(predict_map(belief), truth);
        row.mean_loss = loss_count > 0 ? loss_sum / loss_count : 0.0;

        if (dqn.eval_every > 0 && (episode + 1) % dqn.eval_every == 0) {
            DqnPolicy greedy(result.net, include_mask, 0.0);
            const EpisodeResult eval =
                run_episode(greedy, world_cfg, derive_seed(eval_seed_base, episode),
                            world_cfg.max_steps, dqn.step_cost);
            row.has_eval = true;
            row.eval_correct = eval.rows.back().correct_cells;
            row.eval_entropy = eval.rows.back().total_entropy;
        }
        result.curve.push_back(row);
    }
    return result;
}

}  // namespace povgrid
