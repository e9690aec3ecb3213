// povgrid/episode.hpp - runs one full episode and records per-step metrics.
#pragma once

#include <cstdint>
#include <vector>

#include "povgrid/belief.hpp"
#include "povgrid/metrics.hpp"
#include "povgrid/policy.hpp"
#include "povgrid/rng.hpp"
#include "povgrid/world.hpp"

namespace povgrid {

// Episodes stop early once the belief is essentially resolved.
inline constexpr double kEntropyStopThreshold = 1e-6;

// Seed sub-streams within one episode.
inline constexpr std::uint64_t kWorldStream = 0;
inline constexpr std::uint64_t kPolicyStream = 1;

struct EpisodeResult {
    std::vector<MetricsRow> rows;  // one per step, step 0 = prior baseline
    double reward_sum = 0.0;
    int steps = 0;                 // actions actually taken
};

inline EpisodeResult run_episode(Policy& policy, const WorldConfig& config, std::uint64_t seed,
                                 int max_steps, double step_cost = 0.01, int run_id = 0) {
    GridWorld world = generate_world(config, derive_seed(seed, kWorldStream));
    BeliefState belief = init_belief(config);
    Rng rng(derive_seed(seed, kPolicyStream));
    const Grid<int> truth = true_target_map(world);

    EpisodeResult result;
    double cumulative_ig = 0.0;

    const auto emit = [&](int step) {
        MetricsRow row;
        row.run_id = run_id;
        row.step = step;
        row.correct_cells = correct_count(predict_map(belief), truth);
        row.total_entropy = total_entropy(belief);
        row.cumulative_ig = cumulative_ig;
        row.unique_povs_observed = belief.mask().observed_total();
        row.agent_x = world.agent_pos().x;
        row.agent_y = world.agent_pos().y;
        result.rows.push_back(row);
        return row.total_entropy;
    };

    if (emit(0) < kEntropyStopThreshold) return result;

    for (int step = 1; step <= max_steps; ++step) {
        const StepResult sr = run_policy_step(policy, world, belief, step_cost, rng);
        cumulative_ig += sr.entropy_before - sr.entropy_after;
        result.reward_sum += sr.reward;
        result.steps = step;
        if (emit(step) < kEntropyStopThreshold) break;
    }
    return result;
}

}  // namespace povgrid
