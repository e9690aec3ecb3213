// povgrid/policy.hpp - action-selection rules and the per-step
// perceive-decide-act-update cycle shared by all agents.
#pragma once

#include <limits>
#include <memory>
#include <vector>

#include "povgrid/belief.hpp"
#include "povgrid/encode.hpp"
#include "povgrid/errors.hpp"
#include "povgrid/qnet.hpp"
#include "povgrid/rng.hpp"
#include "povgrid/world.hpp"

namespace povgrid {

inline Action random_action(const std::vector<Action>& admissible, Rng& rng) {
    if (admissible.empty()) throw DomainError("random_action: empty action set");
    return admissible[rng.uniform_int(admissible.size())];
}

// Argmax of expected information gain over admissible actions; ties break by
// canonical action order.
inline Action greedy_ig_action(const BeliefState& belief, Vec2i pos, const WorldConfig& config) {
    const std::vector<Action> admissible = admissible_actions(pos, config);
    Action best = admissible.front();
    double best_ig = -1.0;
    for (Action a : admissible) {
        const double ig = expected_ig(belief, pos, a, config).ig;
        if (ig > best_ig) {
            best_ig = ig;
            best = a;
        }
    }
    return best;
}

// Epsilon-greedy over Q-values, restricted to admissible actions
// (inadmissible entries treated as -inf); ties break by canonical order.
inline Action select_action(QNetwork& net, const AgentInput& state, double eps,
                            const std::vector<Action>& admissible, Rng& rng) {
    if (admissible.empty()) throw DomainError("select_action: empty action set");
    if (rng.uniform01() < eps) return random_action(admissible, rng);
    const Tensor q = q_forward(net, state);
    Action best = admissible.front();
    double best_q = -std::numeric_limits<double>::infinity();
    for (Action a : admissible) {
        const double v = q[static_cast<int>(a)];
        if (v > best_q) {
            best_q = v;
            best = a;
        }
    }
    return best;
}

// Reward: realized total-entropy reduction minus the per-step cost.
inline double compute_reward(double entropy_before, double entropy_after, double step_cost) {
    return (entropy_before - entropy_after) - step_cost;
}

inline double compute_reward(const BeliefState& before, const BeliefState& after,
                             double step_cost) {
    return compute_reward(total_entropy(before), total_entropy(after), step_cost);
}

class Policy {
public:
    virtual ~Policy() = default;
    virtual Action act(const BeliefState& belief, Vec2i pos, const WorldConfig& config,
                       Rng& rng) = 0;
};

class RandomPolicy final : public Policy {
public:
    Action act(const BeliefState&, Vec2i pos, const WorldConfig& config, Rng& rng) override {
        return random_action(admissible_actions(pos, config), rng);
    }
};

class GreedyIgPolicy final : public Policy {
public:
    Action act(const BeliefState& belief, Vec2i pos, const WorldConfig& config, Rng&) override {
        return greedy_ig_action(belief, pos, config);
    }
};

// Q-network policy; eps = 0 gives the greedy evaluation policy.
class DqnPolicy final : public Policy {
public:
    DqnPolicy(QNetwork net, bool include_mask, double eps = 0.0)
        : net_(std::move(net)), include_mask_(include_mask), eps_(eps) {}

    Action act(const BeliefState& belief, Vec2i pos, const WorldConfig& config,
               Rng& rng) override {
        const AgentInput in = encode_input(belief, pos, variant_of(net_), include_mask_);
        return select_action(net_, in, eps_, admissible_actions(pos, config), rng);
    }

private:
    QNetwork net_;
    bool include_mask_;
    double eps_;
};

struct StepResult {
    Action action = Action::Up;
    Vec2i pos;                 // position after the move
    double reward = 0.0;
    double entropy_before = 0.0;
    double entropy_after = 0.0;
    int new_povs = 0;          // (cell, POV) pairs observed for the first time
};

// One full cycle: decide from the current belief, move, sense at the new
// position, fold the observations into the belief.
inline StepResult run_policy_step(Policy& policy, GridWorld& world, BeliefState& belief,
                                  double step_cost, Rng& rng) {
    const WorldConfig& config = world.config();
    StepResult result;
    result.entropy_before = total_entropy(belief);
    const std::int64_t povs_before = belief.mask().observed_total();

    result.action = policy.act(belief, world.agent_pos(), config, rng);
    result.pos = apply_action(world.agent_pos(), result.action, config);
    world.set_agent_pos(result.pos);
    belief.update(sense(world, result.pos), config.p_vis);

    result.entropy_after = total_entropy(belief);
    result.reward = compute_reward(result.entropy_before, result.entropy_after, step_cost);
    result.new_povs = static_cast<int>(belief.mask().observed_total() - povs_before);
    return result;
}

}  // namespace povgrid
