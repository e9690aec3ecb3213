#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "povgrid/dqn.hpp"
#include "povgrid/encode.hpp"
#include "povgrid/episode.hpp"
#include "povgrid/policy.hpp"
#include "povgrid/replay.hpp"

using namespace povgrid;

namespace {

WorldConfig tiny_world(int w = 6, int h = 6) {
    WorldConfig c;
    c.width = w;
    c.height = h;
    c.t_max = 1;
    c.count_prior = {0.6, 0.4};
    c.max_steps = 50;
    return c;
}

// Single-variant network whose Q-values are exactly `bias` for every input.
QNetwork constant_q_net(int channels, const std::array<double, 4>& bias) {
    Rng rng(0);
    QNetwork net = make_qnetwork(QVariant::Single, channels, rng);
    for (Tensor* p : q_parameters(net)) p->fill(0.0);
    Tensor* fc2_bias = q_parameters(net).back();
    for (int i = 0; i < 4; ++i) (*fc2_bias)[i] = bias[i];
    return net;
}

}  // namespace

TEST(RandomAction, SingleAdmissibleIsForced) {
    Rng rng(1);
    EXPECT_EQ(random_action({Action::Left}, rng), Action::Left);
    EXPECT_THROW(random_action({}, rng), DomainError);
}

TEST(RandomAction, UniformOverAdmissible) {
    Rng rng(2);
    const std::vector<Action> all(kAllActions.begin(), kAllActions.end());
    std::array<int, 4> counts{};
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) ++counts[static_cast<int>(random_action(all, rng))];
    for (int a = 0; a < 4; ++a)
        EXPECT_NEAR(counts[a] / static_cast<double>(draws), 0.25, 0.01);
}

TEST(RandomAction, SeededSequencesRepeat) {
    Rng a(99), b(99);
    const std::vector<Action> all(kAllActions.begin(), kAllActions.end());
    for (int i = 0; i < 100; ++i) EXPECT_EQ(random_action(all, a), random_action(all, b));
}

TEST(GreedyIg, TieBreaksTowardCanonicalOrder) {
    // Point-mass prior: every IG is exactly zero, so the tie-break decides.
    WorldConfig c = tiny_world();
    c.count_prior = {1.0, 0.0};
    const BeliefState b = init_belief(c);
    EXPECT_EQ(greedy_ig_action(b, {3, 3}, c), Action::Up);
    EXPECT_EQ(greedy_ig_action(b, {0, 0}, c), Action::Down);  // Up/Left inadmissible
}

TEST(GreedyIg, PrefersTheOnlyInformativeDirection) {
    WorldConfig c = tiny_world();
    BeliefState b = init_belief(c);
    const Vec2i pos{3, 3};
    // Exhaust everything except the pairs reached by moving Right.
    for (Action a : {Action::Up, Action::Down, Action::Left}) {
        const Vec2i next = apply_action(pos, a, c);
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                const Vec2i cell{next.x + dx, next.y + dy};
                if (b.cells().in_bounds(cell)) b.update({{cell, pov_of(cell, next), 0}}, c.p_vis);
            }
    }
    ASSERT_GT(expected_ig(b, pos, Action::Right, c).ig, 0.0);
    EXPECT_EQ(greedy_ig_action(b, pos, c), Action::Right);
}

TEST(GreedyIg, MatchesExhaustiveEvaluation) {
    WorldConfig c = tiny_world(8, 8);
    Rng rng(404);
    for (int trial = 0; trial < 10; ++trial) {
        const GridWorld world = generate_world(c, rng.next_u64());
        BeliefState b = init_belief(c);
        Vec2i pos = world.agent_pos();
        for (int step = 0; step < 10; ++step) {
            const auto admissible = admissible_actions(pos, c);
            Action best = admissible.front();
            double best_ig = -1.0;
            for (Action a : admissible) {
                const double ig = expected_ig(b, pos, a, c).ig;
                if (ig > best_ig) {
                    best_ig = ig;
                    best = a;
                }
            }
            EXPECT_EQ(greedy_ig_action(b, pos, c), best);
            pos = apply_action(pos, best, c);
            b.update(sense(world, pos), c.p_vis);
        }
    }
}

TEST(GreedyIg, InvariantUnderPositiveRescaling) {
    // Scaling all four IG values by a positive constant cannot change the
    // argmax; equivalent here to scaling every cell entropy via p_vis change
    // being out of scope, so assert directly on the evaluation values.
    WorldConfig c = tiny_world(8, 8);
    const GridWorld world = generate_world(c, 5150);
    BeliefState b = init_belief(c);
    Vec2i pos = world.agent_pos();
    b.update(sense(world, pos), c.p_vis);
    const auto admissible = admissible_actions(pos, c);
    std::vector<double> igs;
    for (Action a : admissible) igs.push_back(expected_ig(b, pos, a, c).ig);
    const Action chosen = greedy_ig_action(b, pos, c);
    for (double scale : {0.5, 2.0, 100.0}) {
        Action best = admissible.front();
        double best_v = -1.0;
        for (std::size_t i = 0; i < admissible.size(); ++i)
            if (igs[i] * scale > best_v) {
                best_v = igs[i] * scale;
                best = admissible[i];
            }
        EXPECT_EQ(best, chosen);
    }
}

TEST(EncodeState, ChannelCountAndLayout) {
    EXPECT_EQ(encoded_channels(3, true), 15);
    EXPECT_EQ(encoded_channels(3, false), 6);
    EXPECT_EQ(encoded_channels(2, true), 14);

    WorldConfig c;
    c.width = 5;
    c.height = 5;
    c.t_max = 3;
    c.count_prior = {0.25, 0.25, 0.25, 0.25};
    const BeliefState b = init_belief(c);
    const Tensor t = encode_state(b, {2, 2}, 3, true);
    EXPECT_EQ(t.shape(), (std::vector<int>{15, 3, 3}));

    // Uniform prior: normalized entropy = 1 everywhere; mask channels = 1
    // (all POVs unobserved); OOB channel = 0 in the interior.
    for (int wy = 0; wy < 3; ++wy)
        for (int wx = 0; wx < 3; ++wx) {
            EXPECT_NEAR(t[t.at3(4, wy, wx)], 1.0, 1e-12);  // entropy channel
            for (int pov = 0; pov < kNumPovs; ++pov)
                EXPECT_EQ(t[t.at3(5 + pov, wy, wx)], 1.0);
            EXPECT_EQ(t[t.at3(14, wy, wx)], 0.0);
            double sum = 0.0;
            for (int k = 0; k < 4; ++k) sum += t[t.at3(k, wy, wx)];
            EXPECT_NEAR(sum, 1.0, 1e-12);
        }
}

TEST(EncodeState, CornerWindowMarksOutOfBounds) {
    WorldConfig c;
    c.width = 5;
    c.height = 5;
    c.t_max = 1;
    c.count_prior = {0.5, 0.5};
    const BeliefState b = init_belief(c);
    const Tensor t = encode_state(b, {0, 0}, 3, true);
    const int oob_ch = encoded_channels(1, true) - 1;
    int oob = 0;
    for (int wy = 0; wy < 3; ++wy)
        for (int wx = 0; wx < 3; ++wx) {
            const bool is_oob = t[t.at3(oob_ch, wy, wx)] == 1.0;
            oob += is_oob;
            if (is_oob) {
                for (int ch = 0; ch < oob_ch; ++ch) EXPECT_EQ(t[t.at3(ch, wy, wx)], 0.0);
            }
        }
    EXPECT_EQ(oob, 5);
}

TEST(EncodeState, ResolvedCellIsOneHotWithZeroEntropy) {
    WorldConfig c;
    c.width = 5;
    c.height = 5;
    c.t_max = 1;
    c.count_prior = {0.5, 0.5};
    BeliefState b = init_belief(c);
    b.update({{{2, 2}, kCenterPov, 1}}, 1.0);  // pins count = 1
    const Tensor t = encode_state(b, {2, 2}, 3, true);
    EXPECT_EQ(t[t.at3(0, 1, 1)], 0.0);
    EXPECT_EQ(t[t.at3(1, 1, 1)], 1.0);
    EXPECT_EQ(t[t.at3(2, 1, 1)], 0.0);              // entropy
    EXPECT_EQ(t[t.at3(3 + kCenterPov, 1, 1)], 0.0);  // center POV now observed
}

TEST(EncodeState, MaskAblationDropsMaskChannels) {
    WorldConfig c;
    c.width = 5;
    c.height = 5;
    c.t_max = 1;
    c.count_prior = {0.5, 0.5};
    const BeliefState b = init_belief(c);
    const Tensor t = encode_state(b, {2, 2}, 3, false);
    EXPECT_EQ(t.shape(), (std::vector<int>{4, 3, 3}));  // belief x2, entropy, OOB
    EXPECT_THROW(encode_state(b, {2, 2}, 4, false), DomainError);
}

TEST(EncodeState, PureFunctionOfBeliefMaskAndPosition) {
    WorldConfig c = tiny_world();
    const GridWorld world = generate_world(c, 8);
    BeliefState b = init_belief(c);
    b.update(sense(world, {2, 2}), c.p_vis);
    const Tensor a1 = encode_state(b, {2, 2}, 5, true);
    const Tensor a2 = encode_state(b, {2, 2}, 5, true);
    EXPECT_TRUE(a1 == a2);
}

TEST(SelectAction, GreedyArgmaxWithCanonicalTies) {
    QNetwork net = constant_q_net(5, {3.0, 1.0, 2.0, 0.0});
    AgentInput in;
    in.local = Tensor({5, 3, 3});
    Rng rng(1);
    const std::vector<Action> all(kAllActions.begin(), kAllActions.end());
    EXPECT_EQ(select_action(net, in, 0.0, all, rng), Action::Up);

    QNetwork net2 = constant_q_net(5, {9.0, 1.0, 2.0, 0.0});
    EXPECT_EQ(select_action(net2, in, 0.0, {Action::Down, Action::Left, Action::Right}, rng),
              Action::Left);

    QNetwork net3 = constant_q_net(5, {1.0, 1.0, 1.0, 1.0});
    EXPECT_EQ(select_action(net3, in, 0.0, all, rng), Action::Up);
}

TEST(SelectAction, FullExplorationMatchesUniform) {
    QNetwork net = constant_q_net(5, {9.0, 0.0, 0.0, 0.0});
    AgentInput in;
    in.local = Tensor({5, 3, 3});
    Rng rng(5);
    const std::vector<Action> all(kAllActions.begin(), kAllActions.end());
    std::array<int, 4> counts{};
    const int draws = 40000;
    for (int i = 0; i < draws; ++i) ++counts[static_cast<int>(select_action(net, in, 1.0, all, rng))];
    for (int a = 0; a < 4; ++a)
        EXPECT_NEAR(counts[a] / static_cast<double>(draws), 0.25, 0.015);
}

TEST(ComputeReward, EntropyDropMinusStepCost) {
    EXPECT_EQ(compute_reward(10.0, 10.0, 0.01), -0.01);
    EXPECT_EQ(compute_reward(5.0, 4.0, 0.0), 1.0);
}

TEST(ComputeReward, TelescopesOverAnEpisode) {
    WorldConfig c = tiny_world(8, 8);
    GridWorld world = generate_world(c, 23);
    BeliefState belief = init_belief(c);
    RandomPolicy policy;
    Rng rng(24);
    const double initial = total_entropy(belief);
    const double lambda = 0.01;
    double reward_sum = 0.0;
    const int steps = 40;
    for (int i = 0; i < steps; ++i)
        reward_sum += run_policy_step(policy, world, belief, lambda, rng).reward;
    EXPECT_NEAR(reward_sum, (initial - total_entropy(belief)) - lambda * steps, 1e-9);
}

TEST(ReplayBuffer, CapacityAndFifoEviction) {
    ReplayBuffer buf(8);
    for (int i = 0; i < 20; ++i) {
        Transition t;
        t.reward = i;
        buf.push(std::move(t));
        EXPECT_LE(buf.size(), 8u);
    }
    Rng rng(6);
    const auto batch = buf.sample(8, rng);
    for (const Transition* t : batch) EXPECT_GE(t->reward, 12.0);  // 0..11 evicted
}

TEST(ReplayBuffer, BatchHasDistinctTransitions) {
    ReplayBuffer buf(100);
    for (int i = 0; i < 100; ++i) {
        Transition t;
        t.reward = i;
        buf.push(std::move(t));
    }
    Rng rng(7);
    const auto batch = buf.sample(64, rng);
    for (std::size_t i = 0; i < batch.size(); ++i)
        for (std::size_t j = i + 1; j < batch.size(); ++j) EXPECT_NE(batch[i], batch[j]);
    EXPECT_THROW(buf.sample(101, rng), DomainError);
}

TEST(EpsilonSchedule, LinearNonIncreasingWithFloor) {
    DQNConfig d;
    EXPECT_EQ(epsilon_at(d, 0), 1.0);
    EXPECT_NEAR(epsilon_at(d, 25000), 0.525, 1e-12);
    EXPECT_EQ(epsilon_at(d, 50000), 0.05);
    EXPECT_EQ(epsilon_at(d, 500000), 0.05);
    double prev = 2.0;
    for (std::int64_t s = 0; s <= 60000; s += 1000) {
        const double eps = epsilon_at(d, s);
        EXPECT_GE(eps, 0.0);
        EXPECT_LE(eps, 1.0);
        EXPECT_LE(eps, prev);
        prev = eps;
    }
}

TEST(DqnConfig, Validation) {
    DQNConfig d;
    EXPECT_NO_THROW(d.validate());
    d.gamma = 1.0;
    EXPECT_THROW(d.validate(), ConfigError);
    d = DQNConfig{};
    d.eps_end = 1.5;
    EXPECT_THROW(d.validate(), ConfigError);
    d = DQNConfig{};
    d.learning_starts = 10;  // below batch size
    EXPECT_THROW(d.validate(), ConfigError);
}

TEST(RunPolicyStep, FreshGreedyStepHasPositiveReward) {
    WorldConfig c = tiny_world(8, 8);
    GridWorld world = generate_world(c, 31);
    BeliefState belief = init_belief(c);
    GreedyIgPolicy policy;
    Rng rng(32);
    const StepResult sr = run_policy_step(policy, world, belief, 0.01, rng);
    EXPECT_GT(sr.reward, 0.0);
    EXPECT_GT(sr.new_povs, 0);
    EXPECT_EQ(world.agent_pos(), sr.pos);
}

TEST(RunPolicyStep, EmptyForcedWorldKeepsPredictionsCorrect) {
    WorldConfig c = tiny_world(8, 8);
    c.count_prior = {1.0, 0.0};
    GridWorld world = generate_world(c, 33);
    BeliefState belief = init_belief(c);
    const Grid<int> truth = true_target_map(world);
    RandomPolicy policy;
    Rng rng(34);
    for (int i = 0; i < 30; ++i) {
        run_policy_step(policy, world, belief, 0.01, rng);
        EXPECT_EQ(correct_count(predict_map(belief), truth), 64);
    }
}

TEST(Policies, OnlyReturnAdmissibleActions) {
    WorldConfig c = tiny_world(5, 5);
    Rng seed_rng(35);
    Rng net_rng(36);
    QNetwork net = make_qnetwork(QVariant::Single, encoded_channels(c.t_max, true), net_rng);
    RandomPolicy random;
    GreedyIgPolicy greedy;
    DqnPolicy dqn(std::move(net), true, 0.3);
    Policy* policies[] = {&random, &greedy, &dqn};
    for (Policy* p : policies) {
        GridWorld world = generate_world(c, seed_rng.next_u64());
        world.set_agent_pos({0, 0});  // corner start stresses the boundary
        BeliefState belief = init_belief(c);
        Rng rng(seed_rng.next_u64());
        for (int i = 0; i < 60; ++i) EXPECT_NO_THROW(run_policy_step(*p, world, belief, 0.01, rng));
    }
}

TEST(TrainDqn, ZeroEpisodesReturnsSeededInitialization) {
    WorldConfig wc = tiny_world();
    DQNConfig dqn;
    dqn.episodes = 0;
    TrainResult r = train_dqn(QVariant::Single, dqn, wc, 77);
    Rng init(derive_seed(77, 0));
    QNetwork expected = make_qnetwork(QVariant::Single, encoded_channels(wc.t_max, true), init);
    const auto pa = q_parameters(r.net);
    const auto pb = q_parameters(expected);
    ASSERT_EQ(pa.size(), pb.size());
    for (std::size_t i = 0; i < pa.size(); ++i) EXPECT_TRUE(*pa[i] == *pb[i]);
    EXPECT_TRUE(r.curve.empty());
}

TEST(TrainDqn, DeterministicCheckpoints) {
    WorldConfig wc = tiny_world();
    wc.max_steps = 30;
    DQNConfig dqn;
    dqn.episodes = 3;
    dqn.learning_starts = 64;
    dqn.eps_decay_steps = 80;
    TrainResult a = train_dqn(QVariant::Single, dqn, wc, 123);
    TrainResult b = train_dqn(QVariant::Single, dqn, wc, 123);
    auto pa = q_parameters(a.net);
    auto pb = q_parameters(b.net);
    for (std::size_t i = 0; i < pa.size(); ++i) EXPECT_TRUE(*pa[i] == *pb[i]);
    ASSERT_EQ(a.curve.size(), b.curve.size());
    for (std::size_t i = 0; i < a.curve.size(); ++i) {
        EXPECT_EQ(a.curve[i].total_reward, b.curve[i].total_reward);
        EXPECT_EQ(a.curve[i].mean_loss, b.curve[i].mean_loss);
    }
    TrainResult c = train_dqn(QVariant::Single, dqn, wc, 124);
    EXPECT_FALSE(*q_parameters(c.net)[0] == *pa[0]);
}
