// Acceptance suite: one test (and one pass/fail line) per criterion.
// Criteria 6-8 share the trained networks from a single training pass.
#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <vector>

#include "povgrid/povgrid.hpp"

using namespace povgrid;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

WorldConfig desk_world() {  // shared by the DQN criteria
    WorldConfig c;
    c.width = 10;
    c.height = 10;
    c.t_max = 2;
    c.p_vis = 0.5;
    c.count_prior = {0.5, 0.3, 0.2};
    c.max_steps = 150;
    return c;
}

DQNConfig desk_dqn() {
    DQNConfig d;
    d.episodes = 400;
    d.eps_decay_steps = 40000;
    return d;
}

constexpr std::uint64_t kTrainSeeds[3] = {100, 101, 102};
constexpr std::uint64_t kEvalMasterSeed = 9999;
constexpr int kEvalRuns = 20;

struct EvalStats {
    double mean_correct = 0.0;
    double mean_entropy = 0.0;
};

// Final-step statistics over the shared held-out evaluation worlds.
EvalStats evaluate(Policy& policy, const WorldConfig& world) {
    EvalStats stats;
    for (int i = 0; i < kEvalRuns; ++i) {
        const EpisodeResult r =
            run_episode(policy, world, derive_seed(kEvalMasterSeed, i), world.max_steps);
        stats.mean_correct += r.rows.back().correct_cells;
        stats.mean_entropy += r.rows.back().total_entropy;
    }
    stats.mean_correct /= kEvalRuns;
    stats.mean_entropy /= kEvalRuns;
    return stats;
}

struct TrainedSet {
    std::vector<TrainResult> single_masked;
    std::vector<TrainResult> single_maskless;
    std::vector<TrainResult> double_masked;
    double train_seconds = 0.0;
};

TrainedSet& trained_set() {
    static TrainedSet set = [] {
        TrainedSet s;
        const auto start = Clock::now();
        for (std::uint64_t seed : kTrainSeeds) {
            s.single_masked.push_back(
                train_dqn(QVariant::Single, desk_dqn(), desk_world(), seed, true));
            s.single_maskless.push_back(
                train_dqn(QVariant::Single, desk_dqn(), desk_world(), seed, false));
            s.double_masked.push_back(
                train_dqn(QVariant::Double, desk_dqn(), desk_world(), seed, true));
        }
        s.train_seconds = seconds_since(start);
        return s;
    }();
    return set;
}

}  // namespace

// Exact filter vs brute-force enumeration over all (count, visibility)
// worlds: 1x2 grid, t_max = 2, p_vis = 0.5, 100 random observation
// sequences, max abs probability difference < 1e-9, under 5 s.
TEST(Acceptance, Criterion01_FilterOracleEquivalence) {
    const auto start = Clock::now();
    const std::vector<double> prior = {0.5, 0.3, 0.2};
    const double p_vis = 0.5;
    Rng rng(derive_seed(1, 0));
    double max_diff = 0.0;
    for (int seq = 0; seq < 100; ++seq) {
        BeliefState belief(1, 2, prior);
        CellTruth truth[2] = {sample_cell_truth(prior, p_vis, rng),
                              sample_cell_truth(prior, p_vis, rng)};
        std::vector<std::vector<std::pair<int, int>>> seen(2);
        const int len = 6 + static_cast<int>(rng.uniform_int(7));  // 6..12 observations
        for (int k = 0; k < len; ++k) {
            const int cell = static_cast<int>(rng.uniform_int(2));
            const int pov = static_cast<int>(rng.uniform_int(kNumPovs));
            const int n = visible_count(truth[cell], pov);
            belief.update({{{0, cell}, pov, n}}, p_vis);
            seen[cell].push_back({pov, n});
        }
        for (int cell = 0; cell < 2; ++cell) {
            const auto expected = enumerate_cell_posterior(prior, p_vis, seen[cell]);
            for (std::size_t i = 0; i < expected.size(); ++i)
                max_diff =
                    std::max(max_diff, std::abs(belief.cell({0, cell}).probs[i] - expected[i]));
        }
    }
    EXPECT_LT(max_diff, 1e-9);
    EXPECT_LT(seconds_since(start), 5.0);
}

// Entropy values for uniform-4, point-mass, and fair-coin beliefs, 1e-12.
TEST(Acceptance, Criterion02_EntropyUnitValues) {
    EXPECT_NEAR(cell_entropy({{0.25, 0.25, 0.25, 0.25}}), 2.0, 1e-12);
    EXPECT_NEAR(cell_entropy({{1.0, 0.0, 0.0, 0.0}}), 0.0, 1e-12);
    EXPECT_NEAR(cell_entropy({{0.5, 0.5}}), 1.0, 1e-12);
}

// Analytic expected_ig agrees with Monte-Carlo realized entropy drop (1e5
// sampled worlds, 3 standard errors) on 20 randomized beliefs; exact zeros
// for fully masked and deterministic neighborhoods; 0 <= ig <= sum H(c).
TEST(Acceptance, Criterion03_ExpectedIgConsistency) {
    WorldConfig c;
    c.width = 6;
    c.height = 6;
    c.t_max = 2;
    c.p_vis = 0.5;
    c.count_prior = {0.5, 0.3, 0.2};

    Rng rng(derive_seed(3, 0));
    for (int trial = 0; trial < 20; ++trial) {
        const GridWorld world = generate_world(c, rng.next_u64());
        BeliefState belief = init_belief(c);
        Vec2i pos = world.agent_pos();
        const int walk = static_cast<int>(rng.uniform_int(12));
        for (int step = 0; step < walk; ++step) {
            const auto actions = admissible_actions(pos, c);
            pos = apply_action(pos, actions[rng.uniform_int(actions.size())], c);
            belief.update(sense(world, pos), c.p_vis);
        }
        const auto actions = admissible_actions(pos, c);
        const Action action = actions[rng.uniform_int(actions.size())];

        const double ig = expected_ig(belief, pos, action, c).ig;
        const McEstimate mc = mc_expected_ig(belief, pos, action, c, 100000, rng);
        EXPECT_NEAR(ig, mc.mean, 3.0 * mc.std_error) << "trial " << trial;

        const Vec2i next = apply_action(pos, action, c);
        double bound = 0.0;
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                const Vec2i cell{next.x + dx, next.y + dy};
                if (belief.cells().in_bounds(cell) &&
                    !belief.mask().test(cell, pov_of(cell, next)))
                    bound += belief.entropy_map()(cell);
            }
        EXPECT_GE(ig, 0.0);
        EXPECT_LE(ig, bound + 1e-12);
    }

    // Fully masked neighborhood: exact zero.
    {
        BeliefState b(6, 6, c.count_prior);
        const Vec2i next{3, 2};
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                const Vec2i cell{next.x + dx, next.y + dy};
                b.update({{cell, pov_of(cell, next), 0}}, c.p_vis);
            }
        EXPECT_EQ(expected_ig(b, {3, 3}, Action::Up, c).ig, 0.0);
    }
    // Deterministic neighborhood: exact zero.
    {
        BeliefState b(6, 6, c.count_prior);
        const Vec2i next{3, 2};
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                const Vec2i cell{next.x + dx, next.y + dy};
                const int other = (pov_of(cell, next) + 1) % kNumPovs;
                b.update({{cell, other, 2}}, 1.0);  // p_vis = 1 pins the count
            }
        EXPECT_EQ(expected_ig(b, {3, 3}, Action::Up, c).ig, 0.0);
    }
}

// grad_check on both network variants, 5 seeds each, max relative error
// < 1e-4, under 30 s.
TEST(Acceptance, Criterion04_GradientCorrectness) {
    const auto start = Clock::now();
    const int channels = encoded_channels(3, true);
    for (QVariant v : {QVariant::Single, QVariant::Double}) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            Rng rng(derive_seed(400 + seed, 0));
            Rng input_rng(derive_seed(400 + seed, 1));
            QNetwork net = make_qnetwork(v, channels, rng);
            AgentInput in;
            in.local = Tensor({channels, kLocalWindow, kLocalWindow});
            in.wide = Tensor({channels, kWideWindow, kWideWindow});
            for (std::size_t i = 0; i < in.local.size(); ++i) in.local[i] = input_rng.uniform01();
            for (std::size_t i = 0; i < in.wide.size(); ++i) in.wide[i] = input_rng.uniform01();
            EXPECT_LT(grad_check(net, in, 1e-5, rng), 1e-4)
                << to_string(v) << " seed " << seed;
        }
    }
    EXPECT_LT(seconds_since(start), 30.0);
}

// Greedy-IG beats the random baseline on the full 20x20 protocol: mean
// correct cells at step 500 higher with non-overlapping mean +/- 2 SEM
// intervals over 20 runs each; under 5 min.
TEST(Acceptance, Criterion05_GreedyBeatsRandom) {
    const auto start = Clock::now();
    ExperimentConfig cfg;  // defaults: 20x20, t_max 3, 1000 steps
    cfg.runs = 20;
    cfg.master_seed = 500;

    cfg.agent = AgentKind::GreedyIg;
    const auto greedy = aggregate_runs(run_experiment_episodes(cfg));
    cfg.agent = AgentKind::Random;
    const auto random = aggregate_runs(run_experiment_episodes(cfg));

    ASSERT_GT(greedy.size(), 500u);
    ASSERT_GT(random.size(), 500u);
    const AggregateRow& g = greedy[500];
    const AggregateRow& r = random[500];
    const double sem_scale = 2.0 / std::sqrt(20.0);
    EXPECT_GT(g.correct_cells_mean, r.correct_cells_mean);
    EXPECT_GT(g.correct_cells_mean - sem_scale * g.correct_cells_std,
              r.correct_cells_mean + sem_scale * r.correct_cells_std);
    EXPECT_LT(seconds_since(start), 300.0);
}

// POV-mask ablation: identically budgeted dqn-single trainings with and
// without the mask channels; the masked agent's mean final-step correct
// cells over the 20 eval seeds is strictly higher for every training seed.
TEST(Acceptance, Criterion06_PovMaskAblation) {
    TrainedSet& set = trained_set();
    EXPECT_LT(set.train_seconds, 45.0 * 60.0);
    for (std::size_t i = 0; i < 3; ++i) {
        DqnPolicy masked(set.single_masked[i].net, true, 0.0);
        DqnPolicy maskless(set.single_maskless[i].net, false, 0.0);
        const EvalStats with_mask = evaluate(masked, desk_world());
        const EvalStats without_mask = evaluate(maskless, desk_world());
        EXPECT_GT(with_mask.mean_correct, without_mask.mean_correct)
            << "training seed " << kTrainSeeds[i];
    }
}

// Dual-view DQN matches or beats single-view on mean final total entropy
// for at least 2 of the 3 training seeds; combined training stays under
// the 45-minute budget shared with criterion 6.
TEST(Acceptance, Criterion07_DoubleVsSingle) {
    TrainedSet& set = trained_set();
    int wins = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        DqnPolicy single(set.single_masked[i].net, true, 0.0);
        DqnPolicy dual(set.double_masked[i].net, true, 0.0);
        const double single_entropy = evaluate(single, desk_world()).mean_entropy;
        const double double_entropy = evaluate(dual, desk_world()).mean_entropy;
        wins += double_entropy <= single_entropy;
    }
    EXPECT_GE(wins, 2);
    EXPECT_LT(set.train_seconds, 45.0 * 60.0);
}

// The trained single-view DQN lands within +/- 15% of the untrained
// greedy-IG agent's mean final-step correct cells on the shared eval set.
TEST(Acceptance, Criterion08_TrainedSingleNearGreedy) {
    TrainedSet& set = trained_set();
    GreedyIgPolicy greedy;
    const double greedy_correct = evaluate(greedy, desk_world()).mean_correct;
    double dqn_correct = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        DqnPolicy policy(set.single_masked[i].net, true, 0.0);
        dqn_correct += evaluate(policy, desk_world()).mean_correct;
    }
    dqn_correct /= 3.0;
    EXPECT_LE(std::abs(dqn_correct - greedy_correct), 0.15 * greedy_correct)
        << "dqn " << dqn_correct << " vs greedy " << greedy_correct;
}

// Identical config + master seed reproduce byte-identical CSVs and
// checkpoints, both through the library (parallel episode execution) and
// through the installed CLI binary.
TEST(Acceptance, Criterion09_Determinism) {
    const fs::path tmp = fs::temp_directory_path() / "povgrid_acceptance9";
    fs::remove_all(tmp);
    fs::create_directories(tmp);

    ExperimentConfig cfg;
    cfg.world.width = 8;
    cfg.world.height = 8;
    cfg.world.t_max = 2;
    cfg.world.count_prior = {0.5, 0.3, 0.2};
    cfg.world.max_steps = 40;
    cfg.agent = AgentKind::GreedyIg;
    cfg.runs = 8;
    cfg.master_seed = 99;

    cfg.output_dir = (tmp / "lib_a").string();
    const auto a = run_experiment(cfg);
    cfg.output_dir = (tmp / "lib_b").string();
    const auto b = run_experiment(cfg);
    EXPECT_EQ(read_text_file(a.per_run_path), read_text_file(b.per_run_path));
    EXPECT_EQ(read_text_file(a.aggregate_path), read_text_file(b.aggregate_path));

    // Training determinism: identical checkpoint bytes.
    ExperimentConfig train_cfg;
    train_cfg.world = cfg.world;
    train_cfg.dqn.episodes = 3;
    train_cfg.dqn.learning_starts = 64;
    train_cfg.master_seed = 99;
    train_cfg.output_dir = (tmp / "train_a").string();
    const auto ck_a = train_and_save(train_cfg, QVariant::Single);
    train_cfg.output_dir = (tmp / "train_b").string();
    const auto ck_b = train_and_save(train_cfg, QVariant::Single);
    EXPECT_EQ(read_text_file(ck_a.checkpoint_path), read_text_file(ck_b.checkpoint_path));
    EXPECT_EQ(read_text_file(ck_a.curve_path), read_text_file(ck_b.curve_path));

    // Same through the CLI binary.
    const std::string config_path = (tmp / "exp.json").string();
    write_text_file(config_path, R"({
  "world": {"width": 8, "height": 8, "t_max": 2, "count_prior": [0.5, 0.3, 0.2], "max_steps": 40},
  "agent": "greedy-ig",
  "runs": 8,
  "master_seed": 99
})");
    const std::string cli = POVGRID_CLI_PATH;
    const auto invoke = [&](const std::string& out) {
        const std::string cmd =
            cli + " run --config " + config_path + " --out " + out + " > /dev/null";
        return std::system(cmd.c_str());
    };
    ASSERT_EQ(invoke((tmp / "cli_a").string()), 0);
    ASSERT_EQ(invoke((tmp / "cli_b").string()), 0);
    EXPECT_EQ(read_text_file((tmp / "cli_a" / "per_run.csv").string()),
              read_text_file((tmp / "cli_b" / "per_run.csv").string()));
    EXPECT_EQ(read_text_file((tmp / "cli_a" / "aggregate.csv").string()),
              read_text_file((tmp / "cli_b" / "aggregate.csv").string()));
    // And the CLI output matches the library output byte-for-byte.
    EXPECT_EQ(read_text_file((tmp / "cli_a" / "per_run.csv").string()),
              read_text_file(a.per_run_path));

    fs::remove_all(tmp);
}

// For every logged episode the summed rewards telescope:
// sum(rewards) = (entropy at step 0 - final entropy) - lambda * steps.
TEST(Acceptance, Criterion10_RewardTelescoping) {
    WorldConfig c;
    c.width = 8;
    c.height = 8;
    c.t_max = 2;
    c.count_prior = {0.5, 0.3, 0.2};
    const double lambda = 0.01;
    RandomPolicy random;
    GreedyIgPolicy greedy;
    Policy* policies[] = {&random, &greedy};
    for (Policy* p : policies) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const EpisodeResult r = run_episode(*p, c, derive_seed(1000, seed), 120, lambda);
            const double expected = (r.rows.front().total_entropy - r.rows.back().total_entropy) -
                                    lambda * r.steps;
            EXPECT_NEAR(r.reward_sum, expected, 1e-9);
        }
    }
}
