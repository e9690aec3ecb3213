// povgrid/oracle.hpp - independent verification routes for the belief engine:
// a brute-force enumeration over all (count, visibility-assignment) worlds of
// a cell, and a Monte-Carlo estimate of expected information gain. Used by
// the selfcheck command and the test suites; deliberately avoids the binomial
// shortcut the filter itself relies on.
#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "povgrid/belief.hpp"
#include "povgrid/errors.hpp"
#include "povgrid/rng.hpp"
#include "povgrid/world.hpp"

namespace povgrid {

// Exact posterior over a single cell's count given (pov, n) observations,
// by enumerating every visibility assignment of every target and summing
// generative weights of the assignments consistent with all observations.
// Exponential in the count; restricted to t_max <= 2 (2^18 assignments).
inline std::vector<double> enumerate_cell_posterior(
    const std::vector<double>& count_prior, double p_vis,
    const std::vector<std::pair<int, int>>& observations) {
    const int t_max = static_cast<int>(count_prior.size()) - 1;
    if (t_max > 2) throw DomainError("enumerate_cell_posterior: t_max too large to enumerate");

    std::vector<double> mass(count_prior.size(), 0.0);
    for (int count = 0; count <= t_max; ++count) {
        const int bits = kNumPovs * count;
        for (std::uint64_t assign = 0; assign < (std::uint64_t{1} << bits); ++assign) {
            bool consistent = true;
            for (const auto& [pov, n] : observations) {
                int visible = 0;
                for (int target = 0; target < count; ++target)
                    visible += (assign >> (target * kNumPovs + pov)) & 1u;
                if (visible != n) {
                    consistent = false;
                    break;
                }
            }
            if (!consistent) continue;
            int ones = 0;
            for (int b = 0; b < bits; ++b) ones += (assign >> b) & 1u;
            mass[count] += count_prior[count] * std::pow(p_vis, ones) *
                           std::pow(1.0 - p_vis, bits - ones);
        }
    }
    double total = 0.0;
    for (double m : mass) total += m;
    if (!(total > 0.0))
        throw InconsistencyError("enumerate_cell_posterior: observations have zero mass");
    for (double& m : mass) m /= total;
    return mass;
}

// Samples one cell's ground truth from the generative model.
inline CellTruth sample_cell_truth(const std::vector<double>& count_prior, double p_vis,
                                   Rng& rng) {
    CellTruth cell;
    cell.count = rng.categorical(count_prior);
    cell.visibility.resize(cell.count);
    for (int t = 0; t < cell.count; ++t) {
        std::uint16_t mask = 0;
        for (int pov = 0; pov < kNumPovs; ++pov)
            if (rng.bernoulli(p_vis)) mask |= static_cast<std::uint16_t>(1u << pov);
        cell.visibility[t] = mask;
    }
    return cell;
}

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

// Monte-Carlo counterpart of expected_ig: samples worlds from the belief,
// simulates the observation the move would produce (per-target visibility
// draws, no binomial formula), and averages the realized entropy drop.
inline McEstimate mc_expected_ig(const BeliefState& belief, Vec2i pos, Action action,
                                 const WorldConfig& config, int samples, Rng& rng) {
    const Vec2i next = apply_action(pos, action, config);

    // Collect the affected (cell, pov) pairs once.
    std::vector<std::pair<Vec2i, int>> affected;
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            const Vec2i cell{next.x + dx, next.y + dy};
            if (!belief.cells().in_bounds(cell)) continue;
            const int pov = pov_of(cell, next);
            if (!belief.mask().test(cell, pov)) affected.emplace_back(cell, pov);
        }
    }

    double sum = 0.0;
    double sum_sq = 0.0;
    for (int s = 0; s < samples; ++s) {
        double drop = 0.0;
        for (const auto& [cell, pov] : affected) {
            const CellBelief& cb = belief.cell(cell);
            const int t = rng.categorical(cb.probs);
            int n = 0;
            for (int i = 0; i < t; ++i) n += rng.bernoulli(config.p_vis);
            drop += belief.entropy_map()(cell) - cell_entropy(posterior_given(cb, n, config.p_vis));
        }
        sum += drop;
        sum_sq += drop * drop;
    }
    McEstimate est;
    est.mean = sum / samples;
    if (samples > 1) {
        const double var = (sum_sq - sum * sum / samples) / (samples - 1);
        est.std_error = std::sqrt(std::max(var, 0.0) / samples);
    }
    return est;
}

}  // namespace povgrid
