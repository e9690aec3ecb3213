// povgrid/metrics.hpp - per-step episode metrics and multi-run aggregation.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "povgrid/errors.hpp"

namespace povgrid {

struct MetricsRow {
    int run_id = 0;
    int step = 0;
    int correct_cells = 0;                 // cells whose argmax prediction matches truth
    double total_entropy = 0.0;            // bits
    double cumulative_ig = 0.0;            // realized entropy reduction since step 0, bits
    std::int64_t unique_povs_observed = 0;
    int agent_x = 0;
    int agent_y = 0;
};

struct AggregateRow {
    int step = 0;
    double correct_cells_mean = 0.0;
    double correct_cells_std = 0.0;
    double total_entropy_mean = 0.0;
    double total_entropy_std = 0.0;
};

namespace detail {
inline std::pair<double, double> mean_sample_std(const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    if (xs.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}
}  // namespace detail

// Per-step mean and sample standard deviation across runs. Early-stopped
// episodes contribute their final row to every later step (their state is
// frozen once exploration ends), so each aggregate row covers every run.
inline std::vector<AggregateRow> aggregate_runs(const std::vector<std::vector<MetricsRow>>& runs) {
    if (runs.empty()) throw DomainError("aggregate_runs: no runs");
    std::size_t max_len = 0;
    for (const auto& r : runs) {
        if (r.empty()) throw DomainError("aggregate_runs: empty run");
        max_len = std::max(max_len, r.size());
    }
    std::vector<AggregateRow> out;
    out.reserve(max_len);
    std::vector<double> correct(runs.size()), entropy(runs.size());
    for (std::size_t s = 0; s < max_len; ++s) {
        for (std::size_t r = 0; r < runs.size(); ++r) {
            const MetricsRow& row = runs[r][std::min(s, runs[r].size() - 1)];
            correct[r] = static_cast<double>(row.correct_cells);
            entropy[r] = row.total_entropy;
        }
        const auto [cm, cs] = detail::mean_sample_std(correct);
        const auto [em, es] = detail::mean_sample_std(entropy);
        out.push_back({static_cast<int>(s), cm, cs, em, es});
    }
    return out;
}

}  // namespace povgrid
