// povgrid/belief.hpp - exact Bayesian belief over per-cell target counts,
// entropy maps, the POV visibility mask, and expected information gain.
//
// Conditional on a cell's count t, the number of its targets visible from a
// fresh POV is Binomial(t, p_vis), and distinct (cell, POV) pairs are
// independent, so the posterior over counts factorizes per cell and is
// computable in closed form. Repeat observations of an already-seen
// (cell, POV) pair carry zero information in the noiseless model and are
// skipped via the mask.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "povgrid/errors.hpp"
#include "povgrid/grid.hpp"
#include "povgrid/world.hpp"

namespace povgrid {

struct CellBelief {
    std::vector<double> probs;  // P(count = k), k = 0..t_max

    friend bool operator==(const CellBelief& a, const CellBelief& b) { return a.probs == b.probs; }
};

// Shannon entropy in bits, with 0 * log 0 = 0.
inline double cell_entropy(const CellBelief& cb) {
    double h = 0.0;
    for (double p : cb.probs)
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

// Binomial observation likelihood P(n visible | t present) = C(t,n) p^n (1-p)^(t-n).
inline double likelihood(int n, int t, double p_vis) {
    if (!(p_vis > 0.0) || p_vis > 1.0) throw DomainError("likelihood: p_vis must be in (0, 1]");
    if (n < 0 || t < 0) throw DomainError("likelihood: counts must be non-negative");
    if (n > t) return 0.0;
    double binom = 1.0;
    for (int i = 1; i <= n; ++i) binom = binom * (t - n + i) / i;
    return binom * std::pow(p_vis, n) * std::pow(1.0 - p_vis, t - n);
}

// Posterior over counts after observing n from one fresh POV; shared by the
// filter, expected-IG, and the Monte-Carlo consistency check.
inline CellBelief posterior_given(const CellBelief& prior, int n, double p_vis) {
    CellBelief post = prior;
    double sum = 0.0;
    for (std::size_t t = 0; t < post.probs.size(); ++t) {
        post.probs[t] *= likelihood(n, static_cast<int>(t), p_vis);
        sum += post.probs[t];
    }
    if (!(sum > 0.0))
        throw InconsistencyError(
            "belief update: observation has zero probability under the belief support");
    for (double& p : post.probs) p /= sum;
    return post;
}

// Which (cell, POV) pairs have been observed. Monotone over an episode.
class PovMask {
public:
    PovMask() = default;
    PovMask(int width, int height) : bits_(width, height, 0) {}

    bool test(Vec2i cell, int pov) const { return (bits_(cell) >> pov) & 1u; }

    void set(Vec2i cell, int pov) {
        if (!test(cell, pov)) {
            bits_(cell) |= static_cast<std::uint16_t>(1u << pov);
            ++observed_;
        }
    }

    // Count of POVs still unobserved for one cell.
    int unobserved(Vec2i cell) const {
        int n = 0;
        for (int pov = 0; pov < kNumPovs; ++pov) n += !test(cell, pov);
        return n;
    }

    std::int64_t observed_total() const { return observed_; }
    int width() const { return bits_.width(); }
    int height() const { return bits_.height(); }

    friend bool operator==(const PovMask& a, const PovMask& b) { return a.bits_ == b.bits_; }

private:
    Grid<std::uint16_t> bits_;
    std::int64_t observed_ = 0;
};

class BeliefState {
public:
    BeliefState() = default;

    // Every cell starts at `prior`; mask all-false; entropy cache filled.
    BeliefState(int width, int height, std::vector<double> prior)
        : cells_(width, height, CellBelief{prior}), mask_(width, height),
          entropy_(width, height, 0.0) {
        const double h = cell_entropy(CellBelief{prior});
        for (double& e : entropy_) e = h;
    }

    int width() const { return cells_.width(); }
    int height() const { return cells_.height(); }
    int t_max() const { return static_cast<int>(cells_(0, 0).probs.size()) - 1; }

    const Grid<CellBelief>& cells() const { return cells_; }
    const CellBelief& cell(Vec2i p) const { return cells_(p); }
    const PovMask& mask() const { return mask_; }
    const Grid<double>& entropy_map() const { return entropy_; }

    // Bayes update for a batch of observations. Already-masked pairs are
    // exact no-ops; fresh pairs multiply in the binomial likelihood,
    // renormalize, set the mask bit, and refresh the entropy cache.
    // Observations are applied in canonical (y, x, pov) order so the result
    // is bit-identical regardless of input order.
    void update(std::vector<Observation> obs, double p_vis) {
        std::sort(obs.begin(), obs.end(), [](const Observation& a, const Observation& b) {
            if (a.cell.y != b.cell.y) return a.cell.y < b.cell.y;
            if (a.cell.x != b.cell.x) return a.cell.x < b.cell.x;
            return a.pov < b.pov;
        });
        for (const Observation& o : obs) {
            if (!cells_.in_bounds(o.cell)) throw DomainError("belief update: cell out of bounds");
            if (o.pov < 0 || o.pov >= kNumPovs)
                throw DomainError("belief update: POV index out of range");
            if (mask_.test(o.cell, o.pov)) continue;
            CellBelief& cb = cells_(o.cell);
            cb = posterior_given(cb, o.n, p_vis);
            mask_.set(o.cell, o.pov);
            entropy_(o.cell) = cell_entropy(cb);
        }
    }

    friend bool operator==(const BeliefState& a, const BeliefState& b) {
        return a.cells_ == b.cells_ && a.mask_ == b.mask_ && a.entropy_ == b.entropy_;
    }

private:
    Grid<CellBelief> cells_;
    PovMask mask_;
    Grid<double> entropy_;  // cache: entropy_(c) == cell_entropy(cells_(c))
};

inline BeliefState init_belief(const WorldConfig& config) {
    config.validate();
    return BeliefState(config.width, config.height, config.count_prior);
}

inline double total_entropy(const BeliefState& belief) {
    double sum = 0.0;
    for (double h : belief.entropy_map()) sum += h;
    return sum;
}

struct ActionEvaluation {
    Action action;
    double ig = 0.0;  // expected information gain in bits; >= 0
};

// Expected information gain of moving with `action` and sensing the 3x3
// window at the successor position: the sum over affected unmasked cells of
// the mutual information between the cell's count and its next observation,
//   I(t; n) = H(t) - sum_n P(n) H(t | n),  P(n) = sum_t P(t) L(n | t).
// Masked and out-of-bounds cells contribute zero.
inline ActionEvaluation expected_ig(const BeliefState& belief, Vec2i pos, Action action,
                                    const WorldConfig& config) {
    const Vec2i next = [&] {
        try {
            return apply_action(pos, action, config);
        } catch (const MovementError&) {
            throw DomainError("expected_ig: action not admissible at this position");
        }
    }();

    const int t_max = belief.t_max();
    double ig = 0.0;
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            const Vec2i cell{next.x + dx, next.y + dy};
            if (!belief.cells().in_bounds(cell)) continue;
            const int pov = pov_of(cell, next);
            if (belief.mask().test(cell, pov)) continue;

            const std::vector<double>& probs = belief.cell(cell).probs;
            double conditional = 0.0;
            for (int n = 0; n <= t_max; ++n) {
                double pn = 0.0;
                for (int t = 0; t <= t_max; ++t) pn += probs[t] * likelihood(n, t, config.p_vis);
                if (pn <= 0.0) continue;
                double h = 0.0;
                for (int t = 0; t <= t_max; ++t) {
                    const double q = probs[t] * likelihood(n, t, config.p_vis) / pn;
                    if (q > 0.0) h -= q * std::log2(q);
                }
                conditional += pn * h;
            }
            const double mi = belief.entropy_map()(cell) - conditional;
            ig += std::max(mi, 0.0);
        }
    }
    return {action, ig};
}

// Per-cell argmax of the posterior; ties break toward the smallest count.
inline Grid<int> predict_map(const BeliefState& belief) {
    Grid<int> out(belief.width(), belief.height());
    for (int y = 0; y < belief.height(); ++y) {
        for (int x = 0; x < belief.width(); ++x) {
            const std::vector<double>& probs = belief.cell({x, y}).probs;
            int best = 0;
            for (std::size_t k = 1; k < probs.size(); ++k)
                if (probs[k] > probs[best]) best = static_cast<int>(k);
            out(x, y) = best;
        }
    }
    return out;
}

inline int correct_count(const Grid<int>& pred, const Grid<int>& truth) {
    if (pred.width() != truth.width() || pred.height() != truth.height())
        throw DomainError("correct_count: grid dimensions differ");
    int n = 0;
    for (int y = 0; y < pred.height(); ++y)
        for (int x = 0; x < pred.width(); ++x) n += (pred(x, y) == truth(x, y));
    return n;
}

// Debug dump: per cell, posterior probs, entropy, and the 9 mask bits.
inline std::string dump_belief(const BeliefState& belief) {
    std::ostringstream os;
    for (int y = 0; y < belief.height(); ++y) {
        for (int x = 0; x < belief.width(); ++x) {
            os << x << "," << y << " probs=";
            const CellBelief& cb = belief.cell({x, y});
            for (std::size_t k = 0; k < cb.probs.size(); ++k) {
                if (k) os << ",";
                os << cb.probs[k];
            }
            os << " entropy=" << belief.entropy_map()(x, y) << " mask=";
            for (int pov = kNumPovs - 1; pov >= 0; --pov)
                os << (belief.mask().test({x, y}, pov) ? '1' : '0');
            os << "\n";
        }
    }
    return os.str();
}

}  // namespace povgrid
