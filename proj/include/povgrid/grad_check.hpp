// povgrid/grad_check.hpp - finite-difference verification of the analytic
// backward pass, on a random linear projection of the network output.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "povgrid/qnet.hpp"
#include "povgrid/rng.hpp"

namespace povgrid {

// Compares analytic gradients against central finite differences for every
// parameter of `net` and returns the maximum relative error
//   |analytic - numeric| / max(|analytic|, |numeric|, 1e-3).
// The projection vector is drawn from `rng`, so the check is reproducible.
inline double grad_check(QNetwork& net, const AgentInput& input, double eps, Rng& rng) {
    Tensor projection({kNumActions});
    for (int i = 0; i < kNumActions; ++i) projection[i] = rng.normal();

    const auto loss = [&]() {
        Tensor out = q_forward(net, input);
        double acc = 0.0;
        for (int i = 0; i < kNumActions; ++i) acc += projection[i] * out[i];
        return acc;
    };

    q_zero_grad(net);
    loss();  // populate layer caches
    q_backward(net, projection);

    std::vector<Tensor> analytic;
    for (Tensor* g : q_gradients(net)) analytic.push_back(*g);

    double max_rel = 0.0;
    const auto params = q_parameters(net);
    for (std::size_t k = 0; k < params.size(); ++k) {
        Tensor& p = *params[k];
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double saved = p[i];
            p[i] = saved + eps;
            const double up = loss();
            p[i] = saved - eps;
            const double down = loss();
            p[i] = saved;
            const double numeric = (up - down) / (2.0 * eps);
            const double a = analytic[k][i];
            const double rel =
                std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-3});
            max_rel = std::max(max_rel, rel);
        }
    }
    return max_rel;
}

}  // namespace povgrid
