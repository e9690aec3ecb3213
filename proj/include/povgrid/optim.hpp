// povgrid/optim.hpp - Adam optimizer state and the Huber TD loss.
#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "povgrid/errors.hpp"
#include "povgrid/tensor.hpp"

namespace povgrid {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Standard bias-corrected adaptive-moment update. Moment accumulators mirror
// the parameter shapes; one shared step counter.
class AdamState {
public:
    AdamState(const std::vector<Tensor*>& params, AdamConfig config = {}) : config_(config) {
        m_.reserve(params.size());
        v_.reserve(params.size());
        for (const Tensor* p : params) {
            m_.emplace_back(p->shape());
            v_.emplace_back(p->shape());
        }
    }

    const AdamConfig& config() const { return config_; }
    std::int64_t steps() const { return t_; }

    void step(const std::vector<Tensor*>& params, const std::vector<Tensor*>& grads) {
        if (params.size() != m_.size() || grads.size() != m_.size())
            throw ShapeError("adam: parameter list size mismatch");
        ++t_;
        const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
        const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
        for (std::size_t k = 0; k < params.size(); ++k) {
            Tensor& p = *params[k];
            const Tensor& g = *grads[k];
            if (p.shape() != m_[k].shape() || g.shape() != m_[k].shape())
                throw ShapeError("adam: tensor shape mismatch");
            Tensor& m = m_[k];
            Tensor& v = v_[k];
            for (std::size_t i = 0; i < p.size(); ++i) {
                m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g[i];
                v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g[i] * g[i];
                const double mhat = m[i] / bc1;
                const double vhat = v[i] / bc2;
                p[i] -= config_.lr * mhat / (std::sqrt(vhat) + config_.eps);
            }
        }
    }

private:
    AdamConfig config_;
    std::int64_t t_ = 0;
    std::vector<Tensor> m_;
    std::vector<Tensor> v_;
};

// Huber loss and its derivative w.r.t. the prediction: quadratic within
// delta, linear outside.
inline std::pair<double, double> huber_loss(double prediction, double target,
                                            double delta = 1.0) {
    const double e = prediction - target;
    if (std::abs(e) <= delta) return {0.5 * e * e, e};
    return {delta * (std::abs(e) - 0.5 * delta), e > 0.0 ? delta : -delta};
}

}  // namespace povgrid
