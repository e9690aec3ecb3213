// povgrid/layers.hpp - dense, valid-padding 2-D convolution, and ReLU layers
// with hand-written backward passes. Each layer caches its forward input and
// accumulates parameter gradients across samples until zero_grad().
#pragma once

#include <cmath>
#include <vector>

#include "povgrid/errors.hpp"
#include "povgrid/rng.hpp"
#include "povgrid/tensor.hpp"

namespace povgrid {

// He initialization: zero-mean normal with variance 2 / fan_in; zero biases.
inline void he_init(Tensor& weights, Tensor& biases, int fan_in, Rng& rng) {
    const double stddev = std::sqrt(2.0 / static_cast<double>(fan_in));
    for (std::size_t i = 0; i < weights.size(); ++i) weights[i] = stddev * rng.normal();
    biases.fill(0.0);
}

class Conv2d {
public:
    Tensor w;   // (out_ch, in_ch, k, k)
    Tensor b;   // (out_ch)
    Tensor gw;  // accumulated gradients, shapes mirror w / b
    Tensor gb;

    Conv2d(int in_ch, int out_ch, int kernel, Rng& rng)
        : w({out_ch, in_ch, kernel, kernel}), b({out_ch}), gw(w.shape()), gb(b.shape()),
          in_ch_(in_ch), out_ch_(out_ch), kernel_(kernel) {
        he_init(w, b, in_ch * kernel * kernel, rng);
    }

    // x: (in_ch, H, W) -> y: (out_ch, H-k+1, W-k+1), valid padding, stride 1.
    Tensor forward(const Tensor& x) {
        if (x.shape().size() != 3 || x.shape()[0] != in_ch_ || x.shape()[1] < kernel_ ||
            x.shape()[2] < kernel_)
            throw ShapeError("conv2d: input shape mismatch");
        x_ = x;
        has_input_ = true;
        const int oh = x.shape()[1] - kernel_ + 1;
        const int ow = x.shape()[2] - kernel_ + 1;
        Tensor y({out_ch_, oh, ow});
        for (int o = 0; o < out_ch_; ++o) {
            for (int i = 0; i < oh; ++i) {
                for (int j = 0; j < ow; ++j) {
                    double acc = b[o];
                    for (int c = 0; c < in_ch_; ++c)
                        for (int u = 0; u < kernel_; ++u)
                            for (int v = 0; v < kernel_; ++v)
                                acc += w[widx(o, c, u, v)] * x[x.at3(c, i + u, j + v)];
                    y[y.at3(o, i, j)] = acc;
                }
            }
        }
        return y;
    }

    // gy: gradient w.r.t. the forward output; returns gradient w.r.t. x.
    Tensor backward(const Tensor& gy) {
        if (!has_input_) throw StateError("conv2d: backward before forward");
        const int oh = x_.shape()[1] - kernel_ + 1;
        const int ow = x_.shape()[2] - kernel_ + 1;
        if (gy.shape().size() != 3 || gy.shape()[0] != out_ch_ || gy.shape()[1] != oh ||
            gy.shape()[2] != ow)
            throw ShapeError("conv2d: output gradient shape mismatch");
        Tensor gx(x_.shape());
        for (int o = 0; o < out_ch_; ++o) {
            for (int i = 0; i < oh; ++i) {
                for (int j = 0; j < ow; ++j) {
                    const double g = gy[gy.at3(o, i, j)];
                    gb[o] += g;
                    for (int c = 0; c < in_ch_; ++c) {
                        for (int u = 0; u < kernel_; ++u) {
                            for (int v = 0; v < kernel_; ++v) {
                                const std::size_t wi = widx(o, c, u, v);
                                gw[wi] += g * x_[x_.at3(c, i + u, j + v)];
                                gx[gx.at3(c, i + u, j + v)] += g * w[wi];
                            }
                        }
                    }
                }
            }
        }
        return gx;
    }

    void zero_grad() {
        gw.fill(0.0);
        gb.fill(0.0);
    }

private:
    std::size_t widx(int o, int c, int u, int v) const {
        return ((static_cast<std::size_t>(o) * in_ch_ + c) * kernel_ + u) * kernel_ + v;
    }

    Tensor x_;
    bool has_input_ = false;
    int in_ch_;
    int out_ch_;
    int kernel_;
};

class Dense {
public:
    Tensor w;   // (out, in)
    Tensor b;   // (out)
    Tensor gw;
    Tensor gb;

    Dense(int in, int out, Rng& rng)
        : w({out, in}), b({out}), gw(w.shape()), gb(b.shape()), in_(in), out_(out) {
        he_init(w, b, in, rng);
    }

    // Treats the input as flat; x.size() must equal `in`.
    Tensor forward(const Tensor& x) {
        if (x.size() != static_cast<std::size_t>(in_))
            throw ShapeError("dense: input size mismatch");
        x_ = x;
        has_input_ = true;
        Tensor y({out_});
        for (int o = 0; o < out_; ++o) {
            double acc = b[o];
            const double* row = w.data() + static_cast<std::size_t>(o) * in_;
            for (int i = 0; i < in_; ++i) acc += row[i] * x[i];
            y[o] = acc;
        }
        return y;
    }

    Tensor backward(const Tensor& gy) {
        if (!has_input_) throw StateError("dense: backward before forward");
        if (gy.size() != static_cast<std::size_t>(out_))
            throw ShapeError("dense: output gradient size mismatch");
        Tensor gx(x_.shape());
        for (int o = 0; o < out_; ++o) {
            const double g = gy[o];
            gb[o] += g;
            const std::size_t row = static_cast<std::size_t>(o) * in_;
            for (int i = 0; i < in_; ++i) {
                gw[row + i] += g * x_[i];
                gx[i] += g * w[row + i];
            }
        }
        return gx;
    }

    void zero_grad() {
        gw.fill(0.0);
        gb.fill(0.0);
    }

private:
    Tensor x_;
    bool has_input_ = false;
    int in_;
    int out_;
};

class Relu {
public:
    Tensor forward(const Tensor& x) {
        x_ = x;
        has_input_ = true;
        Tensor y(x.shape());
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
        return y;
    }

    Tensor backward(const Tensor& gy) {
        if (!has_input_) throw StateError("relu: backward before forward");
        if (gy.size() != x_.size()) throw ShapeError("relu: gradient size mismatch");
        Tensor gx(x_.shape());
        for (std::size_t i = 0; i < x_.size(); ++i) gx[i] = x_[i] > 0.0 ? gy[i] : 0.0;
        return gx;
    }

private:
    Tensor x_;
    bool has_input_ = false;
};

}  // namespace povgrid
