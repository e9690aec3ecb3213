// povgrid/qnet.hpp - action-value networks: a single-view net over the 3x3
// window and a dual-branch net that adds a 5x5 context window.
#pragma once

#include <variant>
#include <vector>

#include "povgrid/layers.hpp"
#include "povgrid/world.hpp"

namespace povgrid {

inline constexpr int kLocalWindow = 3;
inline constexpr int kWideWindow = 5;
inline constexpr int kNumActions = 4;

enum class QVariant { Single, Double };

inline const char* to_string(QVariant v) {
    return v == QVariant::Single ? "single" : "double";
}

// Network input: the encoded local window, plus the wide window for the
// dual-branch variant (left empty for the single variant).
struct AgentInput {
    Tensor local;
    Tensor wide;
};

// conv 3x3 (C -> 32) -> ReLU -> dense 32 -> 64 -> ReLU -> dense 64 -> 4.
class QNetworkSingle {
public:
    static constexpr int kConvFeatures = 32;
    static constexpr int kHidden = 64;

    QNetworkSingle(int channels, Rng& rng)
        : channels_(channels), conv_(channels, kConvFeatures, 3, rng),
          fc1_(kConvFeatures, kHidden, rng), fc2_(kHidden, kNumActions, rng) {}

    int channels() const { return channels_; }

    Tensor forward(const AgentInput& in) {
        if (in.local.shape() != std::vector<int>{channels_, kLocalWindow, kLocalWindow})
            throw ShapeError("qnet-single: local window shape mismatch");
        Tensor h = r1_.forward(conv_.forward(in.local));  // (32, 1, 1)
        Tensor flat({kConvFeatures});
        for (int i = 0; i < kConvFeatures; ++i) flat[i] = h[i];
        return fc2_.forward(r2_.forward(fc1_.forward(flat)));
    }

    void backward(const Tensor& gout) {
        Tensor g = fc1_.backward(r2_.backward(fc2_.backward(gout)));
        Tensor g3({kConvFeatures, 1, 1});
        for (int i = 0; i < kConvFeatures; ++i) g3[i] = g[i];
        conv_.backward(r1_.backward(g3));
    }

    std::vector<Tensor*> parameters() {
        return {&conv_.w, &conv_.b, &fc1_.w, &fc1_.b, &fc2_.w, &fc2_.b};
    }
    std::vector<Tensor*> gradients() {
        return {&conv_.gw, &conv_.gb, &fc1_.gw, &fc1_.gb, &fc2_.gw, &fc2_.gb};
    }
    void zero_grad() {
        conv_.zero_grad();
        fc1_.zero_grad();
        fc2_.zero_grad();
    }

private:
    int channels_;
    Conv2d conv_;
    Dense fc1_;
    Dense fc2_;
    Relu r1_, r2_;
};

// Local branch: conv 3x3 (C -> 32) on the 3x3 window. Wide branch: two
// stacked 3x3 convs (C -> 16 -> 32) on the 5x5 window. Concatenated 64
// features -> dense 64 -> 64 -> ReLU -> dense 64 -> 4.
class QNetworkDouble {
public:
    static constexpr int kLocalFeatures = 32;
    static constexpr int kWideMid = 16;
    static constexpr int kWideFeatures = 32;
    static constexpr int kConcat = kLocalFeatures + kWideFeatures;
    static constexpr int kHidden = 64;

    QNetworkDouble(int channels, Rng& rng)
        : channels_(channels), conv_local_(channels, kLocalFeatures, 3, rng),
          conv_wide1_(channels, kWideMid, 3, rng), conv_wide2_(kWideMid, kWideFeatures, 3, rng),
          fc1_(kConcat, kHidden, rng), fc2_(kHidden, kNumActions, rng) {}

    int channels() const { return channels_; }

    Tensor forward(const AgentInput& in) {
        if (in.local.shape() != std::vector<int>{channels_, kLocalWindow, kLocalWindow})
            throw ShapeError("qnet-double: local window shape mismatch");
        if (in.wide.shape() != std::vector<int>{channels_, kWideWindow, kWideWindow})
            throw ShapeError("qnet-double: wide window shape mismatch");
        Tensor a = rl_.forward(conv_local_.forward(in.local));                      // (32, 1, 1)
        Tensor b = rw2_.forward(conv_wide2_.forward(rw1_.forward(conv_wide1_.forward(in.wide))));
        Tensor cat({kConcat});
        for (int i = 0; i < kLocalFeatures; ++i) cat[i] = a[i];
        for (int i = 0; i < kWideFeatures; ++i) cat[kLocalFeatures + i] = b[i];
        return fc2_.forward(rh_.forward(fc1_.forward(cat)));
    }

    void backward(const Tensor& gout) {
        Tensor gcat = fc1_.backward(rh_.backward(fc2_.backward(gout)));
        Tensor ga({kLocalFeatures, 1, 1});
        Tensor gb({kWideFeatures, 1, 1});
        for (int i = 0; i < kLocalFeatures; ++i) ga[i] = gcat[i];
        for (int i = 0; i < kWideFeatures; ++i) gb[i] = gcat[kLocalFeatures + i];
        conv_local_.backward(rl_.backward(ga));
        conv_wide1_.backward(rw1_.backward(conv_wide2_.backward(rw2_.backward(gb))));
    }

    std::vector<Tensor*> parameters() {
        return {&conv_local_.w, &conv_local_.b, &conv_wide1_.w, &conv_wide1_.b,
                &conv_wide2_.w, &conv_wide2_.b, &fc1_.w,        &fc1_.b,
                &fc2_.w,        &fc2_.b};
    }
    std::vector<Tensor*> gradients() {
        return {&conv_local_.gw, &conv_local_.gb, &conv_wide1_.gw, &conv_wide1_.gb,
                &conv_wide2_.gw, &conv_wide2_.gb, &fc1_.gw,        &fc1_.gb,
                &fc2_.gw,        &fc2_.gb};
    }
    void zero_grad() {
        conv_local_.zero_grad();
        conv_wide1_.zero_grad();
        conv_wide2_.zero_grad();
        fc1_.zero_grad();
        fc2_.zero_grad();
    }

private:
    int channels_;
    Conv2d conv_local_;
    Conv2d conv_wide1_;
    Conv2d conv_wide2_;
    Dense fc1_;
    Dense fc2_;
    Relu rl_, rw1_, rw2_, rh_;
};

using QNetwork = std::variant<QNetworkSingle, QNetworkDouble>;

inline QNetwork make_qnetwork(QVariant variant, int channels, Rng& rng) {
    if (variant == QVariant::Single) return QNetwork{QNetworkSingle(channels, rng)};
    return QNetwork{QNetworkDouble(channels, rng)};
}

inline QVariant variant_of(const QNetwork& net) {
    return std::holds_alternative<QNetworkSingle>(net) ? QVariant::Single : QVariant::Double;
}

inline Tensor q_forward(QNetwork& net, const AgentInput& in) {
    return std::visit([&](auto& n) { return n.forward(in); }, net);
}

inline void q_backward(QNetwork& net, const Tensor& gout) {
    std::visit([&](auto& n) { n.backward(gout); }, net);
}

inline std::vector<Tensor*> q_parameters(QNetwork& net) {
    return std::visit([](auto& n) { return n.parameters(); }, net);
}

inline std::vector<Tensor*> q_gradients(QNetwork& net) {
    return std::visit([](auto& n) { return n.gradients(); }, net);
}

inline void q_zero_grad(QNetwork& net) {
    std::visit([](auto& n) { n.zero_grad(); }, net);
}

inline int q_channels(const QNetwork& net) {
    return std::visit([](const auto& n) { return n.channels(); }, net);
}

}  // namespace povgrid
