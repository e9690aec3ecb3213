// povgrid/encode.hpp - encodes a belief-centered window into the multi-channel
// tensor the Q-networks consume.
//
// Channel layout (in order):
//   0 .. t_max      per-count belief P(count = k)
//   t_max + 1       entropy, normalized by log2(t_max + 1)
//   [+9]            POV mask channels, 1 = that POV still UNOBSERVED
//                   (omitted when the mask is ablated)
//   last            out-of-bounds indicator
// Out-of-bounds pixels are all-zero except the OOB channel.
#pragma once

#include <cmath>

#include "povgrid/belief.hpp"
#include "povgrid/qnet.hpp"
#include "povgrid/tensor.hpp"

namespace povgrid {

inline int encoded_channels(int t_max, bool include_mask) {
    return (t_max + 1) + 1 + (include_mask ? kNumPovs : 0) + 1;
}

inline Tensor encode_state(const BeliefState& belief, Vec2i pos, int window_size,
                           bool include_mask) {
    if (window_size < 1 || window_size % 2 == 0)
        throw DomainError("encode_state: window size must be odd and positive");
    const int t_max = belief.t_max();
    const int channels = encoded_channels(t_max, include_mask);
    const int entropy_ch = t_max + 1;
    const int mask_ch = t_max + 2;           // first mask channel, if present
    const int oob_ch = channels - 1;
    const double entropy_scale = 1.0 / std::log2(static_cast<double>(t_max) + 1.0);
    const int half = window_size / 2;

    Tensor out({channels, window_size, window_size});
    for (int wy = 0; wy < window_size; ++wy) {
        for (int wx = 0; wx < window_size; ++wx) {
            const Vec2i cell{pos.x + wx - half, pos.y + wy - half};
            if (!belief.cells().in_bounds(cell)) {
                out[out.at3(oob_ch, wy, wx)] = 1.0;
                continue;
            }
            const CellBelief& cb = belief.cell(cell);
            for (int k = 0; k <= t_max; ++k) out[out.at3(k, wy, wx)] = cb.probs[k];
            out[out.at3(entropy_ch, wy, wx)] = belief.entropy_map()(cell) * entropy_scale;
            if (include_mask) {
                for (int pov = 0; pov < kNumPovs; ++pov)
                    out[out.at3(mask_ch + pov, wy, wx)] =
                        belief.mask().test(cell, pov) ? 0.0 : 1.0;
            }
        }
    }
    return out;
}

// Windows required by a network variant, encoded with one channel layout.
inline AgentInput encode_input(const BeliefState& belief, Vec2i pos, QVariant variant,
                               bool include_mask) {
    AgentInput in;
    in.local = encode_state(belief, pos, kLocalWindow, include_mask);
    if (variant == QVariant::Double)
        in.wide = encode_state(belief, pos, kWideWindow, include_mask);
    return in;
}

}  // namespace povgrid
