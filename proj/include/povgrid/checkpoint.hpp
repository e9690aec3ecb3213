// povgrid/checkpoint.hpp - versioned binary weight checkpoints.
//
// Layout (all integers little-endian):
//   magic   "PGQN" (4 bytes)
//   version u32 (currently 1)
//   variant u8 (0 = single, 1 = double), include_mask u8, t_max u8, pad u8
//   channels u32
//   n_tensors u32
//   per tensor: ndim u32, dims u32 each, count u64, IEEE-754 doubles as u64
// Written and read byte-exactly, so identical training runs produce
// identical files.
#pragma once

#include <bit>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "povgrid/encode.hpp"
#include "povgrid/errors.hpp"
#include "povgrid/qnet.hpp"

namespace povgrid {

namespace detail {

inline void put_u32(std::ostream& os, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    os.write(b, 4);
}

inline void put_u64(std::ostream& os, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    os.write(b, 8);
}

inline std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

inline std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

}  // namespace detail

struct Checkpoint {
    QVariant variant;
    bool include_mask;
    int t_max;
    QNetwork net;
};

inline constexpr char kCheckpointMagic[4] = {'P', 'G', 'Q', 'N'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

inline void save_checkpoint(const std::string& path, QNetwork& net, bool include_mask,
                            int t_max) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("checkpoint: cannot open for writing: " + path);
    os.write(kCheckpointMagic, 4);
    detail::put_u32(os, kCheckpointVersion);
    const char meta[4] = {static_cast<char>(variant_of(net) == QVariant::Single ? 0 : 1),
                          static_cast<char>(include_mask ? 1 : 0), static_cast<char>(t_max), 0};
    os.write(meta, 4);
    detail::put_u32(os, static_cast<std::uint32_t>(q_channels(net)));
    const auto params = q_parameters(net);
    detail::put_u32(os, static_cast<std::uint32_t>(params.size()));
    for (const Tensor* p : params) {
        detail::put_u32(os, static_cast<std::uint32_t>(p->shape().size()));
        for (int d : p->shape()) detail::put_u32(os, static_cast<std::uint32_t>(d));
        detail::put_u64(os, p->size());
        for (std::size_t i = 0; i < p->size(); ++i)
            detail::put_u64(os, std::bit_cast<std::uint64_t>((*p)[i]));
    }
    if (!os) throw IoError("checkpoint: write failed: " + path);
}

inline Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("checkpoint: cannot open: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::string(magic, 4) != std::string(kCheckpointMagic, 4))
        throw IoError("checkpoint: bad magic in " + path);
    if (detail::get_u32(is) != kCheckpointVersion)
        throw IoError("checkpoint: unsupported version in " + path);
    char meta[4];
    is.read(meta, 4);
    const QVariant variant = meta[0] == 0 ? QVariant::Single : QVariant::Double;
    const bool include_mask = meta[1] != 0;
    const int t_max = meta[2];
    const std::uint32_t channels = detail::get_u32(is);
    if (channels != static_cast<std::uint32_t>(encoded_channels(t_max, include_mask)))
        throw IoError("checkpoint: channel count inconsistent with header in " + path);

    Rng dummy(0);  // weights are overwritten below
    Checkpoint ck{variant, include_mask, t_max,
                  make_qnetwork(variant, static_cast<int>(channels), dummy)};
    const auto params = q_parameters(ck.net);
    if (detail::get_u32(is) != params.size())
        throw IoError("checkpoint: tensor count mismatch in " + path);
    for (Tensor* p : params) {
        const std::uint32_t ndim = detail::get_u32(is);
        std::vector<int> dims(ndim);
        for (std::uint32_t d = 0; d < ndim; ++d) dims[d] = static_cast<int>(detail::get_u32(is));
        if (dims != p->shape()) throw IoError("checkpoint: tensor shape mismatch in " + path);
        const std::uint64_t count = detail::get_u64(is);
        if (count != p->size()) throw IoError("checkpoint: tensor size mismatch in " + path);
        for (std::uint64_t i = 0; i < count; ++i)
            (*p)[i] = std::bit_cast<double>(detail::get_u64(is));
    }
    if (!is) throw IoError("checkpoint: truncated file: " + path);
    return ck;
}

}  // namespace povgrid
