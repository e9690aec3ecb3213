// povgrid/world.hpp - ground-truth environment: world generation, POV
// geometry, agent movement, and the noiseless observation model.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "povgrid/errors.hpp"
#include "povgrid/grid.hpp"
#include "povgrid/rng.hpp"

namespace povgrid {

inline constexpr int kNumPovs = 9;
inline constexpr int kCenterPov = 4;
inline constexpr int kSenseWindow = 3;

struct WorldConfig {
    int width = 20;
    int height = 20;
    int t_max = 3;                                          // max targets per cell
    double p_vis = 0.5;                                     // per-(target, POV) visibility prob
    std::vector<double> count_prior = {0.5, 0.3, 0.15, 0.05};  // P(count = k), k = 0..t_max
    int max_steps = 1000;

    void validate() const {
        if (width < 3 || height < 3)
            throw ConfigError("world: width and height must be >= 3");
        if (t_max < 1)
            throw ConfigError("world: t_max must be >= 1");
        if (!(p_vis > 0.0) || p_vis > 1.0)
            throw ConfigError("world: p_vis must be in (0, 1]");
        if (max_steps < 0)
            throw ConfigError("world: max_steps must be >= 0");
        if (count_prior.size() != static_cast<std::size_t>(t_max) + 1)
            throw ConfigError("world: count_prior must have t_max + 1 entries");
        double sum = 0.0;
        for (double p : count_prior) {
            if (p < 0.0) throw ConfigError("world: count_prior entries must be >= 0");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw ConfigError("world: count_prior must sum to 1");
    }
};

// Canonical order; ties in argmax-style selections break toward lower index.
enum class Action : int { Up = 0, Down = 1, Left = 2, Right = 3 };

inline constexpr std::array<Action, 4> kAllActions = {Action::Up, Action::Down, Action::Left,
                                                      Action::Right};

inline const char* to_string(Action a) {
    switch (a) {
        case Action::Up: return "up";
        case Action::Down: return "down";
        case Action::Left: return "left";
        case Action::Right: return "right";
    }
    return "?";
}

inline Vec2i action_delta(Action a) {
    switch (a) {
        case Action::Up: return {0, -1};
        case Action::Down: return {0, 1};
        case Action::Left: return {-1, 0};
        case Action::Right: return {1, 0};
    }
    return {0, 0};
}

// POV index of a viewer position relative to a cell:
//   index = 3 * (dy + 1) + (dx + 1), (dx, dy) = viewer - cell in {-1, 0, 1}^2.
// Index 4 is the cell itself.
inline int pov_of(Vec2i cell, Vec2i viewer) {
    const int dx = viewer.x - cell.x;
    const int dy = viewer.y - cell.y;
    if (dx < -1 || dx > 1 || dy < -1 || dy > 1)
        throw DomainError("pov_of: viewer is not within the cell's 3x3 neighborhood");
    return 3 * (dy + 1) + (dx + 1);
}

// Inverse of pov_of: offset (viewer - cell) for a POV index.
inline Vec2i pov_offset(int pov) {
    if (pov < 0 || pov >= kNumPovs) throw DomainError("pov_offset: index out of range");
    return {pov % 3 - 1, pov / 3 - 1};
}

// One cell of ground truth: target count plus a 9-bit visibility mask per
// target (bit p set <=> that target is visible from POV p).
struct CellTruth {
    int count = 0;
    std::vector<std::uint16_t> visibility;  // size == count

    friend bool operator==(const CellTruth& a, const CellTruth& b) {
        return a.count == b.count && a.visibility == b.visibility;
    }
};

inline int visible_count(const CellTruth& cell, int pov) {
    int n = 0;
    for (std::uint16_t mask : cell.visibility) n += (mask >> pov) & 1u;
    return n;
}

struct Observation {
    Vec2i cell;
    int pov = kCenterPov;
    int n = 0;  // exact count of targets visible from `pov`
};

class GridWorld {
public:
    GridWorld(WorldConfig config, Grid<CellTruth> cells, Vec2i agent_pos)
        : config_(std::move(config)), cells_(std::move(cells)), agent_pos_(agent_pos) {}

    const WorldConfig& config() const { return config_; }
    const Grid<CellTruth>& cells() const { return cells_; }
    Vec2i agent_pos() const { return agent_pos_; }
    void set_agent_pos(Vec2i p) {
        if (!cells_.in_bounds(p)) throw DomainError("set_agent_pos: out of bounds");
        agent_pos_ = p;
    }

private:
    WorldConfig config_;
    Grid<CellTruth> cells_;  // immutable after generation
    Vec2i agent_pos_;
};

// Samples a world: per-cell count i.i.d. from count_prior, per-(target, POV)
// visibility bit i.i.d. Bernoulli(p_vis). Pure function of (config, seed).
inline GridWorld generate_world(const WorldConfig& config, std::uint64_t seed) {
    config.validate();
    Rng rng(seed);
    Grid<CellTruth> cells(config.width, config.height);
    for (int y = 0; y < config.height; ++y) {
        for (int x = 0; x < config.width; ++x) {
            CellTruth& cell = cells(x, y);
            cell.count = rng.categorical(config.count_prior);
            cell.visibility.resize(cell.count);
            for (int t = 0; t < cell.count; ++t) {
                std::uint16_t mask = 0;
                for (int pov = 0; pov < kNumPovs; ++pov) {
                    if (rng.bernoulli(config.p_vis)) mask |= static_cast<std::uint16_t>(1u << pov);
                }
                cell.visibility[t] = mask;
            }
        }
    }
    return GridWorld(config, std::move(cells), {config.width / 2, config.height / 2});
}

// Actions whose successor cell stays in bounds, in canonical order.
inline std::vector<Action> admissible_actions(Vec2i pos, const WorldConfig& config) {
    std::vector<Action> out;
    out.reserve(4);
    for (Action a : kAllActions) {
        const Vec2i d = action_delta(a);
        const int nx = pos.x + d.x;
        const int ny = pos.y + d.y;
        if (nx >= 0 && nx < config.width && ny >= 0 && ny < config.height) out.push_back(a);
    }
    return out;
}

inline Vec2i apply_action(Vec2i pos, Action action, const WorldConfig& config) {
    const Vec2i d = action_delta(action);
    const Vec2i next{pos.x + d.x, pos.y + d.y};
    if (next.x < 0 || next.x >= config.width || next.y < 0 || next.y >= config.height) {
        std::ostringstream msg;
        msg << "apply_action: " << to_string(action) << " from (" << pos.x << ", " << pos.y
            << ") leaves the grid";
        throw MovementError(msg.str());
    }
    return next;
}

// One observation per in-bounds cell of the 3x3 block centered at pos, each
// viewed from the POV the agent occupies relative to that cell. Row-major
// window order; deterministic given the world.
inline std::vector<Observation> sense(const GridWorld& world, Vec2i pos) {
    if (!world.cells().in_bounds(pos)) throw DomainError("sense: position out of bounds");
    std::vector<Observation> out;
    out.reserve(kNumPovs);
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            const Vec2i cell{pos.x + dx, pos.y + dy};
            if (!world.cells().in_bounds(cell)) continue;
            const int pov = pov_of(cell, pos);
            out.push_back({cell, pov, visible_count(world.cells()(cell), pov)});
        }
    }
    return out;
}

inline Grid<int> true_target_map(const GridWorld& world) {
    Grid<int> out(world.config().width, world.config().height);
    for (int y = 0; y < world.config().height; ++y)
        for (int x = 0; x < world.config().width; ++x) out(x, y) = world.cells()(x, y).count;
    return out;
}

// Debug dump: one line per cell with the count and per-target 9-bit masks.
inline std::string dump_world(const GridWorld& world) {
    std::ostringstream os;
    for (int y = 0; y < world.config().height; ++y) {
        for (int x = 0; x < world.config().width; ++x) {
            const CellTruth& cell = world.cells()(x, y);
            os << x << "," << y << " count=" << cell.count;
            for (std::uint16_t mask : cell.visibility) {
                os << " ";
                for (int pov = kNumPovs - 1; pov >= 0; --pov) os << ((mask >> pov) & 1u);
            }
            os << "\n";
        }
    }
    return os.str();
}

}  // namespace povgrid
