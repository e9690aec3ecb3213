// povgrid/grid.hpp - 2-D coordinates and a row-major grid container.
#pragma once

#include <cstddef>
#include <vector>

namespace povgrid {

// x grows rightward, y grows downward throughout the project.
struct Vec2i {
    int x = 0;
    int y = 0;

    friend bool operator==(Vec2i a, Vec2i b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(Vec2i a, Vec2i b) { return !(a == b); }
};

template <typename T>
class Grid {
public:
    Grid() = default;
    Grid(int width, int height, T value = T{})
        : width_(width), height_(height),
          cells_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), value) {}

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return cells_.size(); }

    bool in_bounds(int x, int y) const { return x >= 0 && x < width_ && y >= 0 && y < height_; }
    bool in_bounds(Vec2i p) const { return in_bounds(p.x, p.y); }

    T& operator()(int x, int y) { return cells_[static_cast<std::size_t>(y) * width_ + x]; }
    const T& operator()(int x, int y) const { return cells_[static_cast<std::size_t>(y) * width_ + x]; }
    T& operator()(Vec2i p) { return (*this)(p.x, p.y); }
    const T& operator()(Vec2i p) const { return (*this)(p.x, p.y); }

    auto begin() { return cells_.begin(); }
    auto end() { return cells_.end(); }
    auto begin() const { return cells_.begin(); }
    auto end() const { return cells_.end(); }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.cells_ == b.cells_;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> cells_;
};

}  // namespace povgrid
