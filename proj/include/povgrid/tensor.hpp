// povgrid/tensor.hpp - minimal dense tensor of 64-bit floats, row-major.
#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

#include "povgrid/errors.hpp"

namespace povgrid {

class Tensor {
public:
    Tensor() = default;

    explicit Tensor(std::vector<int> shape) : shape_(std::move(shape)) {
        std::size_t n = 1;
        for (int d : shape_) {
            if (d <= 0) throw ShapeError("tensor: dimensions must be positive");
            n *= static_cast<std::size_t>(d);
        }
        data_.assign(n, 0.0);
    }

    const std::vector<int>& shape() const { return shape_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    // Flat index for a (channel, row, col) triple in a rank-3 tensor.
    std::size_t at3(int c, int h, int w) const {
        return (static_cast<std::size_t>(c) * shape_[1] + h) * shape_[2] + w;
    }

    void fill(double v) { data_.assign(data_.size(), v); }

    friend bool operator==(const Tensor& a, const Tensor& b) {
        return a.shape_ == b.shape_ && a.data_ == b.data_;
    }

private:
    std::vector<int> shape_;
    std::vector<double> data_;
};

}  // namespace povgrid
