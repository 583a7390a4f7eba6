#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace jumpflow {

/// Dense scalar field on an M x N structured grid, row-major with x fastest.
class Field2D {
public:
    Field2D() = default;
    Field2D(int m, int n, double value = 0.0) : m_(m), n_(n), v_(static_cast<size_t>(m) * n, value) {}

    int m() const { return m_; }
    int n() const { return n_; }
    size_t size() const { return v_.size(); }

    double& operator()(int i, int j) { return v_[idx(i, j)]; }
    double operator()(int i, int j) const { return v_[idx(i, j)]; }
    double& operator[](size_t g) { return v_[g]; }
    double operator[](size_t g) const { return v_[g]; }

    size_t idx(int i, int j) const {
        assert(i >= 0 && i < m_ && j >= 0 && j < n_);
        return static_cast<size_t>(j) * m_ + i;
    }

    std::vector<double>& data() { return v_; }
    const std::vector<double>& data() const { return v_; }

    void fill(double value) { v_.assign(v_.size(), value); }

private:
    int m_ = 0, n_ = 0;
    std::vector<double> v_;
};

} // namespace jumpflow
