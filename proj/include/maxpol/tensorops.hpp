#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "maxpol/diffmatrix.hpp"
#include "maxpol/errors.hpp"

namespace maxpol {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense 2D array, row-major. Rows follow y, columns follow x.
class Grid {
public:
    Grid() = default;
    Grid(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Grid(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_) throw DimensionMismatch("Grid: data length does not match dims");
    }

    template <typename F>
    static Grid generate(std::size_t rows, std::size_t cols, F&& f) {
        Grid g(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) g(i, j) = f(i, j);
        return g;
    }

    static Grid from_eigen(const Eigen::Ref<const Eigen::MatrixXd>& m) {
        Grid g(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
        g.matrix() = m;
        return g;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool same_shape(const Grid& o) const noexcept { return rows_ == o.rows_ && cols_ == o.cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<double>& data() noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

    Eigen::Map<RowMajorMatrix> matrix() {
        return {data_.data(), static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_)};
    }
    Eigen::Map<const RowMajorMatrix> matrix() const {
        return {data_.data(), static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_)};
    }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    double mean() const {
        return data_.empty() ? 0.0 : std::accumulate(data_.begin(), data_.end(), 0.0) / static_cast<double>(size());
    }

    double frobenius() const {
        double s = 0.0;
        for (double v : data_) s += v * v;
        return std::sqrt(s);
    }

    Grid& operator+=(double c) {
        for (double& v : data_) v += c;
        return *this;
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// m-dimensional array stored in mode-1 order (first index fastest).
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> dims, double fill = 0.0)
        : dims_(std::move(dims)), data_(count(dims_), fill) {}
    Tensor(std::vector<std::size_t> dims, std::vector<double> data) : dims_(std::move(dims)), data_(std::move(data)) {
        if (data_.size() != count(dims_)) throw DimensionMismatch("Tensor: data length does not match dims");
    }

    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    std::size_t ndims() const noexcept { return dims_.size(); }
    std::vector<double>& data() noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

    std::size_t stride(std::size_t mode) const noexcept {
        std::size_t s = 1;
        for (std::size_t k = 0; k < mode; ++k) s *= dims_[k];
        return s;
    }

    std::size_t linear_index(const std::vector<std::size_t>& idx) const {
        std::size_t off = 0;
        for (std::size_t k = ndims(); k-- > 0;) off = off * dims_[k] + idx[k];
        return off;
    }

    double& at(const std::vector<std::size_t>& idx) { return data_[linear_index(idx)]; }
    double at(const std::vector<std::size_t>& idx) const { return data_[linear_index(idx)]; }

    friend bool operator==(const Tensor&, const Tensor&) = default;

private:
    static std::size_t count(const std::vector<std::size_t>& d) {
        return std::accumulate(d.begin(), d.end(), std::size_t{1}, std::multiplies<>());
    }

    std::vector<std::size_t> dims_;
    std::vector<double> data_;
};

/// d^n X / dx^n = X D^T (derivative along each row).
inline Grid partial_x(const Grid& X, const DerivMatrix& D) {
    if (D.size() != X.cols())
        throw DimensionMismatch("partial_x: matrix size " + std::to_string(D.size()) + " vs cols " +
                                std::to_string(X.cols()));
    Grid out(X.rows(), X.cols());
    for (std::size_t i = 0; i < X.rows(); ++i)
        for (const auto& t : D.entries()) out(i, t.row) += t.value * X(i, t.col);
    return out;
}

/// d^n X / dy^n = D X (derivative along each column).
inline Grid partial_y(const Grid& X, const DerivMatrix& D) {
    if (D.size() != X.rows())
        throw DimensionMismatch("partial_y: matrix size " + std::to_string(D.size()) + " vs rows " +
                                std::to_string(X.rows()));
    Grid out(X.rows(), X.cols());
    const std::size_t C = X.cols();
    for (const auto& t : D.entries()) {
        const double* src = X.data().data() + t.col * C;
        double* dst = out.data().data() + t.row * C;
        for (std::size_t j = 0; j < C; ++j) dst[j] += t.value * src[j];
    }
    return out;
}

/// Dy X Dx^T.
inline Grid mixed_partial(const Grid& X, const DerivMatrix& Dy, const DerivMatrix& Dx) {
    return partial_y(partial_x(X, Dx), Dy);
}

/// Applies D along one mode (0-based) of a tensor; equivalent to
/// (I (x) ... (x) D (x) ... (x) I) vec(T) in mode-1 vectorization.
inline Tensor mode_apply(const Tensor& T, std::size_t mode, const DerivMatrix& D) {
    if (mode >= T.ndims())
        throw InvalidMode("mode " + std::to_string(mode) + " of a " + std::to_string(T.ndims()) + "-d tensor");
    if (D.size() != T.dims()[mode])
        throw DimensionMismatch("mode_apply: matrix size " + std::to_string(D.size()) + " vs dim " +
                                std::to_string(T.dims()[mode]));
    const std::size_t inner = T.stride(mode);
    const std::size_t len = T.dims()[mode];
    const std::size_t outer = T.data().size() / (inner * len);
    Tensor out(T.dims());
    const auto& src = T.data();
    auto& dst = out.data();
    for (std::size_t o = 0; o < outer; ++o) {
        const std::size_t base = o * inner * len;
        for (const auto& t : D.entries()) {
            const double* s = src.data() + base + t.col * inner;
            double* d = dst.data() + base + t.row * inner;
            for (std::size_t i = 0; i < inner; ++i) d[i] += t.value * s[i];
        }
    }
    return out;
}

}  // namespace maxpol
