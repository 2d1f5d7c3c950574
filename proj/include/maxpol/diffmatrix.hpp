#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "maxpol/errors.hpp"
#include "maxpol/kernels.hpp"

namespace maxpol {

enum class MatrixScheme { centralized, staggered_forward, staggered_backward };

inline std::string_view to_string(MatrixScheme s) {
    switch (s) {
        case MatrixScheme::centralized: return "centralized";
        case MatrixScheme::staggered_forward: return "staggered_forward";
        case MatrixScheme::staggered_backward: return "staggered_backward";
    }
    return "?";
}

inline MatrixScheme parse_matrix_scheme(std::string_view s) {
    if (s == "centralized") return MatrixScheme::centralized;
    if (s == "staggered_forward" || s == "forward") return MatrixScheme::staggered_forward;
    if (s == "staggered_backward" || s == "backward") return MatrixScheme::staggered_backward;
    throw InvalidScheme("unknown matrix scheme '" + std::string(s) + "'");
}

inline Scheme kernel_scheme(MatrixScheme s) {
    return s == MatrixScheme::centralized ? Scheme::centralized : Scheme::staggered;
}

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;

    friend bool operator==(const Triplet&, const Triplet&) = default;
};

/// Exact kernel behind one matrix row, anchored at its first column.
struct RowStencil {
    std::size_t first_col;
    Kernel kernel;
};

/// Square n-th order derivative operator with boundary blocks built from
/// side-shifted kernels. Entries are kept as (row, col)-sorted triplets.
class DerivMatrix {
public:
    DerivMatrix(MatrixScheme scheme, int n, int l, std::size_t N, int P,
                std::vector<Triplet> entries, std::vector<RowStencil> rows)
        : scheme_(scheme), n_(n), l_(l), N_(N), P_(P), entries_(std::move(entries)), rows_(std::move(rows)) {}

    MatrixScheme scheme() const noexcept { return scheme_; }
    int order() const noexcept { return n_; }
    int half_length() const noexcept { return l_; }
    std::size_t size() const noexcept { return N_; }
    int accuracy() const noexcept { return P_; }

    std::span<const Triplet> entries() const noexcept { return entries_; }
    const std::vector<RowStencil>& row_stencils() const noexcept { return rows_; }

    /// Position (in sample units) at which row j estimates the derivative.
    double evaluation_node(std::size_t j) const noexcept {
        const double x = static_cast<double>(j);
        switch (scheme_) {
            case MatrixScheme::staggered_forward: return x + 0.5;
            case MatrixScheme::staggered_backward: return x - 0.5;
            default: return x;
        }
    }

    Eigen::MatrixXd dense() const {
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(N_), static_cast<Eigen::Index>(N_));
        for (const auto& t : entries_)
            M(static_cast<Eigen::Index>(t.row), static_cast<Eigen::Index>(t.col)) = t.value;
        return M;
    }

    friend bool operator==(const DerivMatrix& a, const DerivMatrix& b) {
        return a.scheme_ == b.scheme_ && a.n_ == b.n_ && a.l_ == b.l_ && a.N_ == b.N_ && a.P_ == b.P_ &&
               a.entries_ == b.entries_;
    }

private:
    MatrixScheme scheme_;
    int n_;
    int l_;
    std::size_t N_;
    int P_;
    std::vector<Triplet> entries_;
    std::vector<RowStencil> rows_;
};

namespace detail {

inline DerivMatrix assemble(MatrixScheme scheme, int n, int l, std::size_t N, int P,
                            std::vector<RowStencil> rows) {
    std::vector<Triplet> entries;
    entries.reserve(rows.size() * rows.front().kernel.size());
    for (std::size_t j = 0; j < rows.size(); ++j) {
        const auto& r = rows[j];
        for (std::size_t k = 0; k < r.kernel.size(); ++k)
            if (!r.kernel.coeffs[k].is_zero())
                entries.push_back({j, r.first_col + k, r.kernel.coeffs_f64[k]});
    }
    return DerivMatrix(scheme, n, l, N, P, std::move(entries), std::move(rows));
}

}  // namespace detail

/// Reverses the staggered direction: returns (-1)^n J D J with J the
/// anti-identity. For odd n this is the usual -J D J; the sign keeps
/// even-order rows differentiating instead of negating. Applying it twice
/// restores the input exactly.
inline DerivMatrix flip_direction(const DerivMatrix& D) {
    if (D.scheme() == MatrixScheme::centralized)
        throw InvalidScheme("flip_direction requires a staggered matrix");
    const std::size_t N = D.size();
    const bool odd = D.order() % 2 != 0;
    std::vector<RowStencil> rows;
    rows.reserve(N);
    for (std::size_t i = 0; i < N; ++i) {
        const RowStencil& src = D.row_stencils()[N - 1 - i];
        const std::size_t T = src.kernel.size();
        Kernel k = src.kernel;
        for (std::size_t t = 0; t < T; ++t) {
            const std::size_t s = T - 1 - t;
            k.offsets[t] = -src.kernel.offsets[s];
            k.coeffs[t] = odd ? -src.kernel.coeffs[s] : src.kernel.coeffs[s];
            k.coeffs_f64[t] = odd ? -src.kernel.coeffs_f64[s] : src.kernel.coeffs_f64[s];
        }
        // Reflection maps stencil shift s to 1 - s.
        k.spec.shift = 1 - src.kernel.spec.shift;
        rows.push_back({N - 1 - (src.first_col + T - 1), std::move(k)});
    }
    const auto flipped = D.scheme() == MatrixScheme::staggered_forward ? MatrixScheme::staggered_backward
                                                                       : MatrixScheme::staggered_forward;
    return detail::assemble(flipped, D.order(), D.half_length(), N, D.accuracy(), std::move(rows));
}

/// Builds one of the derivative-matrix variants; P defaults to fullband.
///
/// Centralized row j uses shift l-j on the left block, 0 in the interior and
/// -(j-(N-1-l)) on the right block. Forward staggered row j estimates the
/// derivative at j+1/2 with shift (l-1)-j on the left, 0 inside and
/// -(j-(N-1-l)) on the right; the backward matrix is the flipped forward one.
inline DerivMatrix build_matrix(MatrixScheme scheme, int n, int l, std::size_t N, std::optional<int> P = {}) {
    const Scheme ks = kernel_scheme(scheme);
    KernelSpec base = KernelSpec::fullband(ks, n, l);
    if (P) base.P = *P;
    base.validate();
    const std::size_t taps = static_cast<std::size_t>(base.taps());
    if (N < taps)
        throw MatrixTooSmall("N=" + std::to_string(N) + " is below the stencil width " + std::to_string(taps));

    if (scheme == MatrixScheme::staggered_backward)
        return flip_direction(build_matrix(MatrixScheme::staggered_forward, n, l, N, base.P));

    const long Ni = static_cast<long>(N);
    const long li = l;
    // Interior kernel is shared by every Toeplitz row.
    const Kernel interior = make_kernel(base);
    std::vector<RowStencil> rows;
    rows.reserve(N);
    for (long j = 0; j < Ni; ++j) {
        long shift = 0;
        long first = 0;
        if (scheme == MatrixScheme::centralized) {
            if (j < li) {
                shift = li - j;
                first = 0;
            } else if (j > Ni - 1 - li) {
                shift = -(j - (Ni - 1 - li));
                first = Ni - 1 - 2 * li;
            } else {
                first = j - li;
            }
        } else {
            if (j < li - 1) {
                shift = (li - 1) - j;
                first = 0;
            } else if (j > Ni - 1 - li) {
                shift = -(j - (Ni - 1 - li));
                first = Ni - 2 * li;
            } else {
                first = j - li + 1;
            }
        }
        if (shift == 0) {
            rows.push_back({static_cast<std::size_t>(first), interior});
        } else {
            KernelSpec s = base;
            s.shift = static_cast<int>(shift);
            rows.push_back({static_cast<std::size_t>(first), make_kernel(s)});
        }
    }
    return detail::assemble(scheme, n, l, N, base.P, std::move(rows));
}

/// Sparse matrix-vector product D f.
inline std::vector<double> apply(const DerivMatrix& D, std::span<const double> f) {
    if (f.size() != D.size())
        throw DimensionMismatch("apply: vector length " + std::to_string(f.size()) + " vs N=" +
                                std::to_string(D.size()));
    std::vector<double> y(D.size(), 0.0);
    for (const auto& t : D.entries()) y[t.row] += t.value * f[t.col];
    return y;
}

inline std::vector<double> apply(const DerivMatrix& D, const std::vector<double>& f) {
    return apply(D, std::span<const double>(f));
}

}  // namespace maxpol
