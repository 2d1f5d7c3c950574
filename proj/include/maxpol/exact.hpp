#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "maxpol/errors.hpp"
#include "maxpol/rational.hpp"

namespace maxpol {

/// Solves A x = b exactly.
///
/// Each row (with its right-hand side) is scaled to integers, reduced with
/// Bareiss fraction-free elimination using the largest-magnitude pivot, and
/// back-substituted in rationals. The solution is checked against A x = b
/// before returning.
inline std::vector<Rational> solve_linear_exact(const RationalMatrix& A, const std::vector<Rational>& b) {
    if (!A.is_square()) throw DimensionMismatch("solve_linear_exact: matrix is not square");
    const std::size_t n = A.rows();
    if (b.size() != n) throw DimensionMismatch("solve_linear_exact: right-hand side length");

    std::vector<std::vector<BigInt>> M(n, std::vector<BigInt>(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        BigInt scale = b[i].den();
        for (std::size_t j = 0; j < n; ++j) scale = boost::multiprecision::lcm(scale, A(i, j).den());
        for (std::size_t j = 0; j < n; ++j) M[i][j] = A(i, j).num() * (scale / A(i, j).den());
        M[i][n] = b[i].num() * (scale / b[i].den());
    }

    BigInt prev = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        BigInt best = abs(M[k][k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            BigInt mag = abs(M[i][k]);
            if (mag > best) {
                best = std::move(mag);
                pivot = i;
            }
        }
        if (best == 0) throw SingularMatrix("zero pivot column " + std::to_string(k));
        std::swap(M[k], M[pivot]);
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j <= n; ++j) {
                M[i][j] = (M[k][k] * M[i][j] - M[i][k] * M[k][j]) / prev;
            }
            M[i][k] = 0;
        }
        prev = M[k][k];
    }

    std::vector<Rational> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        Rational acc(M[ii][n]);
        for (std::size_t j = ii + 1; j < n; ++j)
            if (M[ii][j] != 0 && !x[j].is_zero()) acc -= Rational(M[ii][j]) * x[j];
        x[ii] = acc / Rational(M[ii][ii]);
    }

    if (A.multiply(x) != b) throw SingularMatrix("exact back-substitution check failed");
    return x;
}

/// Unordered sum over n-element subsets of distinct indices of the product of
/// values, evaluated with the n-step hypercube recursion
///   C_i(r) = C(r) [S_{i-1} - (n - i) C_{i-1}(r)],  S_i = sum_r C_i(r),
/// and S = S_{n-1} / n!.
///
/// The empty product (n = 0) is 1; a pool smaller than n yields 0.
template <typename T>
T hypercube_sum(std::span<const T> values, int n) {
    if (n < 0) return T(0);
    if (n == 0) return T(1);
    if (values.size() < static_cast<std::size_t>(n)) return T(0);

    std::vector<T> current(values.begin(), values.end());
    T total(0);
    for (const T& v : current) total += v;
    for (int i = 1; i < n; ++i) {
        const T weight(static_cast<long long>(n - i));
        T next_total(0);
        for (std::size_t r = 0; r < current.size(); ++r) {
            current[r] = values[r] * (total - weight * current[r]);
            next_total += current[r];
        }
        total = std::move(next_total);
    }
    T n_factorial(1);
    for (int k = 2; k <= n; ++k) n_factorial *= T(static_cast<long long>(k));
    return total / n_factorial;
}

template <typename T>
T hypercube_sum(const std::vector<T>& values, int n) {
    return hypercube_sum(std::span<const T>(values), n);
}

/// Map-keyed overload; only the values take part in the sum.
template <typename Key, typename T>
T hypercube_sum(const std::map<Key, T>& values, int n) {
    std::vector<T> flat;
    flat.reserve(values.size());
    for (const auto& [key, v] : values) flat.push_back(v);
    return hypercube_sum(std::span<const T>(flat), n);
}

}  // namespace maxpol
