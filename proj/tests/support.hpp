#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "maxpol/exact.hpp"
#include "maxpol/kernels.hpp"
#include "maxpol/rational.hpp"

namespace testing_support {

using maxpol::BigInt;
using maxpol::Rational;

/// Fornberg's recursion for finite-difference weights, run in exact
/// rationals. Returns the weights of the m-th derivative at z for nodes x.
/// Shares no code with the library solver, which makes it a usable oracle
/// for every fullband stencil.
inline std::vector<Rational> fornberg_weights(const std::vector<Rational>& x, const Rational& z, int m) {
    const int n = static_cast<int>(x.size()) - 1;
    std::vector<std::vector<Rational>> c(x.size(), std::vector<Rational>(m + 1));
    Rational c1 = 1;
    Rational c4 = x[0] - z;
    c[0][0] = 1;
    for (int i = 1; i <= n; ++i) {
        const int mn = std::min(i, m);
        Rational c2 = 1;
        const Rational c5 = c4;
        c4 = x[i] - z;
        for (int j = 0; j < i; ++j) {
            const Rational c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (Rational(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - Rational(k) * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<Rational> w;
    for (int i = 0; i <= n; ++i) w.push_back(c[i][m]);
    return w;
}

/// Sum over ordered n-tuples of distinct positions of the product of
/// values, divided by n!.
inline Rational brute_force_hypercube(const std::vector<Rational>& values, int n) {
    const int size = static_cast<int>(values.size());
    Rational total = 0;
    std::vector<int> pick;
    std::vector<bool> used(values.size(), false);
    std::function<void(Rational)> rec = [&](Rational prod) {
        if (static_cast<int>(pick.size()) == n) {
            total += prod;
            return;
        }
        for (int r = 0; r < size; ++r) {
            if (used[r]) continue;
            used[r] = true;
            pick.push_back(r);
            rec(prod * values[r]);
            pick.pop_back();
            used[r] = false;
        }
    };
    rec(Rational(1));
    return total / Rational(maxpol::factorial(static_cast<unsigned>(n)));
}

/// Small random rationals p/q with |p| <= 9, 1 <= q <= 7.
class RationalSource {
public:
    explicit RationalSource(std::uint64_t seed) : gen_(seed) {}

    Rational next() {
        std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
        return Rational(BigInt(num(gen_)), BigInt(den(gen_)));
    }

    std::vector<Rational> vector(std::size_t n) {
        std::vector<Rational> v;
        for (std::size_t i = 0; i < n; ++i) v.push_back(next());
        return v;
    }

    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }

private:
    std::mt19937_64 gen_;
};

inline double falling(double p, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= p - i;
    return r;
}

/// Max-abs difference between two equally sized vectors.
inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace testing_support
