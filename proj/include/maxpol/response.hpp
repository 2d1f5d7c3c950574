#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "maxpol/kernels.hpp"

namespace maxpol {

using cplx = std::complex<double>;

namespace detail {

inline cplx ipow(cplx z, int p) {
    cplx r = 1.0;
    for (int k = 0; k < p; ++k) r *= z;
    return r;
}

}  // namespace detail

struct FrequencyResponse {
    std::vector<double> omegas;
    std::vector<cplx> values;
};

/// n uniform samples on [0, pi], endpoints included.
inline std::vector<double> uniform_omegas(std::size_t samples = 1024) {
    std::vector<double> w(samples);
    if (samples == 1) return {0.0};
    for (std::size_t i = 0; i < samples; ++i)
        w[i] = std::numbers::pi * static_cast<double>(i) / static_cast<double>(samples - 1);
    return w;
}

/// H(w) = sum_k c_k exp(i x_k w).
inline FrequencyResponse eval_response(const Kernel& kernel, const std::vector<double>& omegas) {
    const auto x = kernel.offsets_f64();
    FrequencyResponse r{omegas, std::vector<cplx>(omegas.size())};
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k)
            acc += kernel.coeffs_f64[k] * std::polar(1.0, x[k] * omegas[i]);
        r.values[i] = acc;
    }
    return r;
}

/// p-th derivative in w of H at w0: sum_k c_k (i x_k)^p exp(i x_k w0).
inline cplx response_derivative_at(const Kernel& kernel, double omega0, int p) {
    const auto x = kernel.offsets_f64();
    cplx acc = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const cplx ix(0.0, x[k]);
        acc += kernel.coeffs_f64[k] * detail::ipow(ix, p) * std::polar(1.0, x[k] * omega0);
    }
    return acc;
}

/// p-th derivative of (i w)^n: i^n n!/(n-p)! w^(n-p), zero for p > n.
inline cplx ideal_derivative_response(int n, double omega, int p) {
    if (p > n) return 0.0;
    double falling = 1.0;
    for (int k = n - p + 1; k <= n; ++k) falling *= k;
    static constexpr cplx i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const double w_pow = (n == p) ? 1.0 : std::pow(omega, n - p);
    return i_pow[n % 4] * falling * w_pow;
}

struct FlatnessReport {
    int accuracy_at_zero = -1;    ///< largest p matched at w = 0 (-1: none)
    int flatness_at_nyquist = -1; ///< largest q vanishing at w = pi (-1: none)
    double zero_tolerance = 0.0;
    double nyquist_relative_tolerance = 0.0;
};

/// Measures matched derivatives at 0 and vanishing derivatives at pi using
/// the float coefficients.
///
/// At w = 0 the p-th check passes when the deviation from the ideal response
/// is within 1e-9 * max(1, n!, sum_k |c_k| |x_k|^p); at w = pi the q-th
/// derivative must be within 1e-9 * sum_k |c_k| |x_k|^q of zero. Both
/// counts stop at the first failing degree.
inline FlatnessReport flatness_report(const Kernel& kernel) {
    constexpr double rel = 1e-9;
    const int n = kernel.spec.n;
    const int limit = 2 * static_cast<int>(kernel.size()) + 2;
    const auto x = kernel.offsets_f64();
    auto magnitude = [&](int p) {
        double s = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k)
            s += std::abs(kernel.coeffs_f64[k]) * std::pow(std::abs(x[k]), p);
        return s;
    };

    FlatnessReport rep;
    rep.zero_tolerance = rel * std::max(1.0, std::tgamma(n + 1.0));
    rep.nyquist_relative_tolerance = rel;

    for (int p = 0; p <= limit; ++p) {
        const cplx diff = response_derivative_at(kernel, 0.0, p) - ideal_derivative_response(n, 0.0, p);
        if (std::abs(diff) > std::max(rep.zero_tolerance, rel * magnitude(p))) break;
        rep.accuracy_at_zero = p;
    }
    for (int q = 0; q <= limit; ++q) {
        if (std::abs(response_derivative_at(kernel, std::numbers::pi, q)) > rel * magnitude(q)) break;
        rep.flatness_at_nyquist = q;
    }
    return rep;
}

}  // namespace maxpol
