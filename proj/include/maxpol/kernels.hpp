#pragma once

#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "maxpol/errors.hpp"
#include "maxpol/exact.hpp"
#include "maxpol/rational.hpp"

namespace maxpol {

enum class Scheme { centralized, staggered };

inline std::string_view to_string(Scheme s) {
    return s == Scheme::centralized ? "centralized" : "staggered";
}

inline Scheme parse_scheme(std::string_view s) {
    if (s == "centralized") return Scheme::centralized;
    if (s == "staggered") return Scheme::staggered;
    throw InvalidScheme("unknown kernel scheme '" + std::string(s) + "'");
}

/// Request for one differentiation stencil.
///
/// `shift` moves the stencil relative to its evaluation point: positive values
/// build left-boundary stencils, negative values right-boundary ones. `P` is
/// the number of matched derivatives of the ideal response at zero frequency;
/// the remaining taps become flatness constraints at the Nyquist frequency.
struct KernelSpec {
    Scheme scheme = Scheme::centralized;
    int n = 1;
    int l = 1;
    int shift = 0;
    int P = 2;

    int taps() const noexcept { return scheme == Scheme::centralized ? 2 * l + 1 : 2 * l; }
    int max_degree() const noexcept { return scheme == Scheme::centralized ? 2 * l : 2 * l - 1; }
    /// Flatness degree at the Nyquist frequency; negative for fullband kernels.
    int lowpass_degree() const noexcept { return taps() - P - 2; }
    bool is_fullband() const noexcept { return P == max_degree(); }

    static KernelSpec fullband(Scheme scheme, int n, int l, int shift = 0) {
        KernelSpec s{scheme, n, l, shift, 0};
        s.P = s.max_degree();
        return s;
    }

    void validate() const {
        if (n < 0) throw InvalidSpec("derivative order must be non-negative");
        if (l < 1) throw InvalidSpec("half tap-length must be at least 1");
        if (std::abs(shift) > l) throw InvalidSpec("|shift| must not exceed l");
        if (P < n) throw InvalidSpec("accuracy degree P must be at least the derivative order n");
        if (P > max_degree()) throw InvalidSpec("accuracy degree P exceeds the tap budget");
    }

    friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

/// Solved stencil: coefficients paired with offsets relative to the evaluation point.
struct Kernel {
    KernelSpec spec;
    std::vector<Rational> offsets;
    std::vector<Rational> coeffs;
    std::vector<double> coeffs_f64;

    std::size_t size() const noexcept { return coeffs.size(); }

    std::vector<double> offsets_f64() const {
        std::vector<double> out;
        out.reserve(offsets.size());
        for (const auto& x : offsets) out.push_back(x.to_double());
        return out;
    }
};

namespace detail {

inline std::vector<double> to_f64(const std::vector<Rational>& v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(x.to_double());
    return out;
}

inline Kernel make_kernel_value(const KernelSpec& spec, std::vector<Rational> offsets,
                                std::vector<Rational> coeffs) {
    Kernel k{spec, std::move(offsets), std::move(coeffs), {}};
    k.coeffs_f64 = to_f64(k.coeffs);
    return k;
}

}  // namespace detail

/// Tap positions: k - l - 1 + shift (centralized), k - l - 1/2 + shift (staggered), k = 1..T.
inline std::vector<Rational> stencil_offsets(const KernelSpec& spec) {
    const int T = spec.taps();
    std::vector<Rational> x;
    x.reserve(static_cast<std::size_t>(T));
    for (int k = 1; k <= T; ++k) {
        if (spec.scheme == Scheme::centralized)
            x.emplace_back(k - spec.l - 1 + spec.shift);
        else
            x.emplace_back(BigInt(2 * (k - spec.l + spec.shift) - 1), BigInt(2));
    }
    return x;
}

/// Stacks the P+1 moment rows and Q+1 sign-alternating rows; the right side
/// holds n! in row n.
inline std::pair<RationalMatrix, std::vector<Rational>> assemble_maxpol_system(const KernelSpec& spec) {
    spec.validate();
    const auto x = stencil_offsets(spec);
    const std::size_t T = x.size();
    const int Q = spec.lowpass_degree();
    RationalMatrix A(T, T);
    std::size_t row = 0;
    for (int p = 0; p <= spec.P; ++p, ++row)
        for (std::size_t k = 0; k < T; ++k) A(row, k) = x[k].pow(p);
    for (int q = 0; q <= Q; ++q, ++row)
        for (std::size_t k = 0; k < T; ++k) {
            // k is 0-based here; the alternating sign uses the 1-based tap index.
            Rational v = x[k].pow(q);
            A(row, k) = (k % 2 == 0) ? -v : v;
        }
    std::vector<Rational> rhs(T);
    rhs[static_cast<std::size_t>(spec.n)] = Rational(factorial(static_cast<unsigned>(spec.n)));
    return {std::move(A), std::move(rhs)};
}

/// Exact solution of the MaxPol constraint system (lowpass or fullband).
inline Kernel solve_kernel(const KernelSpec& spec) {
    auto [A, rhs] = assemble_maxpol_system(spec);
    auto coeffs = solve_linear_exact(A, rhs);
    return detail::make_kernel_value(spec, stencil_offsets(spec), std::move(coeffs));
}

/// Product of (k - j) over j != k, 1 <= j <= N.
inline BigInt lambda_pivot(int k, int N) {
    BigInt r = 1;
    for (int j = 1; j <= N; ++j)
        if (j != k) r *= (k - j);
    return r;
}

/// Fullband coefficients from the closed-form inverse-Vandermonde expressions.
///
/// Staggered: c(k) = (-1)^(n+1) n!/lambda(k) * prod_{j!=k} x_j * e_n({1/x_j}_{j!=k}).
/// Centralized: the same with the zero-offset node removed from both the
/// product and the pool, sign (-1)^n and an (n-1)-subset sum; the node at
/// offset zero absorbs the zeroth-moment condition.
inline Kernel fullband_closed_form(const KernelSpec& spec) {
    spec.validate();
    if (!spec.is_fullband()) throw InvalidSpec("closed form applies only to fullband kernels (P = Pmax)");
    const auto x = stencil_offsets(spec);
    const int N = spec.taps();
    const int n = spec.n;
    const Rational n_fact(factorial(static_cast<unsigned>(n)));
    std::vector<Rational> c(static_cast<std::size_t>(N));

    if (spec.scheme == Scheme::staggered) {
        const Rational sign = (n % 2 == 0) ? Rational(-1) : Rational(1);
        for (int k = 1; k <= N; ++k) {
            Rational prod(1);
            std::vector<Rational> pool;
            pool.reserve(static_cast<std::size_t>(N - 1));
            for (int j = 1; j <= N; ++j) {
                if (j == k) continue;
                const Rational& xj = x[static_cast<std::size_t>(j - 1)];
                prod *= xj;
                pool.push_back(Rational(1) / xj);
            }
            c[static_cast<std::size_t>(k - 1)] =
                sign * n_fact / Rational(lambda_pivot(k, N)) * prod * hypercube_sum(pool, n);
        }
    } else {
        const int center = spec.l + 1 - spec.shift;  // 1-based index of the zero offset
        const Rational sign = (n % 2 == 0) ? Rational(1) : Rational(-1);
        Rational others(0);
        for (int k = 1; k <= N; ++k) {
            if (k == center) continue;
            Rational prod(1);
            std::vector<Rational> pool;
            pool.reserve(static_cast<std::size_t>(N - 2));
            for (int j = 1; j <= N; ++j) {
                if (j == k || j == center) continue;
                const Rational& xj = x[static_cast<std::size_t>(j - 1)];
                prod *= xj;
                pool.push_back(Rational(1) / xj);
            }
            Rational ck = sign * n_fact / Rational(lambda_pivot(k, N)) * prod * hypercube_sum(pool, n - 1);
            others += ck;
            c[static_cast<std::size_t>(k - 1)] = std::move(ck);
        }
        c[static_cast<std::size_t>(center - 1)] = (n == 0 ? Rational(1) : Rational(0)) - others;
    }
    return detail::make_kernel_value(spec, x, std::move(c));
}

/// Closed form for fullband specs, exact solve otherwise.
inline Kernel make_kernel(const KernelSpec& spec) {
    spec.validate();
    return spec.is_fullband() ? fullband_closed_form(spec) : solve_kernel(spec);
}

/// Boundary-shifted fullband kernels lose conditioning quickly past l = 7.
inline bool within_recommended_range(const KernelSpec& spec) {
    return spec.l < 8 || spec.shift == 0 || !spec.is_fullband();
}

/// Power moments sum_k x_k^p c_k for p = 0..pmax.
inline std::vector<Rational> kernel_moments(const Kernel& kernel, int pmax) {
    std::vector<Rational> m(static_cast<std::size_t>(pmax + 1));
    for (std::size_t k = 0; k < kernel.size(); ++k) {
        Rational xp(1);
        for (int p = 0; p <= pmax; ++p) {
            m[static_cast<std::size_t>(p)] += xp * kernel.coeffs[k];
            xp *= kernel.offsets[k];
        }
    }
    return m;
}

/// Sign-alternating moments sum_k (-1)^k x_k^q c_k (1-based k) for q = 0..qmax.
inline std::vector<Rational> kernel_alternating_moments(const Kernel& kernel, int qmax) {
    std::vector<Rational> m(static_cast<std::size_t>(qmax + 1));
    for (std::size_t k = 0; k < kernel.size(); ++k) {
        Rational xq = (k % 2 == 0) ? Rational(-1) : Rational(1);
        for (int q = 0; q <= qmax; ++q) {
            m[static_cast<std::size_t>(q)] += xq * kernel.coeffs[k];
            xq *= kernel.offsets[k];
        }
    }
    return m;
}

}  // namespace maxpol
