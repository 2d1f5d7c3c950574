#include <gtest/gtest.h>

#include "support.hpp"

using namespace maxpol;

namespace {

Rational q(long long p, long long d = 1) { return Rational(BigInt(p), BigInt(d)); }

std::vector<Rational> qs(std::initializer_list<std::pair<long long, long long>> v) {
    std::vector<Rational> out;
    for (auto [p, d] : v) out.push_back(q(p, d));
    return out;
}

std::vector<Rational> ints(std::initializer_list<long long> v) {
    std::vector<Rational> out;
    for (auto p : v) out.push_back(q(p));
    return out;
}

}  // namespace

TEST(KernelSpec, DerivedCounts) {
    const KernelSpec c{Scheme::centralized, 1, 3, 0, 4};
    EXPECT_EQ(c.taps(), 7);
    EXPECT_EQ(c.max_degree(), 6);
    EXPECT_EQ(c.lowpass_degree(), 1);
    EXPECT_EQ((c.P + 1) + (c.lowpass_degree() + 1), c.taps());
    const auto s = KernelSpec::fullband(Scheme::staggered, 1, 3);
    EXPECT_EQ(s.taps(), 6);
    EXPECT_EQ(s.P, 5);
    EXPECT_TRUE(s.is_fullband());
    EXPECT_EQ(s.lowpass_degree(), -1);
}

TEST(KernelSpec, Validation) {
    EXPECT_THROW((KernelSpec{Scheme::centralized, -1, 2, 0, 4}.validate()), InvalidSpec);
    EXPECT_THROW((KernelSpec{Scheme::centralized, 1, 0, 0, 0}.validate()), InvalidSpec);
    EXPECT_THROW((KernelSpec{Scheme::centralized, 1, 2, 3, 4}.validate()), InvalidSpec);
    EXPECT_THROW((KernelSpec{Scheme::centralized, 3, 2, 0, 2}.validate()), InvalidSpec);
    EXPECT_THROW((KernelSpec{Scheme::centralized, 1, 2, 0, 5}.validate()), InvalidSpec);
    EXPECT_THROW((KernelSpec{Scheme::staggered, 2, 1, 0, 1}.validate()), InvalidSpec);
    EXPECT_NO_THROW((KernelSpec{Scheme::staggered, 1, 2, -2, 3}.validate()));
    EXPECT_THROW(parse_scheme("diagonal"), InvalidScheme);
}

TEST(StencilOffsets, Examples) {
    EXPECT_EQ(stencil_offsets({Scheme::centralized, 1, 2, 0, 4}), ints({-2, -1, 0, 1, 2}));
    EXPECT_EQ(stencil_offsets({Scheme::centralized, 1, 1, 1, 2}), ints({0, 1, 2}));
    EXPECT_EQ(stencil_offsets({Scheme::staggered, 1, 2, 0, 3}), qs({{-3, 2}, {-1, 2}, {1, 2}, {3, 2}}));
    EXPECT_EQ(stencil_offsets({Scheme::staggered, 1, 2, -1, 3}), qs({{-5, 2}, {-3, 2}, {-1, 2}, {1, 2}}));
}

TEST(AssembleSystem, FullbandIsVandermonde) {
    const auto [A, b] = assemble_maxpol_system({Scheme::centralized, 1, 1, 0, 2});
    EXPECT_EQ(A, RationalMatrix::from_rows({ints({1, 1, 1}), ints({-1, 0, 1}), ints({1, 0, 1})}));
    EXPECT_EQ(b, ints({0, 1, 0}));
}

TEST(AssembleSystem, SmoothingKernelRows) {
    // One moment row and two alternating rows (k is 1-based: signs -,+,-).
    const auto [A, b] = assemble_maxpol_system({Scheme::centralized, 0, 1, 0, 0});
    EXPECT_EQ(A, RationalMatrix::from_rows({ints({1, 1, 1}), ints({-1, 1, -1}), ints({1, 0, -1})}));
    EXPECT_EQ(b, ints({1, 0, 0}));
}

TEST(AssembleSystem, StaggeredTwoTap) {
    const auto [A, b] = assemble_maxpol_system({Scheme::staggered, 1, 1, 0, 1});
    EXPECT_EQ(A, RationalMatrix::from_rows({ints({1, 1}), qs({{-1, 2}, {1, 2}})}));
    EXPECT_EQ(b, ints({0, 1}));
}

TEST(SolveKernel, HandDerivedStencils) {
    EXPECT_EQ(solve_kernel({Scheme::centralized, 0, 1, 0, 0}).coeffs, qs({{1, 4}, {1, 2}, {1, 4}}));
    EXPECT_EQ(solve_kernel({Scheme::staggered, 1, 2, 0, 1}).coeffs, qs({{-1, 4}, {-1, 4}, {1, 4}, {1, 4}}));
    EXPECT_EQ(solve_kernel({Scheme::centralized, 1, 1, 0, 2}).coeffs, qs({{-1, 2}, {0, 1}, {1, 2}}));
}

TEST(SolveKernel, FloatExportIsNearest) {
    const auto k = solve_kernel({Scheme::centralized, 1, 3, 0, 6});
    for (std::size_t i = 0; i < k.size(); ++i) EXPECT_EQ(k.coeffs_f64[i], k.coeffs[i].to_double());
}

TEST(LambdaPivot, ProductDefinition) {
    EXPECT_EQ(lambda_pivot(1, 2), -1);
    EXPECT_EQ(lambda_pivot(2, 3), -1);
    EXPECT_EQ(lambda_pivot(1, 3), 2);
    for (int N = 1; N <= 8; ++N)
        for (int k = 1; k <= N; ++k) {
            BigInt p = 1;
            for (int j = 1; j <= N; ++j)
                if (j != k) p *= k - j;
            EXPECT_EQ(lambda_pivot(k, N), p);
        }
}

TEST(FullbandClosedForm, Examples) {
    EXPECT_EQ(fullband_closed_form(KernelSpec::fullband(Scheme::staggered, 1, 1)).coeffs, ints({-1, 1}));
    EXPECT_EQ(fullband_closed_form(KernelSpec::fullband(Scheme::centralized, 1, 1)).coeffs, qs({{-1, 2}, {0, 1}, {1, 2}}));
    EXPECT_EQ(fullband_closed_form(KernelSpec::fullband(Scheme::centralized, 3, 2)).coeffs,
              qs({{-1, 2}, {1, 1}, {0, 1}, {-1, 1}, {1, 2}}));
    EXPECT_THROW(fullband_closed_form({Scheme::centralized, 1, 2, 0, 2}), InvalidSpec);
}

TEST(FullbandClosedForm, MatchesFornbergOracle) {
    for (Scheme s : {Scheme::centralized, Scheme::staggered})
        for (int l = 1; l <= 5; ++l)
            for (int shift = -l; shift <= l; ++shift)
                for (int n = 0; n <= 4; ++n) {
                    const auto spec = KernelSpec::fullband(s, n, l, shift);
                    if (spec.P < n) continue;
                    const auto k = fullband_closed_form(spec);
                    EXPECT_EQ(k.coeffs, testing_support::fornberg_weights(k.offsets, Rational(0), n))
                        << to_string(s) << " n=" << n << " l=" << l << " shift=" << shift;
                }
}

TEST(KnownStencils, Regression) {
    auto full = [](Scheme s, int n, int l, int shift = 0) { return make_kernel(KernelSpec::fullband(s, n, l, shift)).coeffs; };
    EXPECT_EQ(full(Scheme::centralized, 1, 1), qs({{-1, 2}, {0, 1}, {1, 2}}));
    EXPECT_EQ(full(Scheme::centralized, 2, 1), ints({1, -2, 1}));
    EXPECT_EQ(full(Scheme::centralized, 1, 2), qs({{1, 12}, {-2, 3}, {0, 1}, {2, 3}, {-1, 12}}));
    EXPECT_EQ(full(Scheme::staggered, 1, 1), ints({-1, 1}));
    EXPECT_EQ(full(Scheme::staggered, 1, 2), qs({{1, 24}, {-9, 8}, {9, 8}, {-1, 24}}));
    EXPECT_EQ(full(Scheme::centralized, 1, 1, 1), qs({{-3, 2}, {2, 1}, {-1, 2}}));
}

TEST(KernelMoments, Examples) {
    const auto d1 = make_kernel(KernelSpec::fullband(Scheme::centralized, 1, 1));
    EXPECT_EQ(kernel_moments(d1, 2), ints({0, 1, 0}));
    const auto d2 = make_kernel(KernelSpec::fullband(Scheme::centralized, 2, 1));
    EXPECT_EQ(kernel_moments(d2, 3), ints({0, 0, 2, 0}));
}

TEST(KernelMoments, ExactForEverySpecUpToL8) {
    for (Scheme s : {Scheme::centralized, Scheme::staggered})
        for (int l = 1; l <= 8; ++l) {
            const int pmax = KernelSpec::fullband(s, 0, l).P;
            for (int n = 0; n <= std::min(pmax, 4); ++n)
                for (int P = n; P <= pmax; ++P) {
                    const KernelSpec spec{s, n, l, 0, P};
                    const auto k = make_kernel(spec);
                    auto expected = std::vector<Rational>(static_cast<std::size_t>(P) + 1, Rational(0));
                    expected[static_cast<std::size_t>(n)] = Rational(factorial(static_cast<unsigned>(n)));
                    EXPECT_EQ(kernel_moments(k, P), expected);
                    if (spec.lowpass_degree() >= 0) {
                        const auto alt = kernel_alternating_moments(k, spec.lowpass_degree());
                        for (const auto& v : alt) EXPECT_TRUE(v.is_zero());
                    }
                    if (n >= 1) {
                        EXPECT_TRUE(kernel_moments(k, 0)[0].is_zero());
                    }
                }
        }
}

TEST(KernelSymmetry, ZeroShiftCentralizedParity) {
    for (int l = 1; l <= 6; ++l)
        for (int n = 0; n <= 4; ++n) {
            if (n > 2 * l) continue;
            const auto c = make_kernel(KernelSpec::fullband(Scheme::centralized, n, l)).coeffs;
            const std::size_t T = c.size();
            for (std::size_t k = 0; k < T; ++k) EXPECT_EQ(c[k], n % 2 ? -c[T - 1 - k] : c[T - 1 - k]);
        }
}

TEST(KernelTranslation, MomentsAboutShiftedPoint) {
    // Re-expanding sum_k (x_k - a)^p c_k binomially over the moments must give
    // the n-th derivative of (x - a)^p at 0, i.e. p!/(p-n)! (-a)^(p-n).
    for (Scheme s : {Scheme::centralized, Scheme::staggered})
        for (int l = 1; l <= 4; ++l)
            for (int shift = -l; shift <= l; ++shift)
                for (int n = 1; n <= 3; ++n) {
                    const auto spec = KernelSpec::fullband(s, n, l, shift);
                    if (spec.P < n) continue;
                    const auto k = make_kernel(spec);
                    const auto m = kernel_moments(k, spec.P);
                    for (const Rational& a : {q(-1), q(1, 2), q(2)})
                        for (int p = 0; p <= spec.P; ++p) {
                            Rational direct = 0, expanded = 0;
                            for (std::size_t i = 0; i < k.size(); ++i) direct += (k.offsets[i] - a).pow(p) * k.coeffs[i];
                            for (int j = 0; j <= p; ++j)
                                expanded += Rational(factorial(p) / (factorial(j) * factorial(p - j))) * (-a).pow(p - j) *
                                            m[static_cast<std::size_t>(j)];
                            const Rational ideal =
                                p < n ? Rational(0) : Rational(factorial(p) / factorial(p - n)) * (-a).pow(p - n);
                            EXPECT_EQ(direct, expanded);
                            EXPECT_EQ(direct, ideal);
                        }
                }
}

TEST(KernelDispatch, RecommendedRange) {
    EXPECT_TRUE(within_recommended_range(KernelSpec::fullband(Scheme::centralized, 1, 7, 3)));
    EXPECT_FALSE(within_recommended_range(KernelSpec::fullband(Scheme::centralized, 1, 8, 3)));
    EXPECT_TRUE(within_recommended_range(KernelSpec::fullband(Scheme::centralized, 1, 9, 0)));
    EXPECT_TRUE(within_recommended_range({Scheme::centralized, 1, 9, 3, 10}));
}

TEST(KernelPerformance, LargeExactSolve) {
    const auto k = solve_kernel({Scheme::centralized, 2, 15, 0, 8});
    EXPECT_EQ(k.size(), 31u);
    auto m = kernel_moments(k, 8);
    EXPECT_EQ(m[2], Rational(2));
}
