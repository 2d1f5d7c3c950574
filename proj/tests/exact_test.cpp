#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <map>

#include "support.hpp"

using namespace maxpol;
using testing_support::RationalSource;

namespace {

Rational q(long long p, long long d = 1) { return Rational(BigInt(p), BigInt(d)); }

}  // namespace

TEST(Rational, StoredReducedWithPositiveDenominator) {
    const Rational r(BigInt(6), BigInt(-4));
    EXPECT_EQ(r.num(), -3);
    EXPECT_EQ(r.den(), 2);
    const Rational z(BigInt(0), BigInt(-7));
    EXPECT_EQ(z.num(), 0);
    EXPECT_EQ(z.den(), 1);
    EXPECT_THROW(Rational(BigInt(1), BigInt(0)), std::domain_error);
}

TEST(Rational, ArithmeticAndOrdering) {
    EXPECT_EQ(q(1, 2) + q(1, 3), q(5, 6));
    EXPECT_EQ(q(1, 2) - q(1, 3), q(1, 6));
    EXPECT_EQ(q(2, 3) * q(9, 4), q(3, 2));
    EXPECT_EQ(q(2, 3) / q(4, 9), q(3, 2));
    EXPECT_LT(q(-1, 2), q(1, 3));
    EXPECT_GT(q(7, 8), q(6, 7));
    EXPECT_EQ(q(-2, 3).pow(3), q(-8, 27));
    EXPECT_EQ(q(2, 3).pow(-2), q(9, 4));
    EXPECT_EQ(q(5).pow(0), q(1));
    EXPECT_THROW(q(0).pow(-1), std::domain_error);
    EXPECT_THROW(q(1) / q(0), std::domain_error);
}

TEST(Rational, ParseAndPrint) {
    EXPECT_EQ(Rational::parse("3/4"), q(3, 4));
    EXPECT_EQ(Rational::parse("-6/8"), q(-3, 4));
    EXPECT_EQ(Rational::parse("-0.25"), q(-1, 4));
    EXPECT_EQ(Rational::parse("12"), q(12));
    EXPECT_EQ(Rational::parse("010"), q(10));
    EXPECT_EQ(Rational::parse("0.0625"), q(1, 16));
    EXPECT_EQ(q(-3, 4).str(), "-3/4");
    EXPECT_EQ(q(5).str(), "5");
    for (const char* bad : {"", "1/0", "abc", "1.", ".5", "2/x", "--1"}) EXPECT_THROW(Rational::parse(bad), Error) << bad;
}

TEST(Rational, ToDoubleIsCorrectlyRounded) {
    // strtod on the exact decimal expansion is correctly rounded, so it is an
    // independent reference whenever the denominator is a power of ten.
    RationalSource src(11);
    for (int i = 0; i < 500; ++i) {
        const long long num = src.integer(-999999, 999999) * 1000003LL + src.integer(0, 999);
        const int digits = src.integer(0, 12);
        BigInt den = 1;
        for (int d = 0; d < digits; ++d) den *= 10;
        const Rational r(BigInt(num), den);
        const std::string text = std::to_string(num) + "e-" + std::to_string(digits);
        EXPECT_EQ(r.to_double(), std::strtod(text.c_str(), nullptr)) << text;
    }
    EXPECT_EQ(q(1, 3).to_double(), 1.0 / 3.0);
    EXPECT_EQ(q(-2, 7).to_double(), -2.0 / 7.0);
    // Huge operands still round correctly.
    const BigInt big = BigInt(1) << 3000;
    EXPECT_EQ(Rational(big + 1, big).to_double(), 1.0);
    EXPECT_EQ(Rational(BigInt(1), big).to_double(), 0.0);
    EXPECT_EQ(Rational(BigInt(1), BigInt(1) << 1074).to_double(), std::ldexp(1.0, -1074));
}

TEST(Factorial, KnownValues) {
    EXPECT_EQ(factorial(0), 1);
    EXPECT_EQ(factorial(5), 120);
    EXPECT_EQ(factorial(12), 479001600);
    EXPECT_EQ(factorial(25), BigInt("15511210043330985984000000"));
}

TEST(SolveLinearExact, Identity) {
    const auto x = solve_linear_exact(RationalMatrix::identity(3), {q(1), q(2), q(3)});
    EXPECT_EQ(x, (std::vector<Rational>{q(1), q(2), q(3)}));
}

TEST(SolveLinearExact, ThreePointFirstDerivative) {
    const auto A = RationalMatrix::from_rows({{q(1), q(1), q(1)}, {q(-1), q(0), q(1)}, {q(1), q(0), q(1)}});
    const auto x = solve_linear_exact(A, {q(0), q(1), q(0)});
    EXPECT_EQ(x, (std::vector<Rational>{q(-1, 2), q(0), q(1, 2)}));
}

TEST(SolveLinearExact, TwoPointStaggered) {
    const auto A = RationalMatrix::from_rows({{q(1), q(1)}, {q(-1, 2), q(1, 2)}});
    EXPECT_EQ(solve_linear_exact(A, {q(0), q(1)}), (std::vector<Rational>{q(-1), q(1)}));
}

TEST(SolveLinearExact, Errors) {
    const auto singular = RationalMatrix::from_rows({{q(1), q(2)}, {q(1, 2), q(1)}});
    EXPECT_THROW(solve_linear_exact(singular, {q(1), q(1)}), SingularMatrix);
    const auto rect = RationalMatrix::from_rows({{q(1), q(2), q(3)}, {q(4), q(5), q(6)}});
    EXPECT_THROW(solve_linear_exact(rect, {q(1), q(1)}), DimensionMismatch);
    EXPECT_THROW(solve_linear_exact(RationalMatrix::identity(2), {q(1)}), DimensionMismatch);
}

TEST(SolveLinearExact, ResidualIsExactlyZeroOnRandomSystems) {
    RationalSource src(5);
    int solved = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = static_cast<std::size_t>(src.integer(1, 7));
        std::vector<std::vector<Rational>> rows;
        for (std::size_t i = 0; i < n; ++i) rows.push_back(src.vector(n));
        const auto A = RationalMatrix::from_rows(rows);
        const auto b = src.vector(n);
        try {
            const auto x = solve_linear_exact(A, b);
            EXPECT_EQ(A.multiply(x), b);
            ++solved;
        } catch (const SingularMatrix&) {
        }
    }
    EXPECT_GT(solved, 50);
}

TEST(HypercubeSum, Examples) {
    std::map<int, Rational> c{{1, q(1)}, {2, q(2)}, {3, q(3)}};
    EXPECT_EQ(hypercube_sum(c, 1), q(6));
    EXPECT_EQ(hypercube_sum(c, 2), q(11));
    std::map<int, Rational> ones{{1, q(1)}, {2, q(1)}, {3, q(1)}, {4, q(1)}};
    EXPECT_EQ(hypercube_sum(ones, 2), q(6));
}

TEST(HypercubeSum, EmptyCases) {
    const std::vector<Rational> v{q(2), q(3)};
    EXPECT_EQ(hypercube_sum(v, 0), q(1));
    EXPECT_EQ(hypercube_sum(v, 3), q(0));
    EXPECT_EQ(hypercube_sum(std::vector<Rational>{}, 0), q(1));
    EXPECT_EQ(hypercube_sum(std::vector<Rational>{}, 1), q(0));
    EXPECT_EQ(hypercube_sum(v, -1), q(0));
}

TEST(HypercubeSum, FullSetIsProduct) {
    RationalSource src(3);
    for (int size = 1; size <= 7; ++size) {
        const auto v = src.vector(static_cast<std::size_t>(size));
        Rational prod = 1;
        for (const auto& x : v) prod *= x;
        EXPECT_EQ(hypercube_sum(v, size), prod);
    }
}

TEST(HypercubeSum, MatchesBruteForceEnumeration) {
    RationalSource src(2024);
    for (int size = 0; size <= 7; ++size)
        for (int n = 0; n <= 4; ++n)
            for (int rep = 0; rep < 3; ++rep) {
                const auto v = src.vector(static_cast<std::size_t>(size));
                EXPECT_EQ(hypercube_sum(v, n), testing_support::brute_force_hypercube(v, n))
                    << "size " << size << " n " << n;
            }
}
