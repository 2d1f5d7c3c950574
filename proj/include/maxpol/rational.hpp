#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "maxpol/errors.hpp"

namespace maxpol {

using BigInt = boost::multiprecision::cpp_int;

/// Exact m! as an arbitrary-precision integer.
inline BigInt factorial(unsigned m) {
    BigInt r = 1;
    for (unsigned k = 2; k <= m; ++k) r *= k;
    return r;
}

/// Exact fraction num/den, always stored reduced with den > 0; zero is 0/1.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long v) : num_(v), den_(1) {}  // NOLINT: implicit by intent
    Rational(BigInt v) : num_(std::move(v)), den_(1) {}  // NOLINT
    Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_ == 0) throw std::domain_error("Rational: zero denominator");
        normalize();
    }

    const BigInt& num() const noexcept { return num_; }
    const BigInt& den() const noexcept { return den_; }

    bool is_zero() const noexcept { return num_ == 0; }
    bool is_integer() const noexcept { return den_ == 1; }
    int sign() const noexcept { return num_.sign(); }

    Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    Rational& operator+=(const Rational& o) {
        if (den_ == o.den_) {
            num_ += o.num_;
        } else {
            num_ = num_ * o.den_ + o.num_ * den_;
            den_ *= o.den_;
        }
        normalize();
        return *this;
    }
    Rational& operator-=(const Rational& o) { return *this += -o; }
    Rational& operator*=(const Rational& o) {
        num_ *= o.num_;
        den_ *= o.den_;
        normalize();
        return *this;
    }
    Rational& operator/=(const Rational& o) {
        if (o.num_ == 0) throw std::domain_error("Rational: division by zero");
        num_ *= o.den_;
        den_ *= o.num_;
        normalize();
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const BigInt lhs = a.num_ * b.den_;
        const BigInt rhs = b.num_ * a.den_;
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    Rational abs() const { return sign() < 0 ? -*this : *this; }

    /// Integer power, negative exponents allowed for non-zero values.
    Rational pow(int e) const {
        if (e < 0) return Rational(1) / pow(-e);
        Rational r(1);
        Rational b = *this;
        for (unsigned u = static_cast<unsigned>(e); u != 0; u >>= 1) {
            if (u & 1u) r *= b;
            if (u > 1) b *= b;
        }
        return r;
    }

    /// Nearest binary64, ties to even.
    double to_double() const {
        using boost::multiprecision::msb;
        if (num_ == 0) return 0.0;
        const bool neg = num_ < 0;
        const BigInt a = neg ? BigInt(-num_) : num_;
        long k = 52 - (static_cast<long>(msb(a)) - static_cast<long>(msb(den_)));
        BigInt q, r, d;
        auto divide = [&](long shift) {
            BigInt scaled_a = a;
            d = den_;
            if (shift >= 0) scaled_a <<= static_cast<unsigned>(shift);
            else d <<= static_cast<unsigned>(-shift);
            q = scaled_a / d;
            r = scaled_a - q * d;
        };
        divide(k);
        if (msb(q) < 52) divide(++k);
        if (k > 1074) {
            k = 1074;  // subnormal range
            divide(k);
        }
        const BigInt twice_r = r << 1;
        if (twice_r > d || (twice_r == d && (q & 1) != 0)) q += 1;
        const double mant = q.convert_to<double>();  // exact: q <= 2^53
        const double v = std::ldexp(mant, static_cast<int>(-k));
        return neg ? -v : v;
    }

    std::string str() const {
        if (den_ == 1) return num_.str();
        return num_.str() + "/" + den_.str();
    }

    /// Accepts "p", "p/q" and finite decimals such as "-0.25".
    static Rational parse(std::string_view text) {
        auto bad = [&] { return FormatError("not a rational number: '" + std::string(text) + "'"); };
        auto parse_int = [&](std::string_view s) {
            if (s.empty()) throw bad();
            std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
            if (i == s.size()) throw bad();
            for (std::size_t j = i; j < s.size(); ++j)
                if (s[j] < '0' || s[j] > '9') throw bad();
            // cpp_int reads a leading 0 as an octal prefix.
            std::string_view digits = s.substr(i);
            while (digits.size() > 1 && digits[0] == '0') digits.remove_prefix(1);
            BigInt v{std::string(digits)};
            return s[0] == '-' ? BigInt(-v) : v;
        };
        if (auto slash = text.find('/'); slash != std::string_view::npos) {
            BigInt den = parse_int(text.substr(slash + 1));
            if (den == 0) throw bad();
            return Rational(parse_int(text.substr(0, slash)), den);
        }
        if (auto dot = text.find('.'); dot != std::string_view::npos) {
            std::string digits(text.substr(0, dot));
            std::string_view frac = text.substr(dot + 1);
            if (frac.empty() || digits.empty() || digits == "-" || digits == "+") throw bad();
            for (char c : frac)
                if (c < '0' || c > '9') throw bad();
            digits += frac;
            BigInt den = 1;
            for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
            return Rational(parse_int(digits), den);
        }
        return Rational(parse_int(text));
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        if (num_ == 0) {
            den_ = 1;
            return;
        }
        if (den_ == 1) return;
        BigInt g = boost::multiprecision::gcd(num_, den_);
        if (g < 0) g = -g;
        if (g != 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    BigInt num_;
    BigInt den_;
};

/// Dense row-major matrix of exact rationals.
class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}

    static RationalMatrix identity(std::size_t n) {
        RationalMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = Rational(1);
        return m;
    }

    static RationalMatrix from_rows(const std::vector<std::vector<Rational>>& rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r == 0 ? 0 : rows.front().size();
        RationalMatrix m(r, c);
        for (std::size_t i = 0; i < r; ++i) {
            if (rows[i].size() != c) throw DimensionMismatch("ragged row list");
            for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    const std::vector<Rational>& entries() const noexcept { return entries_; }

    friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

    std::vector<Rational> multiply(const std::vector<Rational>& x) const {
        if (x.size() != cols_) throw DimensionMismatch("matrix-vector product");
        std::vector<Rational> y(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (!(*this)(i, j).is_zero() && !x[j].is_zero()) y[i] += (*this)(i, j) * x[j];
        return y;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> entries_;
};

}  // namespace maxpol
