#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include "maxpol/diffmatrix.hpp"
#include "maxpol/errors.hpp"

namespace maxpol {

using cplx = std::complex<double>;

enum class StabilityCase { I, II, III, IV };

inline std::string_view to_string(StabilityCase c) {
    switch (c) {
        case StabilityCase::I: return "I";
        case StabilityCase::II: return "II";
        case StabilityCase::III: return "III";
        case StabilityCase::IV: return "IV";
    }
    return "?";
}

/// binary64: dense QR on the rounded matrix. extended: the same algorithm in
/// 100-digit arithmetic, started from the exact rational entries.
enum class Precision { binary64, extended };

inline std::string_view to_string(Precision p) { return p == Precision::binary64 ? "binary64" : "extended"; }

inline Precision parse_precision(std::string_view s) {
    if (s == "binary64" || s == "double") return Precision::binary64;
    if (s == "extended") return Precision::extended;
    throw InvalidSpec("unknown precision '" + std::string(s) + "'");
}

struct GershgorinDisc {
    cplx center;
    double radius;
};

struct SpectralParams {
    MatrixScheme scheme;
    int n;
    int l;
    std::size_t N;
    int P;
    Precision precision;
};

struct SpectralReport {
    std::vector<cplx> eigenvalues;
    double spectral_radius = 0.0;
    double max_real = 0.0;
    double max_abs_imag = 0.0;
    std::vector<GershgorinDisc> gershgorin_discs;
    StabilityCase case_label = StabilityCase::I;
    SpectralParams params{};
};

inline constexpr std::size_t kDenseEigenLimit = 1024;

namespace detail {

inline void sort_spectrum(std::vector<cplx>& ev) {
    std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
}

}  // namespace detail

/// Eigenvalues of the dense operator (Hessenberg reduction + shifted QR),
/// sorted by (real, imag).
inline std::vector<cplx> eigenvalues(const DerivMatrix& D, std::size_t dense_limit = kDenseEigenLimit) {
    if (D.size() > dense_limit)
        throw DimensionMismatch("eigenvalues: N=" + std::to_string(D.size()) + " exceeds dense limit");
    Eigen::EigenSolver<Eigen::MatrixXd> solver(D.dense(), /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw ConvergenceFailure("QR iteration did not converge");
    const auto& ev = solver.eigenvalues();
    std::vector<cplx> out(ev.data(), ev.data() + ev.size());
    detail::sort_spectrum(out);
    return out;
}

/// One disc per row: center = diagonal entry, radius = sum of |off-diagonal|.
inline std::vector<GershgorinDisc> gershgorin(const DerivMatrix& D) {
    std::vector<GershgorinDisc> discs(D.size(), GershgorinDisc{0.0, 0.0});
    for (const auto& t : D.entries()) {
        if (t.row == t.col)
            discs[t.row].center = t.value;
        else
            discs[t.row].radius += std::abs(t.value);
    }
    return discs;
}

/// Distance from z to the union of discs (0 when inside).
inline double gershgorin_excess(cplx z, const std::vector<GershgorinDisc>& discs) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& d : discs) best = std::min(best, std::max(0.0, std::abs(z - d.center) - d.radius));
    return best;
}

inline StabilityCase classify_case(Scheme scheme, int n) {
    if (n < 1) throw InvalidSpec("stability cases are defined for n >= 1");
    const bool odd = n % 2 != 0;
    if (scheme == Scheme::staggered) return odd ? StabilityCase::I : StabilityCase::III;
    return odd ? StabilityCase::II : StabilityCase::IV;
}

inline StabilityCase classify_case(MatrixScheme scheme, int n) { return classify_case(kernel_scheme(scheme), n); }

/// Report around an already computed spectrum.
inline SpectralReport make_report(const DerivMatrix& D, std::vector<cplx> spectrum, Precision precision) {
    SpectralReport r;
    r.eigenvalues = std::move(spectrum);
    r.gershgorin_discs = gershgorin(D);
    r.params = {D.scheme(), D.order(), D.half_length(), D.size(), D.accuracy(), precision};
    r.case_label = classify_case(D.scheme(), D.order());
    r.max_real = -std::numeric_limits<double>::infinity();
    for (const auto& z : r.eigenvalues) {
        r.spectral_radius = std::max(r.spectral_radius, std::abs(z));
        r.max_real = std::max(r.max_real, z.real());
        r.max_abs_imag = std::max(r.max_abs_imag, std::abs(z.imag()));
    }
    return r;
}

inline SpectralReport analyze(const DerivMatrix& D) { return make_report(D, eigenvalues(D), Precision::binary64); }

struct BoundsRow {
    std::size_t N;
    double max_real;
    double min_real;
    double max_imag;
    double min_imag;
};

inline BoundsRow bounds_row(std::size_t N, const std::vector<cplx>& spectrum) {
    BoundsRow row{N, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (const auto& z : spectrum) {
        row.max_real = std::max(row.max_real, z.real());
        row.min_real = std::min(row.min_real, z.real());
        row.max_imag = std::max(row.max_imag, z.imag());
        row.min_imag = std::min(row.min_imag, z.imag());
    }
    return row;
}

/// Eigenvalue extents for a list of matrix sizes, in input order.
inline std::vector<BoundsRow> bounds_sweep(MatrixScheme scheme, int n, int l, const std::vector<std::size_t>& Ns,
                                           std::optional<int> P = {}) {
    std::vector<BoundsRow> out;
    out.reserve(Ns.size());
    for (std::size_t N : Ns) out.push_back(bounds_row(N, eigenvalues(build_matrix(scheme, n, l, N, P))));
    return out;
}

/// Greedy nearest matching of two spectra; returns the largest pairing distance.
inline double spectrum_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    std::vector<bool> used(b.size(), false);
    for (const auto& z : a) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t k = 0; k < b.size(); ++k) {
            if (used[k]) continue;
            const double d = std::abs(z - b[k]);
            if (d < best) {
                best = d;
                arg = k;
            }
        }
        used[arg] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace maxpol
