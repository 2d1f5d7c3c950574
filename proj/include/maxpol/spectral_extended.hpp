#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Eigenvalues>

#include <optional>
#include <string>
#include <vector>

#include "maxpol/diffmatrix.hpp"
#include "maxpol/errors.hpp"
#include "maxpol/spectral.hpp"

namespace maxpol {

inline constexpr std::size_t kExtendedEigenLimit = 256;

using ExtendedReal =
    boost::multiprecision::number<boost::multiprecision::cpp_bin_float<100>, boost::multiprecision::et_off>;

/// Eigenvalues computed in 100-digit arithmetic from the exact entries, then
/// rounded. Derivative matrices are far from normal and carry Jordan blocks
/// at 0 (size P+1 for n=1), so binary64 QR scatters those eigenvalues by
/// roughly eps^(1/(P+1)); this path resolves them to well below 1e-10.
inline std::vector<cplx> eigenvalues_extended(const DerivMatrix& D, std::size_t dense_limit = kExtendedEigenLimit) {
    if (D.size() > dense_limit)
        throw DimensionMismatch("eigenvalues_extended: N=" + std::to_string(D.size()) + " exceeds dense limit");
    using Mat = Eigen::Matrix<ExtendedReal, Eigen::Dynamic, Eigen::Dynamic>;
    const auto N = static_cast<Eigen::Index>(D.size());
    Mat A = Mat::Zero(N, N);
    const auto& rows = D.row_stencils();
    for (std::size_t j = 0; j < rows.size(); ++j) {
        const auto& coeffs = rows[j].kernel.coeffs;
        for (std::size_t k = 0; k < coeffs.size(); ++k)
            A(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(rows[j].first_col + k)) =
                ExtendedReal(coeffs[k].num()) / ExtendedReal(coeffs[k].den());
    }
    Eigen::EigenSolver<Mat> solver(A, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw ConvergenceFailure("extended QR iteration did not converge");
    std::vector<cplx> out;
    out.reserve(D.size());
    for (Eigen::Index i = 0; i < N; ++i) {
        const auto& z = solver.eigenvalues()(i);
        out.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
    }
    detail::sort_spectrum(out);
    return out;
}

inline std::vector<cplx> eigenvalues(const DerivMatrix& D, Precision precision) {
    return precision == Precision::extended ? eigenvalues_extended(D) : eigenvalues(D);
}

inline SpectralReport analyze(const DerivMatrix& D, Precision precision) {
    return make_report(D, eigenvalues(D, precision), precision);
}

inline std::vector<BoundsRow> bounds_sweep(MatrixScheme scheme, int n, int l, const std::vector<std::size_t>& Ns,
                                           std::optional<int> P, Precision precision) {
    std::vector<BoundsRow> out;
    out.reserve(Ns.size());
    for (std::size_t N : Ns) out.push_back(bounds_row(N, eigenvalues(build_matrix(scheme, n, l, N, P), precision)));
    return out;
}

}  // namespace maxpol
