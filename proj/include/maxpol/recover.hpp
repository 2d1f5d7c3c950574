#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "maxpol/diffmatrix.hpp"
#include "maxpol/errors.hpp"
#include "maxpol/tensorops.hpp"

namespace maxpol {

/// Sampled partial derivatives of a surface; gx along columns, gy along rows.
struct GradientField {
    Grid gx;
    Grid gy;

    std::size_t rows() const noexcept { return gx.rows(); }
    std::size_t cols() const noexcept { return gx.cols(); }

    void validate() const {
        if (!gx.same_shape(gy)) throw DimensionMismatch("gradient components differ in shape");
        if (!gx.all_finite() || !gy.all_finite()) throw DimensionMismatch("gradient field has non-finite samples");
    }
};

struct RecoverySettings {
    Scheme scheme = Scheme::staggered;
    int l = 5;
    std::optional<int> P;          ///< fullband when empty
    double deflation_tol = 1e-10;  ///< relative to the largest Schur diagonal sum
    double anchor_mean = 0.0;

    void validate() const {
        if (!(deflation_tol > 0.0)) throw InvalidSpec("deflation tolerance must be positive");
        if (l < 1) throw InvalidSpec("half tap-length must be at least 1");
    }

    /// Staggered recovery uses forward matrices on both axes.
    MatrixScheme matrix_scheme() const noexcept {
        return scheme == Scheme::centralized ? MatrixScheme::centralized : MatrixScheme::staggered_forward;
    }
};

/// Normal equations A phi + phi B = C of the gradient least-squares problem.
struct SylvesterSystem {
    Eigen::MatrixXd A;  ///< Dy^T Dy, rows x rows
    Eigen::MatrixXd B;  ///< Dx^T Dx, cols x cols
    Eigen::MatrixXd C;  ///< Dy^T gy + gx Dx
};

namespace detail {

inline Eigen::MatrixXd gram(const DerivMatrix& D) {
    const Eigen::MatrixXd M = D.dense();
    return M.transpose() * M;
}

/// Dy^T gy + gx Dx using the sparse triplets.
inline Eigen::MatrixXd sylvester_rhs(const GradientField& field, const DerivMatrix& Dx, const DerivMatrix& Dy) {
    const auto gx = field.gx.matrix();
    const auto gy = field.gy.matrix();
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(gx.rows(), gx.cols());
    for (const auto& t : Dy.entries())
        C.row(static_cast<Eigen::Index>(t.col)) += t.value * gy.row(static_cast<Eigen::Index>(t.row));
    for (const auto& t : Dx.entries())
        C.col(static_cast<Eigen::Index>(t.col)) += t.value * gx.col(static_cast<Eigen::Index>(t.row));
    return C;
}

inline void check_dims(const GradientField& field, const DerivMatrix& Dx, const DerivMatrix& Dy) {
    field.validate();
    if (Dx.size() != field.cols() || Dy.size() != field.rows())
        throw DimensionMismatch("derivative matrices do not match the gradient grid");
}

}  // namespace detail

inline SylvesterSystem assemble_sylvester(const GradientField& field, const DerivMatrix& Dx, const DerivMatrix& Dy) {
    detail::check_dims(field, Dx, Dy);
    return {detail::gram(Dy), detail::gram(Dx), detail::sylvester_rhs(field, Dx, Dy)};
}

struct SylvesterResult {
    Grid solution;
    int deflated_modes = 0;
};

/// Bartels-Stewart solve of A X + X B = C via complex Schur forms
/// A = U T_A U^*, B = V T_B V^*. Transformed unknowns whose diagonal sum
/// |t_A(ii) + t_B(jj)| falls below tau are set to zero; tau is scaled by
/// max|t_A(ii)| + max|t_B(jj)| when `relative` is set. More than one such
/// mode is reported as IllPosed.
inline SylvesterResult solve_sylvester(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::MatrixXd& C,
                                       double tau, bool relative = true) {
    if (A.rows() != A.cols() || B.rows() != B.cols()) throw DimensionMismatch("Sylvester: A and B must be square");
    if (C.rows() != A.rows() || C.cols() != B.rows()) throw DimensionMismatch("Sylvester: C has wrong shape");
    Eigen::ComplexSchur<Eigen::MatrixXd> sa(A), sb(B);
    if (sa.info() != Eigen::Success || sb.info() != Eigen::Success) throw SchurFailure("Schur reduction failed");
    const Eigen::MatrixXcd& TA = sa.matrixT();
    const Eigen::MatrixXcd& TB = sb.matrixT();
    const Eigen::MatrixXcd& U = sa.matrixU();
    const Eigen::MatrixXcd& V = sb.matrixU();
    if (relative) tau *= TA.diagonal().cwiseAbs().maxCoeff() + TB.diagonal().cwiseAbs().maxCoeff();

    const Eigen::Index m = A.rows();
    const Eigen::Index n = B.rows();
    const Eigen::MatrixXcd F = U.adjoint() * C.cast<std::complex<double>>() * V;
    Eigen::MatrixXcd Y = Eigen::MatrixXcd::Zero(m, n);
    int deflated = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::VectorXcd rhs = F.col(j);
        if (j > 0) rhs -= Y.leftCols(j) * TB.col(j).head(j);
        for (Eigen::Index i = m; i-- > 0;) {
            std::complex<double> s = rhs(i);
            if (i + 1 < m) {
                const Eigen::Index len = m - i - 1;
                s -= TA.row(i).tail(len).transpose().cwiseProduct(Y.col(j).tail(len)).sum();
            }
            const std::complex<double> d = TA(i, i) + TB(j, j);
            if (std::abs(d) < tau) {
                ++deflated;
                Y(i, j) = 0.0;
            } else {
                Y(i, j) = s / d;
            }
        }
    }
    if (deflated > 1) throw IllPosed(std::to_string(deflated) + " singular modes deflated (expected at most 1)");
    const Eigen::MatrixXd X = (U * Y * V.adjoint()).real();
    return {Grid::from_eigen(X), deflated};
}

/// Bartels-Stewart for symmetric A and B: their real Schur forms are the
/// orthogonal eigendecompositions, so the transformed system is diagonal.
/// The factorization is kept so many right-hand sides can share it.
class SymmetricSylvester {
public:
    SymmetricSylvester(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double rel_tol) {
        if (A.rows() != A.cols() || B.rows() != B.cols()) throw DimensionMismatch("Sylvester: A and B must be square");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(A), eb(B);
        if (ea.info() != Eigen::Success || eb.info() != Eigen::Success) throw SchurFailure("eigendecomposition failed");
        U_ = ea.eigenvectors();
        V_ = eb.eigenvectors();
        const Eigen::VectorXd& a = ea.eigenvalues();
        const Eigen::VectorXd& b = eb.eigenvalues();
        const double tau = rel_tol * (a.cwiseAbs().maxCoeff() + b.cwiseAbs().maxCoeff());
        inv_ = Eigen::MatrixXd(a.size(), b.size());
        for (Eigen::Index i = 0; i < a.size(); ++i)
            for (Eigen::Index j = 0; j < b.size(); ++j) {
                const double d = a(i) + b(j);
                if (std::abs(d) < tau) {
                    ++deflated_;
                    inv_(i, j) = 0.0;
                } else {
                    inv_(i, j) = 1.0 / d;
                }
            }
        if (deflated_ > 1) throw IllPosed(std::to_string(deflated_) + " singular modes deflated (expected at most 1)");
    }

    int deflated_modes() const noexcept { return deflated_; }

    Eigen::MatrixXd solve(const Eigen::MatrixXd& C) const {
        if (C.rows() != U_.rows() || C.cols() != V_.rows()) throw DimensionMismatch("Sylvester: C has wrong shape");
        Eigen::MatrixXd Y = U_.transpose() * C * V_;
        Y.array() *= inv_.array();
        return U_ * Y * V_.transpose();
    }

private:
    Eigen::MatrixXd U_;
    Eigen::MatrixXd V_;
    Eigen::MatrixXd inv_;
    int deflated_ = 0;
};

/// Reusable recovery pipeline for one grid shape and setting: builds Dx, Dy,
/// factors the normal equations once, then recovers any number of fields.
class SurfaceRecoverer {
public:
    SurfaceRecoverer(std::size_t rows, std::size_t cols, const RecoverySettings& settings)
        : settings_((settings.validate(), settings)),
          Dx_(build_matrix(settings.matrix_scheme(), 1, settings.l, cols, settings.P)),
          Dy_(build_matrix(settings.matrix_scheme(), 1, settings.l, rows, settings.P)),
          solver_(detail::gram(Dy_), detail::gram(Dx_), settings.deflation_tol) {}

    const DerivMatrix& dx() const noexcept { return Dx_; }
    const DerivMatrix& dy() const noexcept { return Dy_; }
    const RecoverySettings& settings() const noexcept { return settings_; }
    int deflated_modes() const noexcept { return solver_.deflated_modes(); }

    Grid recover(const GradientField& field) const { return recover(field, settings_.anchor_mean); }

    Grid recover(const GradientField& field, double anchor_mean) const {
        detail::check_dims(field, Dx_, Dy_);
        Grid phi = Grid::from_eigen(solver_.solve(detail::sylvester_rhs(field, Dx_, Dy_)));
        phi += anchor_mean - phi.mean();
        return phi;
    }

private:
    RecoverySettings settings_;
    DerivMatrix Dx_;
    DerivMatrix Dy_;
    SymmetricSylvester solver_;
};

/// Least-squares surface from its gradients, shifted to the requested mean.
inline Grid recover_surface(const GradientField& field, const RecoverySettings& settings) {
    field.validate();
    return SurfaceRecoverer(field.rows(), field.cols(), settings).recover(field);
}

/// sqrt(|Dy phi - gy|^2 + |phi Dx^T - gx|^2) / sqrt(|gy|^2 + |gx|^2 + 1e-300).
inline double residual(const Grid& phi, const GradientField& field, const DerivMatrix& Dx, const DerivMatrix& Dy) {
    detail::check_dims(field, Dx, Dy);
    if (!phi.same_shape(field.gx)) throw DimensionMismatch("surface and gradient grids differ in shape");
    const Grid px = partial_x(phi, Dx);
    const Grid py = partial_y(phi, Dy);
    double num = 0.0;
    for (std::size_t k = 0; k < phi.size(); ++k) {
        const double ex = px.data()[k] - field.gx.data()[k];
        const double ey = py.data()[k] - field.gy.data()[k];
        num += ex * ex + ey * ey;
    }
    const double fx = field.gx.frobenius();
    const double fy = field.gy.frobenius();
    return std::sqrt(num) / std::sqrt(fx * fx + fy * fy + 1e-300);
}

}  // namespace maxpol
