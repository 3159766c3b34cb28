#pragma once

// Dense linear-algebra facade over Eigen. Everything else in qspec goes
// through these primitives: Hermitian eigendecomposition, general
// eigenvalues, smallest singular values and Hermitian matrix functions.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <type_traits>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qspec/error.hpp"

namespace qspec {

using Complex = std::complex<double>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using ComplexMatrix = Matrix<Complex>;
using ComplexVector = Vector<Complex>;
using RealMatrix = Matrix<double>;
using RealVector = Vector<double>;

/// Relative Hermiticity tolerance accepted by the Hermitian routines.
inline constexpr double kHermitianTolerance = 1e-10;

/// Above this dimension smallest_singular switches to inverse subspace iteration.
inline constexpr Eigen::Index kFullSvdLimit = 512;

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + ": expected a non-empty square matrix, got " +
                        std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
    if (!m.allFinite()) {
        throw Error(ErrorCode::DomainError, std::string(what) + ": matrix has non-finite entries");
    }
}

template <typename A, typename B>
void require_same_shape(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b,
                        const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + ": " + std::to_string(a.rows()) + "x" +
                        std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                        std::to_string(b.cols()));
    }
}

/// Singular values of a complex double matrix through LAPACK zgesdd (values only).
RealVector singular_values_lapack(ComplexMatrix m);

/// Singular values in decreasing order.
template <typename Derived>
Vector<typename Derived::RealScalar> singular_values(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    if constexpr (std::is_same_v<Scalar, Complex>) {
        return singular_values_lapack(m.eval());
    } else {
        Eigen::BDCSVD<Matrix<Scalar>> svd(m.eval());
        if (svd.info() != Eigen::Success) {
            throw Error(ErrorCode::ConvergenceFailure,
                        "singular value decomposition did not converge");
        }
        return svd.singularValues();
    }
}

/// Spectral (operator 2-) norm.
template <typename Derived>
double operator_norm(const Eigen::MatrixBase<Derived>& m) {
    if (m.size() == 0) return 0.0;
    return static_cast<double>(singular_values(m)(0));
}

/// ‖M − M†‖ / max(‖M‖, tiny), in the 2-norm.
template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
    const double scale = operator_norm(m);
    if (scale == 0.0) return 0.0;
    return operator_norm(m - m.adjoint()) / scale;
}

template <typename Scalar>
struct HermitianEig {
    using Real = typename Eigen::NumTraits<Scalar>::Real;
    Vector<Real> values;     // ascending
    Matrix<Scalar> vectors;  // unitary, columns are eigenvectors

    Eigen::Index size() const { return values.size(); }
};

/// Eigendecomposition of a Hermitian matrix after symmetrization (M + M†)/2.
template <typename Derived>
HermitianEig<typename Derived::Scalar> hermitian_eig(const Eigen::MatrixBase<Derived>& m,
                                                     double tol_herm = kHermitianTolerance) {
    using Scalar = typename Derived::Scalar;
    require_square(m, "hermitian_eig");
    require_finite(m, "hermitian_eig");
    const double defect = hermiticity_defect(m);
    if (defect > tol_herm) {
        throw Error(ErrorCode::NotHermitian,
                    "relative Hermiticity defect " + std::to_string(defect) + " exceeds " +
                        std::to_string(tol_herm));
    }
    const Matrix<Scalar> sym = (m + m.adjoint()) / typename Derived::RealScalar(2);
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::ConvergenceFailure, "Hermitian eigensolver did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

/// All n eigenvalues of a general square matrix, with algebraic multiplicity.
template <typename Derived>
ComplexVector general_eig(const Eigen::MatrixBase<Derived>& m) {
    require_square(m, "general_eig");
    require_finite(m, "general_eig");
    const ComplexMatrix mc = m.template cast<Complex>();
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(mc, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::ConvergenceFailure, "complex Schur iteration did not converge");
    }
    return solver.eigenvalues();
}

enum class SminMethod { Auto, FullSvd, InverseIteration };

struct SminOptions {
    SminMethod method = SminMethod::Auto;
    Eigen::Index full_svd_limit = kFullSvdLimit;
    int block_size = 4;
    int max_iterations = 400;
    double rel_tol = 1e-14;
};

namespace detail {

// Inverse subspace iteration on (M†M)^{-1} with Rayleigh-Ritz on the block.
// Returns a negative value when the iteration does not settle; callers then
// fall back to the dense SVD.
template <typename Scalar>
double smallest_singular_inverse_iteration(const Matrix<Scalar>& m, const SminOptions& opt) {
    const Eigen::Index n = m.rows();
    const Eigen::Index k = std::min<Eigen::Index>(opt.block_size, n);
    Eigen::PartialPivLU<Matrix<Scalar>> lu(m);
    const auto& packed = lu.matrixLU();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (packed(i, i) == Scalar(0)) return 0.0;
    }

    // Deterministic start block: a fixed dense pattern avoids accidental
    // orthogonality to the wanted singular vector.
    Matrix<Scalar> x(n, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            x(i, j) = Scalar(std::cos(0.7 * double(i + 1) * double(j + 1)) + 1.3);
        }
    }
    x = Eigen::HouseholderQR<Matrix<Scalar>>(x).householderQ() * Matrix<Scalar>::Identity(n, k);

    double theta_prev = 0.0;
    for (int it = 0; it < opt.max_iterations; ++it) {
        const Matrix<Scalar> z = lu.adjoint().solve(x);
        if (!z.allFinite()) return -1.0;
        const Matrix<Scalar> ritz = z.adjoint() * z;
        Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> small(ritz, Eigen::EigenvaluesOnly);
        const double theta = static_cast<double>(small.eigenvalues()(k - 1));
        if (it > 0 && std::abs(theta - theta_prev) <= opt.rel_tol * theta) {
            return 1.0 / std::sqrt(theta);
        }
        theta_prev = theta;
        const Matrix<Scalar> y = lu.solve(z);
        x = Eigen::HouseholderQR<Matrix<Scalar>>(y).householderQ() *
            Matrix<Scalar>::Identity(n, k);
    }
    return -1.0;
}

} // namespace detail

/// Smallest singular value s_min(M); equals 1/‖M⁻¹‖ for invertible M and 0 for singular M.
template <typename Derived>
double smallest_singular(const Eigen::MatrixBase<Derived>& m, const SminOptions& opt = {}) {
    using Scalar = typename Derived::Scalar;
    require_square(m, "smallest_singular");
    require_finite(m, "smallest_singular");
    const bool iterate = opt.method == SminMethod::InverseIteration ||
                         (opt.method == SminMethod::Auto && m.rows() > opt.full_svd_limit);
    if (iterate) {
        const double s = detail::smallest_singular_inverse_iteration<Scalar>(m.eval(), opt);
        if (s >= 0.0) return s;
    }
    const auto sv = singular_values(m);
    return static_cast<double>(sv(sv.size() - 1));
}

template <typename Scalar>
struct SingularPair {
    double value = 0.0;
    Vector<Scalar> right;  // unit right singular vector
    Vector<Scalar> left;   // unit left singular vector
};

/// Smallest singular value together with its singular vectors (dense SVD).
template <typename Derived>
SingularPair<typename Derived::Scalar> smallest_singular_pair(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    require_square(m, "smallest_singular_pair");
    require_finite(m, "smallest_singular_pair");
    Eigen::JacobiSVD<Matrix<Scalar>> svd(m.eval(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::Index last = m.rows() - 1;
    return {static_cast<double>(svd.singularValues()(last)), svd.matrixV().col(last),
            svd.matrixU().col(last)};
}

/// V f(Λ) V† from a precomputed eigendecomposition. Real f yields a Hermitian
/// matrix of the same scalar type; complex-valued f yields a normal complex matrix.
template <typename Scalar, typename F>
auto apply_function(const HermitianEig<Scalar>& eig, F&& f) {
    using Result = std::invoke_result_t<F, double>;
    using OutScalar = std::conditional_t<is_complex<Result>::value || is_complex<Scalar>::value,
                                         Complex, double>;
    Vector<OutScalar> fvals(eig.size());
    for (Eigen::Index i = 0; i < eig.size(); ++i) {
        const double lambda = static_cast<double>(eig.values(i));
        const Result value = f(lambda);
        bool finite;
        if constexpr (is_complex<Result>::value) {
            finite = std::isfinite(value.real()) && std::isfinite(value.imag());
        } else {
            finite = std::isfinite(value);
        }
        if (!finite) {
            throw Error(ErrorCode::DomainError,
                        "matrix function undefined at eigenvalue " + std::to_string(lambda));
        }
        fvals(i) = OutScalar(value);
    }
    const Matrix<OutScalar> v = eig.vectors.template cast<OutScalar>();
    Matrix<OutScalar> out = v * fvals.asDiagonal() * v.adjoint();
    if constexpr (!is_complex<Result>::value) {
        out = (out + out.adjoint()).eval() / 2.0;
    }
    return out;
}

/// f(G) for Hermitian G through its eigendecomposition.
template <typename Derived, typename F>
auto matrix_function_hermitian(const Eigen::MatrixBase<Derived>& g, F&& f) {
    return apply_function(hermitian_eig(g), std::forward<F>(f));
}

} // namespace qspec
