#include "qspec/discretize.hpp"

#include <cmath>
#include <numbers>

namespace qspec {

std::string_view to_string(BasisKind kind) {
    switch (kind) {
    case BasisKind::UniformGrid: return "UniformGrid";
    case BasisKind::FourierGrid: return "FourierGrid";
    case BasisKind::Hermite: return "Hermite";
    }
    return "?";
}

BasisKind basis_kind_from_string(std::string_view name) {
    if (name == "UniformGrid") return BasisKind::UniformGrid;
    if (name == "FourierGrid") return BasisKind::FourierGrid;
    if (name == "Hermite") return BasisKind::Hermite;
    throw Error(ErrorCode::InvalidBasis, "unknown basis kind '" + std::string(name) + "'");
}

std::string_view to_string(Provenance tag) {
    switch (tag) {
    case Provenance::Paper: return "PAPER";
    case Provenance::Trivial: return "TRIVIAL";
    case Provenance::Derived: return "DERIVED";
    }
    return "?";
}

void BasisSpec::validate() const {
    if (n < 2) throw Error(ErrorCode::InvalidBasis, "basis size must be at least 2");
    if (!(L > 0.0) || !std::isfinite(L)) {
        throw Error(ErrorCode::InvalidBasis, "domain parameter L must be positive and finite");
    }
    if (kind == BasisKind::FourierGrid && n % 2 != 0) {
        throw Error(ErrorCode::InvalidBasis, "FourierGrid needs an even number of nodes");
    }
}

double BasisSpec::spacing() const {
    switch (kind) {
    case BasisKind::UniformGrid: return 2.0 * L / double(n - 1);
    case BasisKind::FourierGrid: return 2.0 * L / double(n);
    case BasisKind::Hermite: return 0.0;
    }
    return 0.0;
}

RealVector BasisSpec::nodes() const {
    validate();
    if (kind == BasisKind::Hermite) {
        return hermitian_eig(position_operator(*this).matrix).values;
    }
    const double h = spacing();
    RealVector x(n);
    for (Eigen::Index j = 0; j < n; ++j) x(j) = -L + h * double(j);
    if (kind == BasisKind::UniformGrid) x(n - 1) = L;
    return x;
}

LinearOperator::LinearOperator(ComplexMatrix m, BasisSpec b, std::string lbl)
    : matrix(std::move(m)), basis(b), label(std::move(lbl)) {
    if (matrix.rows() != matrix.cols() || matrix.rows() != basis.n) {
        throw Error(ErrorCode::DimensionMismatch,
                    "operator '" + label + "' is " + std::to_string(matrix.rows()) + "x" +
                        std::to_string(matrix.cols()) + " but basis size is " +
                        std::to_string(basis.n));
    }
}

LinearOperator identity_operator(const BasisSpec& basis) {
    basis.validate();
    return {ComplexMatrix::Identity(basis.n, basis.n), basis, "I"};
}

LinearOperator position_operator(const BasisSpec& basis) {
    basis.validate();
    const Eigen::Index n = basis.n;
    ComplexMatrix x = ComplexMatrix::Zero(n, n);
    if (basis.kind == BasisKind::Hermite) {
        for (Eigen::Index m = 0; m + 1 < n; ++m) {
            const double e = std::sqrt(double(m + 1) / 2.0) * basis.L;
            x(m, m + 1) = e;
            x(m + 1, m) = e;
        }
    } else {
        x.diagonal() = basis.nodes().cast<Complex>();
    }
    return {std::move(x), basis, "X"};
}

namespace {

ComplexMatrix fourier_derivative(const BasisSpec& basis) {
    const Eigen::Index n = basis.n;
    const double h = basis.spacing();
    const double dk = std::numbers::pi / basis.L;
    // D(j, l) depends on j - l only: (1/n) Σ_m i k_m exp(i k_m (j - l) h).
    ComplexVector by_offset(2 * n - 1);
    for (Eigen::Index d = -(n - 1); d <= n - 1; ++d) {
        Complex acc{0.0, 0.0};
        for (Eigen::Index m = -n / 2; m < n / 2; ++m) {
            const double k = dk * double(m);
            acc += Complex(0.0, k) * std::exp(Complex(0.0, k * double(d) * h));
        }
        by_offset(d + n - 1) = acc / double(n);
    }
    ComplexMatrix out(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index l = 0; l < n; ++l) out(j, l) = by_offset(j - l + n - 1);
    }
    return out;
}

} // namespace

LinearOperator derivative_operator(const BasisSpec& basis) {
    basis.validate();
    const Eigen::Index n = basis.n;
    ComplexMatrix d = ComplexMatrix::Zero(n, n);
    switch (basis.kind) {
    case BasisKind::FourierGrid:
        d = fourier_derivative(basis);
        break;
    case BasisKind::UniformGrid: {
        // Rows 0 and n-1 stay zero: the truncation of ℝ has no natural boundary rule.
        const double c = 1.0 / (2.0 * basis.spacing());
        for (Eigen::Index j = 1; j + 1 < n; ++j) {
            d(j, j + 1) = c;
            d(j, j - 1) = -c;
        }
        break;
    }
    case BasisKind::Hermite:
        for (Eigen::Index m = 0; m + 1 < n; ++m) {
            const double e = std::sqrt(double(m + 1) / 2.0) / basis.L;
            d(m, m + 1) = e;
            d(m + 1, m) = -e;
        }
        break;
    }
    return {std::move(d), basis, "D"};
}

LinearOperator momentum_operator(const BasisSpec& basis) {
    return {Complex(0.0, -1.0) * derivative_operator(basis).matrix, basis, "P"};
}

LinearOperator multiplication_operator(const BasisSpec& basis, const ScalarFunction& f,
                                       std::string label) {
    basis.validate();
    const Eigen::Index n = basis.n;
    if (basis.kind != BasisKind::Hermite) {
        const RealVector x = basis.nodes();
        ComplexVector diag(n);
        for (Eigen::Index j = 0; j < n; ++j) {
            const Complex value = f(x(j));
            if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
                throw Error(ErrorCode::DomainError,
                            label + ": non-finite value at node " + std::to_string(x(j)));
            }
            diag(j) = value;
        }
        return {ComplexMatrix(diag.asDiagonal()), basis, std::move(label)};
    }

    const auto eig = hermitian_eig(position_operator(basis).matrix);
    bool real_valued = true;
    for (Eigen::Index i = 0; i < eig.size(); ++i) {
        if (f(eig.values(i)).imag() != 0.0) {
            real_valued = false;
            break;
        }
    }
    ComplexMatrix m = real_valued ? apply_function(eig, [&](double x) { return f(x).real(); })
                                  : apply_function(eig, f);
    return {std::move(m), basis, std::move(label)};
}

ComplexMatrix rank_one_matrix(const ComplexVector& u, const ComplexVector& v) {
    if (u.size() != v.size()) {
        throw Error(ErrorCode::DimensionMismatch, "rank_one: vectors differ in length");
    }
    if (u.norm() == 0.0 || v.norm() == 0.0) {
        throw Error(ErrorCode::ZeroVector, "rank_one: u and v must be nonzero");
    }
    return u * v.adjoint();
}

LinearOperator rank_one(const ComplexVector& u, const ComplexVector& v, const BasisSpec& basis) {
    return {rank_one_matrix(u, v), basis, "rank_one"};
}

LinearOperator shifted_oscillator(double alpha, double omega, const BasisSpec& basis) {
    basis.validate();
    if (basis.kind != BasisKind::Hermite) {
        throw Error(ErrorCode::BasisMismatch, "shifted_oscillator needs a Hermite basis");
    }
    if (!(omega > 0.0)) throw Error(ErrorCode::DomainError, "oscillator frequency must be positive");
    const Eigen::Index n = basis.n;
    const ComplexMatrix x = position_operator(basis).matrix;
    const ComplexMatrix shifted =
        momentum_operator(basis).matrix - Complex(0.0, alpha) * ComplexMatrix::Identity(n, n);
    ComplexMatrix h = 0.5 * shifted * shifted + 0.5 * omega * omega * x * x;
    return {std::move(h), basis, "oscillator"};
}

ComplexVector gaussian_state(const BasisSpec& basis) {
    basis.validate();
    ComplexVector phi = ComplexVector::Zero(basis.n);
    if (basis.kind == BasisKind::Hermite) {
        phi(0) = 1.0;
        return phi;
    }
    const RealVector x = basis.nodes();
    for (Eigen::Index j = 0; j < basis.n; ++j) phi(j) = std::exp(-0.5 * x(j) * x(j));
    const double norm = phi.norm();
    if (norm == 0.0) throw Error(ErrorCode::ZeroVector, "Gaussian samples underflow on this grid");
    return phi / norm;
}

std::vector<Eigen::Index> interior_rows(const BasisSpec& basis) {
    std::vector<Eigen::Index> rows;
    const bool trim = basis.kind == BasisKind::UniformGrid;
    for (Eigen::Index j = trim ? 1 : 0; j < (trim ? basis.n - 1 : basis.n); ++j) rows.push_back(j);
    return rows;
}

std::vector<std::string> example_names() { return {"projection", "derivative", "oscillator"}; }

namespace {

Complex inverse_one_plus_square(double x) { return 1.0 / (1.0 + x * x); }
Complex one_plus_square(double x) { return 1.0 + x * x; }

ExamplePair projection_pair(const BasisSpec& basis) {
    const ComplexVector phi = gaussian_state(basis);
    LinearOperator t = multiplication_operator(basis, inverse_one_plus_square, "T");
    const LinearOperator t_inv = multiplication_operator(basis, one_plus_square, "T^-1");
    const ComplexVector u = t.matrix * phi;
    const ComplexVector v = t_inv.matrix * phi;

    ExamplePair pair;
    pair.name = "projection";
    pair.A = LinearOperator(rank_one_matrix(phi, phi), basis, "P_phi");
    pair.B = LinearOperator(rank_one_matrix(u, v), basis, "A_phi");
    pair.T = std::move(t);
    pair.vectors = {{"phi", phi}, {"u", u}, {"v", v}};
    pair.expected = {
        {"spectrum", "sigma(P_phi) = sigma(A_phi) = {0, 1}", {0.0, 1.0}, Provenance::Paper},
        {"norm_A_phi", "||A_phi|| = ||u|| ||v||", {u.norm() * v.norm()}, Provenance::Paper},
        {"intertwining", "A_phi T - T P_phi = 0", {0.0}, Provenance::Derived},
        {"pseudospectrum", "sigma_eps(P_phi) = two disks of radius eps around 0 and 1", {},
         Provenance::Paper},
        {"numerical_range", "Theta(P_phi) = [0, 1]", {0.0, 1.0}, Provenance::Paper},
    };
    return pair;
}

ExamplePair derivative_pair(const BasisSpec& basis) {
    if (basis.kind == BasisKind::Hermite) {
        throw Error(ErrorCode::BasisMismatch, "derivative example needs a grid basis");
    }
    const LinearOperator d = derivative_operator(basis);
    const LinearOperator potential = multiplication_operator(
        basis, [](double x) { return Complex(2.0 * x / (1.0 + x * x)); }, "2x/(1+x^2)");

    ExamplePair pair;
    pair.name = "derivative";
    pair.A = LinearOperator(d.matrix - potential.matrix, basis, "A");
    pair.B = LinearOperator(d.matrix, basis, "B");
    pair.T = multiplication_operator(basis, inverse_one_plus_square, "T");
    pair.expected = {
        {"spectrum", "sigma(A) = sigma(B) = iR (finite section of the imaginary axis)", {},
         Provenance::Paper},
        {"pseudospectrum_B", "sigma_eps(B) is the strip |Re z| <= eps", {}, Provenance::Paper},
        {"intertwining", "interior residual of BT - TA vanishes as h -> 0", {0.0},
         Provenance::Derived},
    };
    return pair;
}

ExamplePair oscillator_pair(const BasisSpec& basis, const ExampleOptions& opt) {
    if (basis.kind != BasisKind::Hermite) {
        throw Error(ErrorCode::BasisMismatch, "oscillator example needs a Hermite basis");
    }
    ExamplePair pair;
    pair.name = "oscillator";
    pair.A = shifted_oscillator(opt.alpha, opt.omega, basis);
    pair.B = shifted_oscillator(0.0, opt.omega, basis);
    pair.B.label = "harmonic";
    const double alpha = opt.alpha;
    pair.T = multiplication_operator(
        basis, [alpha](double x) { return Complex(std::exp(alpha * x)); }, "W");
    std::vector<double> levels;
    for (int k = 0; k < 5; ++k) levels.push_back(opt.omega * (k + 0.5));
    pair.expected = {
        {"low_levels", "lowest eigenvalues omega (k + 1/2)", levels, Provenance::Derived},
        {"physical_hamiltonian", "h = W H W^-1 is the harmonic oscillator", {},
         Provenance::Paper},
    };
    return pair;
}

} // namespace

ExamplePair example_pair(std::string_view name, const BasisSpec& basis,
                         const ExampleOptions& options) {
    basis.validate();
    if (name == "projection") return projection_pair(basis);
    if (name == "derivative") return derivative_pair(basis);
    if (name == "oscillator") return oscillator_pair(basis, options);
    throw Error(ErrorCode::UnknownExample, "no example named '" + std::string(name) + "'");
}

} // namespace qspec
