#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qspec/linalg.hpp"

namespace qspec {

enum class BasisKind { UniformGrid, FourierGrid, Hermite };

std::string_view to_string(BasisKind kind);
BasisKind basis_kind_from_string(std::string_view name);

/// Finite basis on which operators on L²(ℝ) are represented.
///
/// UniformGrid: n nodes -L..L including both ends.
/// FourierGrid: n (even) periodic nodes -L, -L+h, ..., L-h with h = 2L/n.
/// Hermite: first n harmonic-oscillator eigenfunctions; L is the length scale.
struct BasisSpec {
    BasisKind kind = BasisKind::UniformGrid;
    Eigen::Index n = 2;
    double L = 1.0;

    void validate() const;
    /// Grid nodes; for Hermite the Gauss-Hermite nodes (eigenvalues of X).
    RealVector nodes() const;
    /// Node spacing for grids, 0 for Hermite.
    double spacing() const;

    bool operator==(const BasisSpec&) const = default;
};

/// Dense operator tagged with the basis it lives on.
struct LinearOperator {
    ComplexMatrix matrix;
    BasisSpec basis;
    std::string label;

    LinearOperator() = default;
    LinearOperator(ComplexMatrix m, BasisSpec b, std::string lbl);

    Eigen::Index size() const { return matrix.rows(); }
};

using ScalarFunction = std::function<Complex(double)>;

LinearOperator identity_operator(const BasisSpec& basis);
LinearOperator position_operator(const BasisSpec& basis);
/// d/dx: spectral on FourierGrid, central differences with zero boundary rows
/// on UniformGrid, (a − a†)/(√2 L) on Hermite.
LinearOperator derivative_operator(const BasisSpec& basis);
/// p = −i d/dx.
LinearOperator momentum_operator(const BasisSpec& basis);
/// f(Q): diagonal on grids, f(X) through the eigendecomposition of X on Hermite.
LinearOperator multiplication_operator(const BasisSpec& basis, const ScalarFunction& f,
                                       std::string label = "funcmul");

/// Matrix of x ↦ ⟨x, v⟩ u, i.e. u v†.
ComplexMatrix rank_one_matrix(const ComplexVector& u, const ComplexVector& v);
LinearOperator rank_one(const ComplexVector& u, const ComplexVector& v, const BasisSpec& basis);

/// H = ½(P − iαI)² + ½ω²X² on a Hermite basis.
LinearOperator shifted_oscillator(double alpha, double omega, const BasisSpec& basis);

/// Normalized exp(−x²/2) samples on grids; the ground state e₀ on Hermite.
ComplexVector gaussian_state(const BasisSpec& basis);

/// Rows that carry the discretized operator faithfully: all rows except the two
/// boundary rows on UniformGrid.
std::vector<Eigen::Index> interior_rows(const BasisSpec& basis);

enum class Provenance { Paper, Trivial, Derived };
std::string_view to_string(Provenance tag);

struct ExpectedFact {
    std::string key;
    std::string statement;
    std::vector<double> values;
    Provenance tag = Provenance::Trivial;
};

/// Worked example triple: B T = T A with intertwiner T.
struct ExamplePair {
    std::string name;
    LinearOperator A;
    LinearOperator B;
    LinearOperator T;
    std::map<std::string, ComplexVector> vectors;
    std::vector<ExpectedFact> expected;
};

struct ExampleOptions {
    double alpha = 0.5;  // oscillator shift
    double omega = 1.0;  // oscillator frequency
};

std::vector<std::string> example_names();

/// projection: (P_φ, A_φ, (I+Q²)⁻¹); derivative: (d/dx − 2x/(1+x²), d/dx, (I+Q²)⁻¹);
/// oscillator: (shifted H, harmonic H₀, W = exp(αX)).
ExamplePair example_pair(std::string_view name, const BasisSpec& basis,
                         const ExampleOptions& options = {});

} // namespace qspec
