#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <vector>

#include <json.hpp>

#include "qspec/discretize.hpp"
#include "qspec/linalg.hpp"
#include "qspec/report.hpp"
#include "qspec/simquasi.hpp"

namespace qspec {

/// Eigenvalues clustered by single linkage at radius cluster_tol.
struct Spectrum {
    ComplexVector eigenvalues;       // cluster representatives (cluster means)
    std::vector<int> multiplicities; // cluster sizes, summing to the dimension
    double cluster_tol = 0.0;
    ComplexVector raw;               // unclustered eigenvalues

    Eigen::Index dimension() const { return raw.size(); }
    /// min_λ |z − λ| over the unclustered eigenvalues.
    double distance(Complex z) const;
};

/// 10⁻⁶ · max(1, ‖A‖).
double default_cluster_tol(const ComplexMatrix& a);

Spectrum spectrum(const ComplexMatrix& a, std::optional<double> cluster_tol = std::nullopt);
Spectrum spectrum(const LinearOperator& a, std::optional<double> cluster_tol = std::nullopt);

struct Region {
    double re_min = -1.0;
    double re_max = 1.0;
    double im_min = -1.0;
    double im_max = 1.0;

    bool operator==(const Region&) const = default;
};

struct Resolution {
    Eigen::Index n_re = 2;
    Eigen::Index n_im = 2;

    bool operator==(const Resolution&) const = default;
};

using Cell = std::array<Eigen::Index, 2>;  // (i along Re, j along Im)

/// Samples of s_min(A − zI) on a rectangular lattice z_ij = re_i + i·im_j,
/// endpoints included.
struct PseudospectrumGrid {
    Region region;
    Resolution resolution;
    RealMatrix smin;  // n_re × n_im
    std::vector<double> eps_levels;
    std::vector<Cell> failures;

    double re_step() const;
    double im_step() const;
    double max_step() const { return std::max(re_step(), im_step()); }
    Complex point(Eigen::Index i, Eigen::Index j) const;
    /// Cells with smin < eps (the strict pseudospectrum definition).
    std::vector<Cell> level_set(double eps) const;
    bool congruent(const PseudospectrumGrid& other) const;
};

/// Value stored for a grid point where every solver failed; listed in `failures`.
inline constexpr double kFailedPoint = std::numeric_limits<double>::max();

struct GridOptions {
    unsigned workers = 1;  // 0: hardware concurrency
    SminOptions smin{};
};

PseudospectrumGrid pseudospectrum(const ComplexMatrix& a, const Region& region,
                                  const Resolution& resolution, std::vector<double> eps_levels,
                                  const GridOptions& options = {});
PseudospectrumGrid pseudospectrum(const LinearOperator& a, const Region& region,
                                  const Resolution& resolution, std::vector<double> eps_levels,
                                  const GridOptions& options = {});

struct RankOneNorms {
    double norm = 0.0;      // ‖aI + b u v†‖
    double smallest = 0.0;  // s_min(aI + b u v†)
};

/// Exact singular extremes of aI + b·(u ⊗ v̄): the operator acts as aI on
/// span{u, v}⊥ and as a 2×2 matrix on span{u, v}.
RankOneNorms rank_one_resolvent_norm(Complex a, Complex b, const ComplexVector& u,
                                     const ComplexVector& v);

/// Boundary of the numerical range by the rotation method: for each angle θ the
/// top eigenvector ξ_θ of (e^{iθ}A + e^{−iθ}A†)/2 gives the support value and
/// the boundary point ⟨Aξ_θ, ξ_θ⟩.
struct NumericalRangeBoundary {
    std::vector<double> angles;
    std::vector<double> support_values;
    std::vector<Complex> boundary_points;
    std::vector<Complex> hull;  // convex hull of boundary_points, counter-clockwise

    /// Distance from z to the closed polygon spanned by the boundary points.
    double distance(Complex z) const;
    /// Largest violation of Re(e^{iθ} z) ≤ support(θ) over the sampled angles.
    double support_excess(Complex z) const;
    double max_modulus() const;
};

NumericalRangeBoundary numerical_range(const ComplexMatrix& a, int n_angles);
NumericalRangeBoundary numerical_range(const LinearOperator& a, int n_angles);

/// σ_{ε/τ}(B) ⊆ σ_ε(A) ⊆ σ_{ετ}(B) cellwise with one-cell slack; requires A ∼ B via T.
VerificationReport inclusion_check(const LinearOperator& a, const LinearOperator& b,
                                   const LinearOperator& t, double eps,
                                   const PseudospectrumGrid& grid_a,
                                   const PseudospectrumGrid& grid_b,
                                   double tol = kIntertwineTolerance,
                                   double cond_threshold = kSimilarityConditionThreshold);

/// {dist(z, σ) < ε} ⊆ σ_ε(A) ⊆ {dist(z, Θ̄) < ε} on the grid. The lower inclusion
/// decides the verdict alone when `require_upper` is false.
VerificationReport sandwich_check(const LinearOperator& a, double eps, const Spectrum& spec,
                                  const NumericalRangeBoundary& nr,
                                  const PseudospectrumGrid& grid, bool require_upper = true);

struct TrivialityReport {
    std::vector<double> eps_levels;
    std::vector<double> C_estimates;       // max dist(z, σ)/ε over cells with smin < ε
    std::vector<std::size_t> cell_counts;  // cells in each level set
    double C_max = 10.0;
    double grid_step = 0.0;
    Region window;
    bool trivial = false;
};

TrivialityReport triviality_fit(const Spectrum& spec, const PseudospectrumGrid& grid,
                                double C_max = 10.0);

/// From ‖(A − z)ξ‖ < ε‖ξ‖ build η = Tξ and check ‖(B − z)η‖ < ε ‖T‖ ‖T⁻¹η‖. With
/// `discretization_slack` the measured ‖(BT − TA)ξ‖ is added to the right-hand side.
VerificationReport qs_witness(const LinearOperator& a, const LinearOperator& b,
                              const LinearOperator& t, Complex z, double eps,
                              bool discretization_slack = false);

// Exports. Numbers are written with 17 significant digits.
void write_grid_csv(std::ostream& out, const PseudospectrumGrid& grid);
nlohmann::json level_sets_json(const PseudospectrumGrid& grid);
void write_numerical_range_csv(std::ostream& out, const NumericalRangeBoundary& nr);
nlohmann::json to_json(const Spectrum& spec);
nlohmann::json to_json(const TrivialityReport& report);

} // namespace qspec
