#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "qspec/discretize.hpp"
#include "qspec/metric.hpp"
#include "qspec/report.hpp"

namespace qspec {

inline constexpr double kIntertwineTolerance = 1e-8;
inline constexpr double kSimilarityConditionThreshold = 1e6;

enum class Relation { Similar, QuasiSimilar, NotIntertwining };
std::string_view to_string(Relation relation);

struct IntertwinerReport {
    double residual = 0.0;          // ‖BT − TA‖ / (‖T‖(‖A‖+‖B‖))
    double reverse_residual = 0.0;  // ‖AT⁻¹ − T⁻¹B‖ / (‖T⁻¹‖(‖A‖+‖B‖))
    double T_norm = 0.0;
    double T_min_singular = 0.0;
    double tau = 0.0;               // ‖T‖ ‖T⁻¹‖
    double tol = kIntertwineTolerance;
    double cond_threshold = kSimilarityConditionThreshold;
    Relation classification = Relation::NotIntertwining;
};

/// ‖BT − TA‖ / (‖T‖ (‖A‖ + ‖B‖)); zero iff T intertwines A into B.
double intertwine_residual(const LinearOperator& a, const LinearOperator& b,
                           const LinearOperator& t);

/// Residual of BT − TA restricted to test vectors and to the interior rows of the basis:
/// max_f ‖[(BT − TA) f]_interior‖ / (‖T‖ ‖f‖). Grid discretizations of unbounded
/// operators converge only in this sense.
double intertwine_residual_sampled(const LinearOperator& a, const LinearOperator& b,
                                   const LinearOperator& t, std::span<const ComplexVector> samples);

IntertwinerReport classify(const LinearOperator& a, const LinearOperator& b,
                           const LinearOperator& t, double tol = kIntertwineTolerance,
                           double cond_threshold = kSimilarityConditionThreshold);

/// G^{1/2} A G^{-1/2}.
LinearOperator similarity_transform(const LinearOperator& a, const MetricOperator& g);

/// ‖GA − A†G‖ / (‖G‖ ‖A‖).
double dieudonne_residual(const LinearOperator& a, const MetricOperator& g);

/// max over sample pairs of |⟨Aξ, Gη⟩ − ⟨Gξ, Aη⟩| / (‖A‖ ‖G‖ ‖ξ‖ ‖η‖).
double form_residual(const LinearOperator& a, const MetricOperator& g,
                     std::span<const ComplexVector> samples);

/// A = G^{-1/2} K G^{1/2} for Hermitian K: quasi-self-adjoint with respect to G.
LinearOperator make_quasi_self_adjoint(const LinearOperator& k, const MetricOperator& g);

struct PhysicalSystem {
    LinearOperator h;                 // G^{1/2} H G^{-1/2}
    double hermiticity_residual = 0;  // ‖h − h†‖ / ‖h‖
    double tol = 0;
    bool constructed = false;         // residual ≤ tol
};

PhysicalSystem physical_hamiltonian(const LinearOperator& h, const MetricOperator& g,
                                    double tol = 1e-8);

/// Relative Hermiticity defect of an operator, ‖A − A†‖ / ‖A‖.
double hermiticity_residual(const LinearOperator& a);

/// Report wrapping classify(); on finite bases strict quasi-Hermiticity coincides
/// with quasi-Hermiticity, which the report notes.
VerificationReport classification_report(const LinearOperator& a, const LinearOperator& b,
                                         const LinearOperator& t,
                                         double tol = kIntertwineTolerance,
                                         double cond_threshold = kSimilarityConditionThreshold);

} // namespace qspec
