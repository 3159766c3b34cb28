#pragma once

#include <array>
#include <string_view>

#include "qspec/discretize.hpp"
#include "qspec/linalg.hpp"

namespace qspec {

/// Hermitian positive-definite matrix G with its eigendecomposition cached.
class MetricOperator {
public:
    explicit MetricOperator(const ComplexMatrix& m);

    const ComplexMatrix& matrix() const { return matrix_; }
    const HermitianEig<Complex>& eig() const { return eig_; }
    Eigen::Index size() const { return matrix_.rows(); }
    double min_eigenvalue() const { return eig_.values(0); }
    double max_eigenvalue() const { return eig_.values(eig_.size() - 1); }
    /// max/min eigenvalue.
    double condition() const { return max_eigenvalue() / min_eigenvalue(); }

    /// G^α through the cached eigendecomposition.
    ComplexMatrix power(double alpha) const;
    ComplexMatrix sqrt() const { return power(0.5); }
    ComplexMatrix inv_sqrt() const { return power(-0.5); }
    ComplexMatrix inverse() const { return power(-1.0); }

    /// The metric G⁻¹.
    MetricOperator inverted() const;

private:
    ComplexMatrix matrix_;
    HermitianEig<Complex> eig_;
};

MetricOperator make_metric(const ComplexMatrix& m);

/// G = f(X) for the position operator X of a basis, e.g. exp(2αx).
MetricOperator metric_from_position(const BasisSpec& basis, const ScalarFunction& f);

/// The nine spaces generated by G, from the smallest (Meet) to the largest (Join).
enum class LatticeNode {
    Meet,           // H(G) ∩ H(G⁻¹)
    GraphInverse,   // H(R_{G⁻¹})
    Graph,          // H(R_G)
    Base,           // H
    InverseMetric,  // H(G⁻¹)
    Metric,         // H(G)
    DualGraph,      // H(R_G⁻¹) = H + H(G⁻¹)
    DualGraphInverse,  // H(R_{G⁻¹}⁻¹) = H + H(G)
    Join,           // H(G) + H(G⁻¹)
};

inline constexpr std::array<LatticeNode, 9> kLatticeNodes = {
    LatticeNode::Meet,          LatticeNode::GraphInverse,  LatticeNode::Graph,
    LatticeNode::Base,          LatticeNode::InverseMetric, LatticeNode::Metric,
    LatticeNode::DualGraph,     LatticeNode::DualGraphInverse, LatticeNode::Join,
};

std::string_view to_string(LatticeNode node);
LatticeNode lattice_node_from_string(std::string_view name);

struct LatticeEdge {
    LatticeNode from;  // continuously embedded into `to`
    LatticeNode to;
};

/// The twelve embeddings drawn as arrows in the lattice diagram.
const std::array<LatticeEdge, 12>& lattice_edges();

/// Weight W with ‖ξ‖_node = ‖W^{1/2} ξ‖.
MetricOperator node_weight(LatticeNode node, const MetricOperator& g);

double node_norm(LatticeNode node, const MetricOperator& g, const ComplexVector& xi);

/// Smallest c with ‖ξ‖_to ≤ c ‖ξ‖_from for all ξ: ‖W_to^{1/2} W_from^{-1/2}‖.
double embedding_constant(LatticeNode from, LatticeNode to, const MetricOperator& g);

enum class ScaleNormVariant {
    Graph,  // ‖ξ‖² + ‖G^{α/2}ξ‖²
    Power,  // ‖(I+G)^{α/2}ξ‖²
};

double scale_norm(const MetricOperator& g, double alpha, const ComplexVector& xi,
                  ScaleNormVariant variant = ScaleNormVariant::Graph);

/// ⟨G^{1/2}ξ, G^{-1/2}η⟩, linear in ξ.
Complex pip_pairing(const MetricOperator& g, const ComplexVector& xi, const ComplexVector& eta);

/// Representative of A from node `from` to node `to` in orthonormal coordinates:
/// W_to^{1/2} A W_from^{-1/2}.
ComplexMatrix representative(const ComplexMatrix& a, LatticeNode from, LatticeNode to,
                             const MetricOperator& g);
/// Identity embedding E_{to,from} = W_to^{1/2} W_from^{-1/2}.
ComplexMatrix embedding(LatticeNode from, LatticeNode to, const MetricOperator& g);

double representative_norm(const LinearOperator& a, LatticeNode from, LatticeNode to,
                           const MetricOperator& g);

} // namespace qspec
