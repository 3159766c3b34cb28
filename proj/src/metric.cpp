#include "qspec/metric.hpp"

#include <cmath>
#include <string>

namespace qspec {

namespace {

void require_dim(const MetricOperator& g, Eigen::Index n, const char* what) {
    if (g.size() != n) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + ": metric is " + std::to_string(g.size()) +
                        "-dimensional, argument is " + std::to_string(n));
    }
}

} // namespace

MetricOperator::MetricOperator(const ComplexMatrix& m) {
    require_square(m, "make_metric");
    eig_ = hermitian_eig(m);
    if (!(eig_.values(0) > 0.0)) {
        throw Error(ErrorCode::NotPositive,
                    "minimum eigenvalue " + std::to_string(eig_.values(0)) + " is not positive");
    }
    matrix_ = (m + m.adjoint()) / 2.0;
}

ComplexMatrix MetricOperator::power(double alpha) const {
    if (alpha == 0.0) return ComplexMatrix::Identity(size(), size());
    if (alpha == 1.0) return matrix_;
    return apply_function(eig_, [alpha](double x) { return std::pow(x, alpha); });
}

MetricOperator MetricOperator::inverted() const { return MetricOperator(inverse()); }

MetricOperator make_metric(const ComplexMatrix& m) { return MetricOperator(m); }

MetricOperator metric_from_position(const BasisSpec& basis, const ScalarFunction& f) {
    return MetricOperator(multiplication_operator(basis, f, "G").matrix);
}

std::string_view to_string(LatticeNode node) {
    switch (node) {
    case LatticeNode::Meet: return "MEET";
    case LatticeNode::GraphInverse: return "H(R_Ginv)";
    case LatticeNode::Graph: return "H(R_G)";
    case LatticeNode::Base: return "H";
    case LatticeNode::InverseMetric: return "H(Ginv)";
    case LatticeNode::Metric: return "H(G)";
    case LatticeNode::DualGraph: return "H(R_G^-1)";
    case LatticeNode::DualGraphInverse: return "H(R_Ginv^-1)";
    case LatticeNode::Join: return "JOIN";
    }
    return "?";
}

LatticeNode lattice_node_from_string(std::string_view name) {
    for (LatticeNode node : kLatticeNodes) {
        if (to_string(node) == name) return node;
    }
    throw Error(ErrorCode::ConfigError, "unknown lattice node '" + std::string(name) + "'");
}

const std::array<LatticeEdge, 12>& lattice_edges() {
    using N = LatticeNode;
    static const std::array<LatticeEdge, 12> edges = {{
        {N::Meet, N::GraphInverse},
        {N::Meet, N::Graph},
        {N::GraphInverse, N::InverseMetric},
        {N::GraphInverse, N::Base},
        {N::Graph, N::Base},
        {N::Graph, N::Metric},
        {N::InverseMetric, N::DualGraph},
        {N::Base, N::DualGraph},
        {N::Base, N::DualGraphInverse},
        {N::Metric, N::DualGraphInverse},
        {N::DualGraph, N::Join},
        {N::DualGraphInverse, N::Join},
    }};
    return edges;
}

MetricOperator node_weight(LatticeNode node, const MetricOperator& g) {
    const Eigen::Index n = g.size();
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    // Form sums of positive matrices are plain sums; X ∨ Y = (X⁻¹ + Y⁻¹)⁻¹.
    const auto weight_from_spectrum = [&](auto&& f) {
        return MetricOperator(apply_function(g.eig(), f));
    };
    switch (node) {
    case LatticeNode::Base: return MetricOperator(id);
    case LatticeNode::Metric: return g;
    case LatticeNode::InverseMetric:
        return weight_from_spectrum([](double x) { return 1.0 / x; });
    case LatticeNode::Graph: return weight_from_spectrum([](double x) { return 1.0 + x; });
    case LatticeNode::GraphInverse:
        return weight_from_spectrum([](double x) { return 1.0 + 1.0 / x; });
    case LatticeNode::DualGraph:
        return weight_from_spectrum([](double x) { return 1.0 / (1.0 + x); });
    case LatticeNode::DualGraphInverse:
        return weight_from_spectrum([](double x) { return 1.0 / (1.0 + 1.0 / x); });
    case LatticeNode::Meet: return weight_from_spectrum([](double x) { return x + 1.0 / x; });
    case LatticeNode::Join:
        return weight_from_spectrum([](double x) { return 1.0 / (1.0 / x + x); });
    }
    return MetricOperator(id);
}

double node_norm(LatticeNode node, const MetricOperator& g, const ComplexVector& xi) {
    require_dim(g, xi.size(), "node_norm");
    return (node_weight(node, g).sqrt() * xi).norm();
}

ComplexMatrix embedding(LatticeNode from, LatticeNode to, const MetricOperator& g) {
    return node_weight(to, g).sqrt() * node_weight(from, g).inv_sqrt();
}

double embedding_constant(LatticeNode from, LatticeNode to, const MetricOperator& g) {
    return operator_norm(embedding(from, to, g));
}

double scale_norm(const MetricOperator& g, double alpha, const ComplexVector& xi,
                  ScaleNormVariant variant) {
    require_dim(g, xi.size(), "scale_norm");
    if (!std::isfinite(alpha)) throw Error(ErrorCode::DomainError, "scale index must be finite");
    if (variant == ScaleNormVariant::Power) {
        const ComplexMatrix w =
            apply_function(g.eig(), [alpha](double x) { return std::pow(1.0 + x, alpha / 2.0); });
        return (w * xi).norm();
    }
    const double plain = xi.squaredNorm();
    const double weighted = (g.power(alpha / 2.0) * xi).squaredNorm();
    return std::sqrt(plain + weighted);
}

Complex pip_pairing(const MetricOperator& g, const ComplexVector& xi, const ComplexVector& eta) {
    require_dim(g, xi.size(), "pip_pairing");
    require_dim(g, eta.size(), "pip_pairing");
    const ComplexVector left = g.sqrt() * xi;
    const ComplexVector right = g.inv_sqrt() * eta;
    // ⟨a, b⟩ = b† a
    return right.dot(left);
}

ComplexMatrix representative(const ComplexMatrix& a, LatticeNode from, LatticeNode to,
                             const MetricOperator& g) {
    require_dim(g, a.rows(), "representative");
    require_square(a, "representative");
    return node_weight(to, g).sqrt() * a * node_weight(from, g).inv_sqrt();
}

double representative_norm(const LinearOperator& a, LatticeNode from, LatticeNode to,
                           const MetricOperator& g) {
    return operator_norm(representative(a.matrix, from, to, g));
}

} // namespace qspec
