#include <gtest/gtest.h>

#include <cmath>

#include "qspec/metric.hpp"
#include "test_util.hpp"

using namespace qspec;

namespace {

ComplexMatrix diag2(double a, double b) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

double min_eigenvalue(const ComplexMatrix& m) { return hermitian_eig(m, 1e-8).values(0); }

} // namespace

TEST(MetricOperator, ConditionNumbers) {
    EXPECT_DOUBLE_EQ(make_metric(ComplexMatrix::Identity(3, 3)).condition(), 1.0);
    EXPECT_NEAR(make_metric(diag2(1, 4)).condition(), 4.0, 1e-14);
}

TEST(MetricOperator, RejectsSemidefiniteAndNonHermitian) {
    try {
        make_metric(diag2(1, 0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotPositive);
    }
    ComplexMatrix m = diag2(1, 2);
    m(0, 1) = 1.0;
    try {
        make_metric(m);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotHermitian);
    }
}

TEST(MetricOperator, PowersAndInverse) {
    testutil::Rng rng(1);
    const MetricOperator g(rng.positive(8, 100.0));
    EXPECT_LT(operator_norm(g.sqrt() * g.sqrt() - g.matrix()), 1e-12 * operator_norm(g.matrix()));
    EXPECT_LT(operator_norm(g.inverse() * g.matrix() - ComplexMatrix::Identity(8, 8)), 1e-12 * g.condition());
    EXPECT_LT(operator_norm(g.inv_sqrt() * g.sqrt() - ComplexMatrix::Identity(8, 8)), 1e-12 * g.condition());
    const MetricOperator gi = g.inverted();
    EXPECT_NEAR(gi.condition(), g.condition(), 1e-9 * g.condition());
}

TEST(MetricFromPosition, ExponentialMetricOnHermiteBasis) {
    BasisSpec basis;
    basis.kind = BasisKind::Hermite;
    basis.n = 20;
    const MetricOperator g = metric_from_position(basis, [](double x) { return Complex(std::exp(x)); });
    EXPECT_GT(g.min_eigenvalue(), 0.0);
    const RealVector x = hermitian_eig(position_operator(basis).matrix).values;
    EXPECT_NEAR(g.max_eigenvalue() / std::exp(x(19)), 1.0, 1e-10);
}

TEST(NodeWeight, IdentityMetricCollapsesTheLattice) {
    const MetricOperator g(ComplexMatrix::Identity(3, 3));
    for (LatticeNode node : kLatticeNodes) {
        const ComplexMatrix w = node_weight(node, g).matrix();
        const double scale = w(0, 0).real();
        EXPECT_LT((w - scale * ComplexMatrix::Identity(3, 3)).norm(), 1e-14) << to_string(node);
        EXPECT_TRUE(std::abs(scale - 1.0) < 1e-14 || std::abs(scale - 2.0) < 1e-14 ||
                    std::abs(scale - 0.5) < 1e-14)
            << to_string(node);
    }
    // With scalar weights the embedding constants are square roots of weight ratios.
    for (const LatticeEdge& e : lattice_edges()) {
        const double wf = node_weight(e.from, g).matrix()(0, 0).real();
        const double wt = node_weight(e.to, g).matrix()(0, 0).real();
        EXPECT_NEAR(embedding_constant(e.from, e.to, g), std::sqrt(wt / wf), 1e-14);
    }
}

TEST(NodeWeight, GraphWeightArithmetic) {
    const MetricOperator g(diag2(1, 4));
    EXPECT_LT((node_weight(LatticeNode::Graph, g).matrix() - diag2(2, 5)).norm(), 1e-14);
    EXPECT_LT((node_weight(LatticeNode::GraphInverse, g).matrix() - diag2(2, 1.25)).norm(), 1e-14);
    EXPECT_LT((node_weight(LatticeNode::Meet, g).matrix() - diag2(2, 4.25)).norm(), 1e-14);
    EXPECT_LT((node_weight(LatticeNode::Join, g).matrix() - diag2(0.5, 1.0 / 4.25)).norm(), 1e-14);
}

TEST(NodeWeight, MeetAndJoinIdentitiesAndOrder) {
    testutil::Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const MetricOperator g(rng.positive(6, 1e3));
        const ComplexMatrix gm = g.matrix(), gi = g.inverse();
        const ComplexMatrix meet = node_weight(LatticeNode::Meet, g).matrix();
        const ComplexMatrix join = node_weight(LatticeNode::Join, g).matrix();
        const double scale = operator_norm(meet);
        EXPECT_LT(operator_norm(meet - (gm + gi)), 1e-12 * scale);
        const ComplexMatrix join_oracle = (gm.inverse() + gi.inverse()).inverse();
        EXPECT_LT(operator_norm(join - join_oracle), 1e-10 * operator_norm(join_oracle));
        for (const ComplexMatrix& d : {ComplexMatrix(meet - gm), ComplexMatrix(meet - gi),
                                       ComplexMatrix(gm - join), ComplexMatrix(gi - join)}) {
            EXPECT_GE(min_eigenvalue(d), -1e-12 * scale);
        }
    }
}

TEST(NodeNorm, ArithmeticExamples) {
    const MetricOperator g(diag2(1, 4));
    const ComplexVector xi = ComplexVector::Ones(2);
    EXPECT_NEAR(node_norm(LatticeNode::Metric, g, xi), std::sqrt(5.0), 1e-14);
    EXPECT_NEAR(node_norm(LatticeNode::Graph, g, xi), std::sqrt(7.0), 1e-14);
    EXPECT_NEAR(node_norm(LatticeNode::Base, g, xi), std::sqrt(2.0), 1e-14);
    const MetricOperator id(ComplexMatrix::Identity(2, 2));
    EXPECT_NEAR(node_norm(LatticeNode::Metric, id, xi), xi.norm(), 1e-15);
}

TEST(NodeNorm, GraphNormIdentityAndIsometry) {
    testutil::Rng rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        const MetricOperator g(rng.positive(10, 1e3));
        const ComplexVector xi = rng.vector(10);
        const double lhs = std::pow(node_norm(LatticeNode::Graph, g, xi), 2);
        const double rhs = xi.squaredNorm() + (g.sqrt() * xi).squaredNorm();
        EXPECT_NEAR(lhs, rhs, 1e-12 * rhs);
        const double g_norm = node_norm(LatticeNode::Metric, g, xi);
        EXPECT_NEAR((g.sqrt() * xi).norm(), g_norm, 1e-13 * g_norm);
    }
}

TEST(NodeNorm, IsANormOnEveryNode) {
    testutil::Rng rng(7);
    const MetricOperator g(rng.positive(6, 50.0));
    for (LatticeNode node : kLatticeNodes) {
        for (int trial = 0; trial < 5; ++trial) {
            const ComplexVector a = rng.vector(6), b = rng.vector(6);
            const Complex c = rng.complex_normal();
            const double na = node_norm(node, g, a), nb = node_norm(node, g, b);
            EXPECT_NEAR(node_norm(node, g, ComplexVector(c * a)), std::abs(c) * na, 1e-12 * na * std::abs(c));
            EXPECT_LE(node_norm(node, g, ComplexVector(a + b)), (na + nb) * (1 + 1e-12));
            EXPECT_GT(na, 0.0);
        }
        EXPECT_EQ(node_norm(node, g, ComplexVector::Zero(6)), 0.0);
    }
}

TEST(Embedding, ConstantsBoundAndAreAttained) {
    testutil::Rng rng(8);
    const MetricOperator g(rng.positive(7, 300.0));
    for (const LatticeEdge& e : lattice_edges()) {
        const double c = embedding_constant(e.from, e.to, g);
        for (int trial = 0; trial < 20; ++trial) {
            const ComplexVector xi = rng.vector(7);
            EXPECT_LE(node_norm(e.to, g, xi), c * node_norm(e.from, g, xi) * (1 + 1e-12));
        }
        // Brute-force oracle: largest generalized eigenvalue of (W_to, W_from).
        const ComplexMatrix wf = node_weight(e.from, g).matrix();
        const ComplexMatrix wt = node_weight(e.to, g).matrix();
        Eigen::GeneralizedSelfAdjointEigenSolver<ComplexMatrix> ges(wt, wf);
        EXPECT_NEAR(c, std::sqrt(ges.eigenvalues().maxCoeff()), 1e-10 * c)
            << to_string(e.from) << " -> " << to_string(e.to);
    }
}

TEST(Lattice, NodeNamesRoundTrip) {
    for (LatticeNode node : kLatticeNodes) EXPECT_EQ(lattice_node_from_string(to_string(node)), node);
    EXPECT_THROW(lattice_node_from_string("H(G^2)"), Error);
    EXPECT_EQ(lattice_edges().size(), 12u);
}

TEST(ScaleNorm, Examples) {
    const MetricOperator g(diag2(1, 4));
    const ComplexVector xi = ComplexVector::Ones(2);
    EXPECT_NEAR(scale_norm(g, 0.0, xi), std::sqrt(2.0) * xi.norm(), 1e-14);
    EXPECT_NEAR(scale_norm(g, 2.0, xi), std::sqrt(19.0), 1e-14);
    EXPECT_NEAR(scale_norm(g, 2.0, xi, ScaleNormVariant::Power), std::sqrt(29.0), 1e-13);
    EXPECT_NEAR(scale_norm(g, 0.0, xi, ScaleNormVariant::Power), xi.norm(), 1e-14);
}

TEST(ScaleNorm, MonotoneInIndexWhenMetricDominatesIdentity) {
    testutil::Rng rng(9);
    const MetricOperator g(rng.positive(8, 100.0));  // eigenvalues ≥ 1
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexVector xi = rng.vector(8);
        // Eigen-expansion oracle: Σ |c_k|² (1 + λ_k^α).
        const ComplexVector c = g.eig().vectors.adjoint() * xi;
        double prev = 0.0;
        for (double alpha = 0.0; alpha <= 3.0; alpha += 0.25) {
            double oracle = 0.0;
            for (Eigen::Index k = 0; k < 8; ++k) oracle += std::norm(c(k)) * (1.0 + std::pow(g.eig().values(k), alpha));
            const double got = scale_norm(g, alpha, xi);
            EXPECT_NEAR(got, std::sqrt(oracle), 1e-12 * got);
            EXPECT_GE(got, prev * (1 - 1e-14));
            prev = got;
        }
    }
}

TEST(PipPairing, ReducesToInnerProduct) {
    testutil::Rng rng(10);
    const MetricOperator id(ComplexMatrix::Identity(5, 5));
    const ComplexVector xi = rng.vector(5), eta = rng.vector(5);
    EXPECT_NEAR(std::abs(pip_pairing(id, xi, eta) - eta.dot(xi)), 0.0, 1e-14);
    for (int trial = 0; trial < 20; ++trial) {
        const MetricOperator g(rng.positive(9, 1e4));
        const ComplexVector a = rng.vector(9), b = rng.vector(9);
        const double bound = 1e-10 * a.norm() * b.norm() * std::sqrt(g.condition());
        EXPECT_LE(std::abs(pip_pairing(g, a, b) - b.dot(a)), bound);
        // Cauchy-Schwarz in transformed variables.
        EXPECT_LE(std::abs(pip_pairing(g, a, b)),
                  node_norm(LatticeNode::Metric, g, a) * node_norm(LatticeNode::InverseMetric, g, b) *
                      (1 + 1e-12));
    }
}

TEST(Representative, IdentityAndCoherence) {
    testutil::Rng rng(11);
    const MetricOperator g(rng.positive(6, 100.0));
    BasisSpec basis;
    basis.n = 6;
    const LinearOperator id = identity_operator(basis);
    for (LatticeNode node : kLatticeNodes) EXPECT_NEAR(representative_norm(id, node, node, g), 1.0, 1e-12);

    const ComplexMatrix a = rng.ginibre(6);
    for (LatticeNode w : kLatticeNodes) {
        for (LatticeNode z : {LatticeNode::Meet, LatticeNode::Base, LatticeNode::Join}) {
            for (LatticeNode x : {LatticeNode::Graph, LatticeNode::InverseMetric}) {
                for (LatticeNode y : {LatticeNode::Metric, LatticeNode::DualGraph}) {
                    const ComplexMatrix direct = representative(a, w, z, g);
                    const ComplexMatrix chained =
                        embedding(y, z, g) * representative(a, x, y, g) * embedding(w, x, g);
                    EXPECT_LT(operator_norm(direct - chained), 1e-10 * std::max(1.0, operator_norm(direct)));
                }
            }
        }
    }
}

TEST(Representative, HermitianOperatorHasEqualMetricAndInverseMetricNorms) {
    testutil::Rng rng(12);
    const MetricOperator g(rng.positive(6, 100.0));
    BasisSpec basis;
    basis.n = 6;
    const LinearOperator a(rng.hermitian(6), basis, "A");
    const double n_gg = representative_norm(a, LatticeNode::Metric, LatticeNode::Metric, g);
    const double n_ii = representative_norm(a, LatticeNode::InverseMetric, LatticeNode::InverseMetric, g);
    EXPECT_TRUE(std::isfinite(n_gg));
    EXPECT_NEAR(n_gg, n_ii, 1e-10 * n_gg);
    EXPECT_NEAR(representative_norm(a, LatticeNode::Base, LatticeNode::Base, g), operator_norm(a.matrix), 1e-12);
}
