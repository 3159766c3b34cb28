#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <map>
#include <sstream>

#include "qspec/spectra.hpp"
#include "test_util.hpp"

using namespace qspec;

namespace {

BasisSpec plain(Eigen::Index n) {
    BasisSpec b;
    b.n = n;
    return b;
}

LinearOperator op(const ComplexMatrix& m, const std::string& label = "M") {
    return {m, plain(m.rows()), label};
}

BasisSpec uniform(Eigen::Index n, double L) {
    BasisSpec b;
    b.n = n;
    b.L = L;
    return b;
}

ComplexMatrix projection(Eigen::Index n) {
    return example_pair("projection", uniform(n, 5.0)).A.matrix;
}

} // namespace

TEST(Spectrum, ProjectionAndRankOneHaveZeroAndOne) {
    const ExamplePair pair = example_pair("projection", uniform(64, 5.0));
    for (const LinearOperator* a : {&pair.A, &pair.B}) {
        const Spectrum s = spectrum(*a);
        ASSERT_EQ(s.eigenvalues.size(), 2) << a->label;
        std::map<int, int> found;
        for (Eigen::Index k = 0; k < 2; ++k) {
            const Complex lambda = s.eigenvalues(k);
            EXPECT_LT(std::min(std::abs(lambda), std::abs(lambda - 1.0)), s.cluster_tol);
            found[std::abs(lambda) < 0.5 ? 0 : 1] = s.multiplicities[std::size_t(k)];
        }
        EXPECT_EQ(found[0], 63);
        EXPECT_EQ(found[1], 1);
    }
}

TEST(Spectrum, IdentityIsOneCluster) {
    const Spectrum s = spectrum(ComplexMatrix::Identity(9, 9));
    ASSERT_EQ(s.eigenvalues.size(), 1);
    EXPECT_EQ(s.multiplicities[0], 9);
    EXPECT_NEAR(std::abs(s.eigenvalues(0) - 1.0), 0.0, 1e-14);
}

TEST(Spectrum, ClustersAreSeparatedAndMultiplicitiesSum) {
    testutil::Rng rng(1);
    const ComplexMatrix a = rng.ginibre(20);
    const Spectrum s = spectrum(a);
    int total = 0;
    for (int m : s.multiplicities) total += m;
    EXPECT_EQ(total, 20);
    for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i)
        for (Eigen::Index j = i + 1; j < s.eigenvalues.size(); ++j)
            EXPECT_GT(std::abs(s.eigenvalues(i) - s.eigenvalues(j)), s.cluster_tol);
    EXPECT_DOUBLE_EQ(s.cluster_tol, default_cluster_tol(a));
    EXPECT_THROW(spectrum(a, 0.0), Error);
}

TEST(Pseudospectrum, ProjectionMatchesTwoDiskOracle) {
    const Region region{-0.5, 1.5, -0.5, 0.5};
    const PseudospectrumGrid grid = pseudospectrum(projection(32), region, {41, 21}, {0.1, 0.01});
    for (Eigen::Index i = 0; i < 41; ++i) {
        for (Eigen::Index j = 0; j < 21; ++j) {
            const Complex z = grid.point(i, j);
            EXPECT_NEAR(grid.smin(i, j), std::min(std::abs(z), std::abs(1.0 - z)), 1e-10);
        }
    }
    EXPECT_DOUBLE_EQ(grid.re_step(), 0.05);
    EXPECT_DOUBLE_EQ(grid.im_step(), 0.05);
    EXPECT_TRUE(grid.failures.empty());
    // Grid points at exactly 0 and 1 are in every level set.
    const auto cells = grid.level_set(0.01);
    EXPECT_EQ(cells.size(), 2u);
}

TEST(Pseudospectrum, NormalMatrixDistanceToSpectrum) {
    testutil::Rng rng(2);
    ComplexVector lambdas(6);
    lambdas << 0.0, 0.5, Complex(0.2, 0.4), Complex(-0.3, -0.2), 1.0, Complex(0.7, -0.5);
    const ComplexMatrix u = rng.unitary(6);
    const ComplexMatrix a = u * lambdas.asDiagonal() * u.adjoint();
    const PseudospectrumGrid grid = pseudospectrum(a, {-1.0, 1.5, -1.0, 1.0}, {26, 21}, {0.1});
    for (Eigen::Index i = 0; i < 26; ++i) {
        for (Eigen::Index j = 0; j < 21; ++j) {
            const Complex z = grid.point(i, j);
            double dist = std::numeric_limits<double>::infinity();
            for (Eigen::Index k = 0; k < 6; ++k) dist = std::min(dist, std::abs(z - lambdas(k)));
            EXPECT_NEAR(grid.smin(i, j), dist, 1e-10);
        }
    }
}

TEST(Pseudospectrum, LowerBoundByDistanceHoldsForEveryMatrix) {
    testutil::Rng rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        const ComplexMatrix a = rng.ginibre(15);
        const Spectrum s = spectrum(a);
        const PseudospectrumGrid grid = pseudospectrum(a, {-2, 2, -2, 2}, {17, 17}, {0.1});
        for (Eigen::Index i = 0; i < 17; ++i)
            for (Eigen::Index j = 0; j < 17; ++j)
                EXPECT_LE(grid.smin(i, j), s.distance(grid.point(i, j)) * (1 + 1e-10) + 1e-14);
    }
}

TEST(Pseudospectrum, UnitaryInvarianceAndShiftCovariance) {
    testutil::Rng rng(4);
    const ComplexMatrix a = rng.ginibre(12);
    const ComplexMatrix u = rng.unitary(12);
    const Region region{-1.5, 1.5, -1.5, 1.5};
    const PseudospectrumGrid g1 = pseudospectrum(a, region, {13, 13}, {0.1});
    const PseudospectrumGrid g2 = pseudospectrum(ComplexMatrix(u * a * u.adjoint()), region, {13, 13}, {0.1});
    EXPECT_LT((g1.smin - g2.smin).cwiseAbs().maxCoeff(), 1e-10);
    for (Complex c : {Complex(0.5, 0.0), Complex(0.0, -1.0), Complex(2.0, 3.0)}) {
        ComplexMatrix shifted = a;
        shifted.diagonal().array() += c;
        const Region moved{region.re_min + c.real(), region.re_max + c.real(), region.im_min + c.imag(),
                           region.im_max + c.imag()};
        const PseudospectrumGrid g3 = pseudospectrum(shifted, moved, {13, 13}, {0.1});
        EXPECT_LT((g1.smin - g3.smin).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(Pseudospectrum, OutputIndependentOfWorkerCount) {
    testutil::Rng rng(5);
    const ComplexMatrix a = rng.ginibre(20);
    GridOptions one, many;
    one.workers = 1;
    many.workers = 4;
    const PseudospectrumGrid g1 = pseudospectrum(a, {-2, 2, -2, 2}, {23, 19}, {0.1}, one);
    const PseudospectrumGrid g2 = pseudospectrum(a, {-2, 2, -2, 2}, {23, 19}, {0.1}, many);
    EXPECT_TRUE(g1.smin == g2.smin);
    std::ostringstream c1, c2;
    write_grid_csv(c1, g1);
    write_grid_csv(c2, g2);
    EXPECT_EQ(c1.str(), c2.str());
}

TEST(Pseudospectrum, IterativeSolverGivesSameGrid) {
    testutil::Rng rng(6);
    const ComplexMatrix a = rng.ginibre(30);
    GridOptions iter;
    iter.smin.method = SminMethod::InverseIteration;
    const PseudospectrumGrid g1 = pseudospectrum(a, {-2, 2, -2, 2}, {9, 9}, {0.1});
    const PseudospectrumGrid g2 = pseudospectrum(a, {-2, 2, -2, 2}, {9, 9}, {0.1}, iter);
    for (Eigen::Index i = 0; i < 9; ++i)
        for (Eigen::Index j = 0; j < 9; ++j) EXPECT_NEAR(g2.smin(i, j), g1.smin(i, j), 1e-8 * g1.smin(i, j));
}

TEST(Pseudospectrum, ValidatesInputs) {
    const ComplexMatrix a = ComplexMatrix::Identity(3, 3);
    EXPECT_THROW(pseudospectrum(a, {1, -1, -1, 1}, {5, 5}, {0.1}), Error);
    EXPECT_THROW(pseudospectrum(a, {-1, 1, -1, 1}, {1, 5}, {0.1}), Error);
    EXPECT_THROW(pseudospectrum(a, {-1, 1, -1, 1}, {5, 5}, {0.0}), Error);
}

TEST(Pseudospectrum, FourierDerivativeLevelSetIsAStripInsideTheWindow) {
    BasisSpec basis;
    basis.kind = BasisKind::FourierGrid;
    basis.n = 64;
    basis.L = 20.0;
    const LinearOperator d = derivative_operator(basis);
    // Frequencies are πm/20 ≈ 0.157 m; the window |Im z| ≤ 1 is well covered.
    const PseudospectrumGrid grid = pseudospectrum(d, {-0.3, 0.3, -1.0, 1.0}, {13, 21}, {0.1});
    for (Eigen::Index i = 0; i < 13; ++i) {
        for (Eigen::Index j = 0; j < 21; ++j) {
            const double re = grid.point(i, j).real();
            if (std::abs(re) < 0.02) EXPECT_LT(grid.smin(i, j), 0.1);
            if (std::abs(re) > 0.12) EXPECT_GT(grid.smin(i, j), 0.1);
        }
    }
}

TEST(RankOneNorm, ReducesToModulusWhenBIsZero) {
    testutil::Rng rng(7);
    const ComplexVector u = rng.vector(5), v = rng.vector(5);
    const Complex a(0.3, -1.2);
    const RankOneNorms r = rank_one_resolvent_norm(a, 0.0, u, v);
    EXPECT_NEAR(r.norm, std::abs(a), 1e-14);
    EXPECT_NEAR(r.smallest, std::abs(a), 1e-14);
}

TEST(RankOneNorm, ProjectionFormula) {
    testutil::Rng rng(8);
    ComplexVector phi = rng.vector(10);
    phi.normalize();
    for (int trial = 0; trial < 20; ++trial) {
        const Complex a = rng.complex_normal(), b = rng.complex_normal();
        const double expected = std::max(std::abs(a), std::abs(a + b));
        EXPECT_NEAR(rank_one_resolvent_norm(a, b, phi, phi).norm, expected, 1e-10 * std::max(1.0, expected));
    }
}

TEST(RankOneNorm, MatchesDenseSvdForGeneralVectors) {
    testutil::Rng rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::Index n = trial % 2 == 0 ? 2 : 7;
        const ComplexVector u = rng.vector(n), v = rng.vector(n);
        const Complex a = rng.complex_normal(), b = rng.complex_normal();
        ComplexMatrix m = b * rank_one_matrix(u, v);
        m.diagonal().array() += a;
        const RealVector sv = singular_values(m);
        const RankOneNorms r = rank_one_resolvent_norm(a, b, u, v);
        EXPECT_NEAR(r.norm, sv(0), 1e-10 * std::max(1.0, sv(0)));
        EXPECT_NEAR(r.smallest, sv(n - 1), 1e-10 * std::max(1.0, sv(0)));
    }
}

TEST(RankOneNorm, ResolventOfRankOneOperator) {
    const ExamplePair pair = example_pair("projection", uniform(40, 4.0));
    const ComplexVector& u = pair.vectors.at("u");
    const ComplexVector& v = pair.vectors.at("v");
    for (Complex lambda : {Complex(0.3, 0.0), Complex(2.0, 0.0), Complex(-1.0, 1.0)}) {
        // (A_φ − λ)⁻¹ = −I/λ + A_φ/(λ(1−λ))
        const double closed = rank_one_resolvent_norm(-1.0 / lambda, 1.0 / (lambda * (1.0 - lambda)), u, v).norm;
        ComplexMatrix shifted = pair.B.matrix;
        shifted.diagonal().array() -= lambda;
        EXPECT_NEAR(closed, operator_norm(ComplexMatrix(shifted.inverse())), 1e-10 * closed);
    }
    EXPECT_THROW(rank_one_resolvent_norm(1.0, 1.0, ComplexVector::Zero(3), ComplexVector::Ones(3)), Error);
}

TEST(NumericalRange, ProjectionIsTheUnitSegment) {
    const NumericalRangeBoundary nr = numerical_range(projection(24), 64);
    double lo = 1.0, hi = 0.0, width = 0.0;
    for (Complex z : nr.boundary_points) {
        lo = std::min(lo, z.real());
        hi = std::max(hi, z.real());
        width = std::max(width, std::abs(z.imag()));
    }
    EXPECT_NEAR(lo, 0.0, 1e-10);
    EXPECT_NEAR(hi, 1.0, 1e-10);
    EXPECT_LE(width, 1e-8);
    EXPECT_NEAR(nr.distance(0.5), 0.0, 1e-8);
    EXPECT_NEAR(nr.distance(Complex(0.5, 0.2)), 0.2, 1e-8);
}

TEST(NumericalRange, NormalMatrixGivesHullOfEigenvalues) {
    ComplexMatrix a = ComplexMatrix::Zero(3, 3);
    a(1, 1) = 1.0;
    a(2, 2) = Complex(0.0, 1.0);
    const NumericalRangeBoundary nr = numerical_range(a, 360);
    for (Complex v : {Complex(0.0), Complex(1.0), Complex(0.0, 1.0), Complex(0.3, 0.3)}) {
        EXPECT_NEAR(nr.distance(v), 0.0, 1e-8);
    }
    EXPECT_NEAR(nr.distance(Complex(1.0, 1.0)), std::sqrt(0.5), 1e-6);
    EXPECT_NEAR(nr.max_modulus(), 1.0, 1e-10);
}

TEST(NumericalRange, SupportConsistencyAndEigenvalueContainment) {
    testutil::Rng rng(10);
    const ComplexMatrix a = rng.ginibre(12);
    const NumericalRangeBoundary nr = numerical_range(a, 180);
    for (Complex p : nr.boundary_points) EXPECT_LE(nr.support_excess(p), 1e-8);
    const ComplexVector ev = general_eig(a);
    for (Eigen::Index k = 0; k < ev.size(); ++k) EXPECT_LE(nr.support_excess(ev(k)), 1e-8);
    for (Complex p : nr.boundary_points) EXPECT_LE(std::abs(p), operator_norm(a) * (1 + 1e-12));
    EXPECT_THROW(numerical_range(a, 3), Error);
}

TEST(NumericalRange, RankOneBoundedByNormProduct) {
    const ExamplePair pair = example_pair("projection", uniform(48, 5.0));
    const NumericalRangeBoundary nr = numerical_range(pair.B, 360);
    EXPECT_LE(nr.max_modulus(), pair.vectors.at("u").norm() * pair.vectors.at("v").norm());
}

TEST(InclusionCheck, RandomSimilarityHasNoViolations) {
    testutil::Rng rng(11);
    const ComplexMatrix a = rng.ginibre(10);
    const ComplexMatrix t = rng.conditioned(10, 8.0);
    const LinearOperator la = op(a), lb = op(ComplexMatrix(t * a * t.inverse())), lt = op(t);
    const Region region{-2.5, 2.5, -2.5, 2.5};
    const auto ga = pseudospectrum(la, region, {40, 40}, {0.2});
    const auto gb = pseudospectrum(lb, region, {40, 40}, {0.2});
    const VerificationReport rep = inclusion_check(la, lb, lt, 0.2, ga, gb);
    EXPECT_TRUE(rep.passed);
    EXPECT_EQ(rep.residual_value("lower_violations"), 0.0);
    EXPECT_EQ(rep.residual_value("upper_violations"), 0.0);
}

TEST(InclusionCheck, UnitaryIntertwinerGivesEqualLevelSets) {
    testutil::Rng rng(12);
    const ComplexMatrix a = rng.ginibre(8);
    const ComplexMatrix u = rng.unitary(8);
    const LinearOperator la = op(a), lb = op(ComplexMatrix(u * a * u.adjoint())), lt = op(u);
    const Region region{-2, 2, -2, 2};
    const auto ga = pseudospectrum(la, region, {30, 30}, {0.2});
    const auto gb = pseudospectrum(lb, region, {30, 30}, {0.2});
    EXPECT_TRUE(inclusion_check(la, lb, lt, 0.2, ga, gb).passed);
    EXPECT_EQ(ga.level_set(0.2), gb.level_set(0.2));
}

TEST(InclusionCheck, MismatchedGridIsReportedAsViolation) {
    testutil::Rng rng(13);
    const ComplexMatrix a = rng.ginibre(8);
    const ComplexMatrix t = rng.conditioned(8, 2.0);
    const ComplexMatrix b = t * a * t.inverse();
    const LinearOperator la = op(a), lb = op(b), lt = op(t);
    const Region region{-3, 3, -3, 3};
    const auto ga = pseudospectrum(la, region, {40, 40}, {0.2});
    // Grid of a different operator (B shifted by 1.5) passed off as the grid of B.
    const auto gwrong = pseudospectrum(ComplexMatrix(b + 1.5 * ComplexMatrix::Identity(8, 8)), region,
                                       {40, 40}, {0.2});
    const VerificationReport rep = inclusion_check(la, lb, lt, 0.2, ga, gwrong);
    EXPECT_FALSE(rep.passed);
    EXPECT_GT(rep.residual_value("lower_violations") + rep.residual_value("upper_violations"), 0.0);
}

TEST(InclusionCheck, Preconditions) {
    testutil::Rng rng(14);
    const ComplexMatrix a = rng.ginibre(5);
    const LinearOperator la = op(a), lb = op(ComplexMatrix(a + ComplexMatrix::Identity(5, 5)));
    const LinearOperator id = op(ComplexMatrix::Identity(5, 5));
    const auto g1 = pseudospectrum(la, {-1, 1, -1, 1}, {5, 5}, {0.1});
    const auto g2 = pseudospectrum(la, {-1, 1, -1, 1}, {6, 5}, {0.1});
    try {
        inclusion_check(la, la, id, 0.1, g1, g2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::GridMismatch);
    }
    try {
        inclusion_check(la, lb, id, 0.1, g1, g1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotSimilar);
    }
}

TEST(SandwichCheck, HermitianAndProjectionSatisfyBothInclusions) {
    testutil::Rng rng(15);
    const LinearOperator h = op(rng.hermitian(8));
    const Region region{-3, 3, -1, 1};
    const double eps = 0.2;
    const auto grid = pseudospectrum(h, region, {61, 21}, {eps});
    const VerificationReport rep = sandwich_check(h, eps, spectrum(h), numerical_range(h, 90), grid);
    EXPECT_TRUE(rep.passed);

    const LinearOperator p = op(projection(20));
    const auto pgrid = pseudospectrum(p, {-0.5, 1.5, -0.5, 0.5}, {41, 21}, {eps});
    EXPECT_TRUE(sandwich_check(p, eps, spectrum(p), numerical_range(p, 90), pgrid).passed);
}

TEST(SandwichCheck, NonNormalMatrixSatisfiesLowerInclusion) {
    testutil::Rng rng(16);
    ComplexMatrix a = rng.ginibre(50);
    for (Eigen::Index k = 0; k + 1 < 50; ++k) a(k, k + 1) += 1.0;  // push away from normality
    const LinearOperator la = op(a);
    const double eps = 0.1;
    const NumericalRangeBoundary nr = numerical_range(la, 90);
    double r = 0.0;
    for (Complex p : nr.boundary_points) r = std::max({r, std::abs(p.real()), std::abs(p.imag())});
    r += 0.5;
    const auto grid = pseudospectrum(la, {-r, r, -r, r}, {25, 25}, {eps});
    const VerificationReport rep = sandwich_check(la, eps, spectrum(la), nr, grid, false);
    EXPECT_TRUE(rep.passed);
    EXPECT_EQ(rep.residual_value("lower_violations"), 0.0);
    EXPECT_FALSE(rep.notes.empty());
}

TEST(SandwichCheck, GridMustCoverMargin) {
    const LinearOperator p = op(projection(10));
    const auto grid = pseudospectrum(p, {-0.05, 1.05, -0.5, 0.5}, {5, 5}, {0.1});
    EXPECT_THROW(sandwich_check(p, 0.1, spectrum(p), numerical_range(p, 16), grid), Error);
}

TEST(Triviality, NormalAndProjectionAreTrivial) {
    const ComplexMatrix p = projection(16);
    const PseudospectrumGrid grid = pseudospectrum(p, {-0.3, 1.3, -0.3, 0.3}, {161, 61}, {0.1, 0.05});
    const TrivialityReport tr = triviality_fit(spectrum(p), grid);
    EXPECT_TRUE(tr.trivial);
    for (std::size_t k = 0; k < tr.eps_levels.size(); ++k) {
        EXPECT_NEAR(tr.C_estimates[k], 1.0, 2.0 * grid.max_step() / tr.eps_levels[k]);
        EXPECT_GT(tr.cell_counts[k], 0u);
    }
}

TEST(Triviality, JordanBlockIsNotTrivial) {
    ComplexMatrix j = ComplexMatrix::Zero(8, 8);
    for (Eigen::Index k = 0; k < 7; ++k) j(k, k + 1) = 1.0;
    const PseudospectrumGrid grid = pseudospectrum(j, {-1, 1, -1, 1}, {81, 81}, {0.1, 0.01});
    const TrivialityReport tr = triviality_fit(spectrum(j), grid);
    EXPECT_FALSE(tr.trivial);
    EXPECT_GT(tr.C_estimates[1], 10.0);
    EXPECT_GT(tr.C_estimates[1], tr.C_estimates[0]);
}

TEST(QsWitness, ProjectionPair) {
    const ExamplePair pair = example_pair("projection", uniform(40, 4.0));
    const VerificationReport rep = qs_witness(pair.A, pair.B, pair.T, 0.05, 0.1);
    EXPECT_TRUE(rep.passed);
    EXPECT_LT(rep.residual_value("lhs"), rep.residual_value("rhs"));
    try {
        qs_witness(pair.A, pair.B, pair.T, Complex(0.5, 0.3), 0.1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotInPseudospectrum);
    }
}

TEST(QsWitness, UnitaryIntertwinerReducesToMembership) {
    testutil::Rng rng(17);
    const ComplexMatrix a = rng.ginibre(10);
    const ComplexMatrix u = rng.unitary(10);
    const LinearOperator la = op(a), lb = op(ComplexMatrix(u * a * u.adjoint())), lu = op(u);
    const Complex z = general_eig(a)(0) + Complex(0.01, 0.0);
    const VerificationReport rep = qs_witness(la, lb, lu, z, 0.1);
    EXPECT_TRUE(rep.passed);
    // With T unitary, rhs = ε ‖ξ‖ = ε and lhs = ‖(B − z)Uξ‖ = s_min(A − z).
    EXPECT_NEAR(rep.residual_value("rhs"), 0.1, 1e-12);
    EXPECT_NEAR(rep.residual_value("lhs"), rep.residual_value("smin_A"), 1e-12);
}

TEST(QsWitness, DerivativePairWithDiscretizationSlack) {
    const ExamplePair pair = example_pair("derivative", uniform(256, 10.0));
    const VerificationReport rep = qs_witness(pair.A, pair.B, pair.T, Complex(0.05, 1.0), 0.1, true);
    EXPECT_TRUE(rep.passed);
}

TEST(Exports, CsvAndJsonFormats) {
    const PseudospectrumGrid grid = pseudospectrum(projection(8), {0, 1, 0, 1}, {2, 3}, {0.1});
    std::ostringstream csv;
    write_grid_csv(csv, grid);
    std::istringstream lines(csv.str());
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line, "re,im,smin");
    int rows = 0;
    while (std::getline(lines, line)) ++rows;
    EXPECT_EQ(rows, 6);
    EXPECT_NE(csv.str().find("0.5,"), std::string::npos);

    const nlohmann::json levels = level_sets_json(grid);
    ASSERT_TRUE(levels.is_array());
    EXPECT_DOUBLE_EQ(levels[0]["eps"].get<double>(), 0.1);
    // z = 0 and z = 1 are grid points with smin = 0.
    EXPECT_EQ(levels[0]["cells"].size(), 2u);

    const NumericalRangeBoundary nr = numerical_range(projection(8), 8);
    std::ostringstream nrcsv;
    write_numerical_range_csv(nrcsv, nr);
    EXPECT_EQ(nrcsv.str().substr(0, 19), "theta,support,re,im");

    const nlohmann::json spec = to_json(spectrum(projection(8)));
    EXPECT_EQ(spec["eigenvalues"].size(), 2u);
    EXPECT_EQ(spec["dimension"].get<int>(), 8);
}
