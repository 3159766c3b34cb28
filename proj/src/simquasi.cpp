#include "qspec/simquasi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qspec {

namespace {

void require_same_size(const LinearOperator& a, const LinearOperator& b, const char* what) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + ": '" + a.label + "' and '" + b.label +
                        "' differ in dimension");
    }
}

void require_metric_size(const LinearOperator& a, const MetricOperator& g, const char* what) {
    if (a.size() != g.size()) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + ": operator and metric differ in dimension");
    }
}

double safe_ratio(double num, double den) {
    if (num == 0.0) return 0.0;
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return num / den;
}

} // namespace

std::string_view to_string(Relation relation) {
    switch (relation) {
    case Relation::Similar: return "similar";
    case Relation::QuasiSimilar: return "quasi_similar";
    case Relation::NotIntertwining: return "not_intertwining";
    }
    return "?";
}

double intertwine_residual(const LinearOperator& a, const LinearOperator& b,
                           const LinearOperator& t) {
    require_same_size(a, b, "intertwine_residual");
    require_same_size(a, t, "intertwine_residual");
    const double defect = operator_norm(b.matrix * t.matrix - t.matrix * a.matrix);
    return safe_ratio(defect, operator_norm(t.matrix) *
                                  (operator_norm(a.matrix) + operator_norm(b.matrix)));
}

double intertwine_residual_sampled(const LinearOperator& a, const LinearOperator& b,
                                   const LinearOperator& t,
                                   std::span<const ComplexVector> samples) {
    require_same_size(a, b, "intertwine_residual_sampled");
    require_same_size(a, t, "intertwine_residual_sampled");
    if (samples.empty()) throw Error(ErrorCode::EmptySampleSet, "no test vectors given");
    const std::vector<Eigen::Index> rows = interior_rows(a.basis);
    const double t_norm = operator_norm(t.matrix);
    double worst = 0.0;
    for (const ComplexVector& f : samples) {
        if (f.size() != a.size()) {
            throw Error(ErrorCode::DimensionMismatch, "test vector has the wrong length");
        }
        const ComplexVector defect = b.matrix * (t.matrix * f) - t.matrix * (a.matrix * f);
        double interior = 0.0;
        for (Eigen::Index r : rows) interior += std::norm(defect(r));
        worst = std::max(worst, safe_ratio(std::sqrt(interior), t_norm * f.norm()));
    }
    return worst;
}

IntertwinerReport classify(const LinearOperator& a, const LinearOperator& b,
                           const LinearOperator& t, double tol, double cond_threshold) {
    if (!(tol > 0.0) || !(cond_threshold > 0.0)) {
        throw Error(ErrorCode::DomainError, "classify: thresholds must be positive");
    }
    IntertwinerReport rep;
    rep.tol = tol;
    rep.cond_threshold = cond_threshold;
    rep.residual = intertwine_residual(a, b, t);

    const auto sv = singular_values(t.matrix);
    rep.T_norm = sv(0);
    rep.T_min_singular = sv(sv.size() - 1);
    rep.tau = safe_ratio(rep.T_norm, rep.T_min_singular);

    const double ab_norm = operator_norm(a.matrix) + operator_norm(b.matrix);
    if (rep.T_min_singular > 0.0) {
        const ComplexMatrix t_inv = t.matrix.partialPivLu().inverse();
        const double reverse = operator_norm(a.matrix * t_inv - t_inv * b.matrix);
        rep.reverse_residual = safe_ratio(reverse, operator_norm(t_inv) * ab_norm);
    } else {
        rep.reverse_residual = std::numeric_limits<double>::infinity();
    }

    // A singular T intertwines but cannot realize either relation.
    if (!(rep.residual <= tol) || !std::isfinite(rep.tau)) {
        rep.classification = Relation::NotIntertwining;
    } else if (rep.tau <= cond_threshold && rep.reverse_residual <= tol) {
        rep.classification = Relation::Similar;
    } else {
        rep.classification = Relation::QuasiSimilar;
    }
    return rep;
}

LinearOperator similarity_transform(const LinearOperator& a, const MetricOperator& g) {
    require_metric_size(a, g, "similarity_transform");
    return {g.sqrt() * a.matrix * g.inv_sqrt(), a.basis, "G^1/2 " + a.label + " G^-1/2"};
}

double dieudonne_residual(const LinearOperator& a, const MetricOperator& g) {
    require_metric_size(a, g, "dieudonne_residual");
    const ComplexMatrix& gm = g.matrix();
    const double defect = operator_norm(gm * a.matrix - a.matrix.adjoint() * gm);
    return safe_ratio(defect, operator_norm(gm) * operator_norm(a.matrix));
}

double form_residual(const LinearOperator& a, const MetricOperator& g,
                     std::span<const ComplexVector> samples) {
    require_metric_size(a, g, "form_residual");
    if (samples.empty()) throw Error(ErrorCode::EmptySampleSet, "no sample vectors given");
    const double scale = operator_norm(a.matrix) * operator_norm(g.matrix());
    std::vector<ComplexVector> a_samples, g_samples;
    for (const ComplexVector& s : samples) {
        if (s.size() != a.size()) {
            throw Error(ErrorCode::DimensionMismatch, "sample vector has the wrong length");
        }
        a_samples.push_back(a.matrix * s);
        g_samples.push_back(g.matrix() * s);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (std::size_t j = 0; j < samples.size(); ++j) {
            // ⟨Aξ, Gη⟩ − ⟨Gξ, Aη⟩ with ⟨x, y⟩ = y† x
            const Complex lhs = g_samples[j].dot(a_samples[i]);
            const Complex rhs = a_samples[j].dot(g_samples[i]);
            const double den = scale * samples[i].norm() * samples[j].norm();
            worst = std::max(worst, safe_ratio(std::abs(lhs - rhs), den));
        }
    }
    return worst;
}

double hermiticity_residual(const LinearOperator& a) { return hermiticity_defect(a.matrix); }

LinearOperator make_quasi_self_adjoint(const LinearOperator& k, const MetricOperator& g) {
    require_metric_size(k, g, "make_quasi_self_adjoint");
    const double defect = hermiticity_defect(k.matrix);
    if (defect > kHermitianTolerance) {
        throw Error(ErrorCode::NotHermitian,
                    "K has relative Hermiticity defect " + std::to_string(defect));
    }
    return {g.inv_sqrt() * k.matrix * g.sqrt(), k.basis, "G^-1/2 " + k.label + " G^1/2"};
}

PhysicalSystem physical_hamiltonian(const LinearOperator& h, const MetricOperator& g,
                                    double tol) {
    require_metric_size(h, g, "physical_hamiltonian");
    PhysicalSystem sys{similarity_transform(h, g), 0.0, tol, false};
    sys.h.label = "h";
    sys.hermiticity_residual = hermiticity_residual(sys.h);
    sys.constructed = sys.hermiticity_residual <= tol;
    return sys;
}

VerificationReport classification_report(const LinearOperator& a, const LinearOperator& b,
                                         const LinearOperator& t, double tol,
                                         double cond_threshold) {
    const IntertwinerReport rep = classify(a, b, t, tol, cond_threshold);
    VerificationReport out;
    out.check = "classify";
    out.input(a.label, a.matrix).input(b.label, b.matrix).input(t.label, t.matrix);
    out.residual("residual", rep.residual)
        .residual("reverse_residual", rep.reverse_residual)
        .residual("T_norm", rep.T_norm)
        .residual("T_min_singular", rep.T_min_singular)
        .residual("tau", rep.tau);
    out.threshold("tol", tol).threshold("cond_threshold", cond_threshold);
    out.note("classification: " + std::string(to_string(rep.classification)));
    out.note("finite dimension: every domain is the whole space, so strict quasi-Hermiticity "
             "coincides with quasi-Hermiticity");
    out.passed = rep.classification != Relation::NotIntertwining;
    return out;
}

} // namespace qspec
