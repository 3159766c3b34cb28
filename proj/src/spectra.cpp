#include "qspec/spectra.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <numeric>
#include <ostream>
#include <thread>

namespace qspec {

// ---------------------------------------------------------------------------
// Spectrum

double Spectrum::distance(Complex z) const {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < raw.size(); ++k) best = std::min(best, std::abs(z - raw(k)));
    return best;
}

double default_cluster_tol(const ComplexMatrix& a) {
    return 1e-6 * std::max(1.0, operator_norm(a));
}

Spectrum spectrum(const ComplexMatrix& a, std::optional<double> cluster_tol) {
    const double tol = cluster_tol.value_or(default_cluster_tol(a));
    if (!(tol > 0.0)) throw Error(ErrorCode::DomainError, "cluster_tol must be positive");
    Spectrum out;
    out.cluster_tol = tol;
    out.raw = general_eig(a);
    const Eigen::Index n = out.raw.size();

    std::vector<Eigen::Index> parent(n);
    std::iota(parent.begin(), parent.end(), Eigen::Index{0});
    auto find = [&](Eigen::Index i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (std::abs(out.raw(i) - out.raw(j)) <= tol) parent[find(i)] = find(j);
        }
    }

    struct Cluster {
        Complex sum{0.0, 0.0};
        int count = 0;
    };
    std::vector<Cluster> clusters(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        Cluster& c = clusters[find(i)];
        c.sum += out.raw(i);
        ++c.count;
    }
    std::vector<std::pair<Complex, int>> reps;
    for (const Cluster& c : clusters) {
        if (c.count > 0) reps.emplace_back(c.sum / double(c.count), c.count);
    }
    std::sort(reps.begin(), reps.end(), [](const auto& x, const auto& y) {
        if (x.first.real() != y.first.real()) return x.first.real() < y.first.real();
        return x.first.imag() < y.first.imag();
    });
    out.eigenvalues.resize(Eigen::Index(reps.size()));
    for (std::size_t k = 0; k < reps.size(); ++k) {
        out.eigenvalues(Eigen::Index(k)) = reps[k].first;
        out.multiplicities.push_back(reps[k].second);
    }
    return out;
}

Spectrum spectrum(const LinearOperator& a, std::optional<double> cluster_tol) {
    return spectrum(a.matrix, cluster_tol);
}

// ---------------------------------------------------------------------------
// Pseudospectrum grid

double PseudospectrumGrid::re_step() const {
    return (region.re_max - region.re_min) / double(resolution.n_re - 1);
}

double PseudospectrumGrid::im_step() const {
    return (region.im_max - region.im_min) / double(resolution.n_im - 1);
}

Complex PseudospectrumGrid::point(Eigen::Index i, Eigen::Index j) const {
    return {region.re_min + double(i) * re_step(), region.im_min + double(j) * im_step()};
}

std::vector<Cell> PseudospectrumGrid::level_set(double eps) const {
    std::vector<Cell> cells;
    for (Eigen::Index i = 0; i < smin.rows(); ++i) {
        for (Eigen::Index j = 0; j < smin.cols(); ++j) {
            if (smin(i, j) < eps) cells.push_back({i, j});
        }
    }
    return cells;
}

bool PseudospectrumGrid::congruent(const PseudospectrumGrid& other) const {
    return region == other.region && resolution == other.resolution;
}

namespace {

void validate_grid_request(const Region& region, const Resolution& res,
                           const std::vector<double>& eps_levels) {
    if (!(region.re_max > region.re_min) || !(region.im_max > region.im_min)) {
        throw Error(ErrorCode::DomainError, "pseudospectrum region is empty");
    }
    if (res.n_re < 2 || res.n_im < 2) {
        throw Error(ErrorCode::DomainError, "pseudospectrum resolution must be at least 2x2");
    }
    for (double eps : eps_levels) {
        if (!(eps > 0.0)) throw Error(ErrorCode::DomainError, "eps levels must be positive");
    }
}

double grid_point_smin(const ComplexMatrix& a, Complex z, const SminOptions& opt, bool& failed) {
    ComplexMatrix shifted = a;
    shifted.diagonal().array() -= z;
    try {
        return smallest_singular(shifted, opt);
    } catch (const Error&) {
    }
    // Fallback: one-sided Jacobi SVD, slower but more robust than divide and conquer.
    try {
        Eigen::JacobiSVD<ComplexMatrix> svd(shifted);
        const auto& sv = svd.singularValues();
        if (sv.allFinite()) return sv(sv.size() - 1);
    } catch (...) {
    }
    failed = true;
    return kFailedPoint;
}

} // namespace

PseudospectrumGrid pseudospectrum(const ComplexMatrix& a, const Region& region,
                                  const Resolution& resolution, std::vector<double> eps_levels,
                                  const GridOptions& options) {
    require_square(a, "pseudospectrum");
    require_finite(a, "pseudospectrum");
    validate_grid_request(region, resolution, eps_levels);

    PseudospectrumGrid grid;
    grid.region = region;
    grid.resolution = resolution;
    grid.eps_levels = std::move(eps_levels);
    grid.smin.resize(resolution.n_re, resolution.n_im);

    unsigned workers = options.workers == 0 ? std::thread::hardware_concurrency() : options.workers;
    workers = std::max(1u, std::min<unsigned>(workers, unsigned(resolution.n_re)));

    std::atomic<Eigen::Index> next_row{0};
    std::mutex failure_mutex;
    auto work = [&] {
        for (Eigen::Index i = next_row++; i < resolution.n_re; i = next_row++) {
            for (Eigen::Index j = 0; j < resolution.n_im; ++j) {
                bool failed = false;
                grid.smin(i, j) = grid_point_smin(a, grid.point(i, j), options.smin, failed);
                if (failed) {
                    std::lock_guard lock(failure_mutex);
                    grid.failures.push_back({i, j});
                }
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    std::sort(grid.failures.begin(), grid.failures.end());
    return grid;
}

PseudospectrumGrid pseudospectrum(const LinearOperator& a, const Region& region,
                                  const Resolution& resolution, std::vector<double> eps_levels,
                                  const GridOptions& options) {
    return pseudospectrum(a.matrix, region, resolution, std::move(eps_levels), options);
}

// ---------------------------------------------------------------------------
// Rank-one resolvents

RankOneNorms rank_one_resolvent_norm(Complex a, Complex b, const ComplexVector& u,
                                     const ComplexVector& v) {
    if (u.size() != v.size()) {
        throw Error(ErrorCode::DimensionMismatch, "rank_one_resolvent_norm: length mismatch");
    }
    const double nu = u.norm();
    const double nv = v.norm();
    if (nu == 0.0 || nv == 0.0) throw Error(ErrorCode::ZeroVector, "u and v must be nonzero");

    const Eigen::Index n = u.size();
    const ComplexVector q1 = u / nu;
    ComplexVector w = v - q1 * q1.dot(v);
    const bool planar = w.norm() > 1e-14 * nv;
    const Eigen::Index span_dim = planar ? 2 : 1;

    double top = 0.0;
    double bottom = 0.0;
    if (!planar) {
        // u ∥ v: M q1 = (a + b ⟨u, v⟩) q1 with ⟨u, v⟩ = v† u.
        const double s = std::abs(a + b * v.dot(u));
        top = bottom = s;
    } else {
        const ComplexVector q2 = w / w.norm();
        // Compression C = a I₂ + b (Q†u)(Q†v)† in the orthonormal basis {q1, q2}.
        const Eigen::Vector2cd cu(q1.dot(u), q2.dot(u));
        const Eigen::Vector2cd cv(q1.dot(v), q2.dot(v));
        const Eigen::Matrix2cd c = a * Eigen::Matrix2cd::Identity() + b * cu * cv.adjoint();
        // Jacobi rather than the closed form: the discriminant cancels when the
        // two singular values are close.
        const Eigen::Vector2d sv = Eigen::JacobiSVD<Eigen::Matrix2cd>(c).singularValues();
        top = sv(0);
        bottom = sv(1);
    }
    if (n > span_dim) {
        top = std::max(top, std::abs(a));
        bottom = std::min(bottom, std::abs(a));
    }
    return {top, bottom};
}

// ---------------------------------------------------------------------------
// Numerical range

namespace {

double cross(Complex o, Complex p, Complex q) {
    return (p.real() - o.real()) * (q.imag() - o.imag()) -
           (p.imag() - o.imag()) * (q.real() - o.real());
}

std::vector<Complex> convex_hull(std::vector<Complex> pts, double scale) {
    std::sort(pts.begin(), pts.end(), [](Complex x, Complex y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    const double merge = 1e-13 * std::max(1.0, scale);
    std::vector<Complex> unique;
    for (Complex p : pts) {
        if (unique.empty() || std::abs(p - unique.back()) > merge) unique.push_back(p);
    }
    if (unique.size() < 3) return unique;
    const double flat = 1e-13 * std::max(1.0, scale * scale);
    std::vector<Complex> hull(2 * unique.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < unique.size(); ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], unique[i]) <= flat) --k;
        hull[k++] = unique[i];
    }
    for (std::size_t i = unique.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], unique[i]) <= flat) --k;
        hull[k++] = unique[i];
    }
    hull.resize(k - 1);
    return hull;
}

double segment_distance(Complex z, Complex p, Complex q) {
    const Complex d = q - p;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(z - p);
    const double t = std::clamp(((z - p) * std::conj(d)).real() / len2, 0.0, 1.0);
    return std::abs(z - (p + t * d));
}

} // namespace

double NumericalRangeBoundary::distance(Complex z) const {
    if (hull.empty()) return std::numeric_limits<double>::infinity();
    if (hull.size() == 1) return std::abs(z - hull[0]);
    if (hull.size() == 2) return segment_distance(z, hull[0], hull[1]);
    bool inside = true;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < hull.size(); ++k) {
        const Complex p = hull[k];
        const Complex q = hull[(k + 1) % hull.size()];
        if (cross(p, q, z) < 0.0) inside = false;
        best = std::min(best, segment_distance(z, p, q));
    }
    return inside ? 0.0 : best;
}

double NumericalRangeBoundary::support_excess(Complex z) const {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < angles.size(); ++k) {
        const double projected = (std::polar(1.0, angles[k]) * z).real();
        worst = std::max(worst, projected - support_values[k]);
    }
    return worst;
}

double NumericalRangeBoundary::max_modulus() const {
    double m = 0.0;
    for (Complex p : boundary_points) m = std::max(m, std::abs(p));
    return m;
}

NumericalRangeBoundary numerical_range(const ComplexMatrix& a, int n_angles) {
    require_square(a, "numerical_range");
    require_finite(a, "numerical_range");
    if (n_angles < 4) throw Error(ErrorCode::DomainError, "numerical_range needs at least 4 angles");
    NumericalRangeBoundary nr;
    const ComplexMatrix adj = a.adjoint();
    for (int k = 0; k < n_angles; ++k) {
        const double theta = 2.0 * std::numbers::pi * double(k) / double(n_angles);
        const Complex rot = std::polar(1.0, theta);
        const ComplexMatrix h = (rot * a + std::conj(rot) * adj) / 2.0;
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
        if (solver.info() != Eigen::Success) {
            throw Error(ErrorCode::ConvergenceFailure, "numerical_range: eigensolver failed");
        }
        const Eigen::Index top = h.rows() - 1;
        const ComplexVector xi = solver.eigenvectors().col(top);
        nr.angles.push_back(theta);
        nr.support_values.push_back(solver.eigenvalues()(top));
        nr.boundary_points.push_back(xi.dot(a * xi));
    }
    nr.hull = convex_hull(nr.boundary_points, nr.max_modulus());
    return nr;
}

NumericalRangeBoundary numerical_range(const LinearOperator& a, int n_angles) {
    return numerical_range(a.matrix, n_angles);
}

// ---------------------------------------------------------------------------
// Checks

namespace {

using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

bool covered(const Mask& mask, Eigen::Index i, Eigen::Index j) {
    for (Eigen::Index di = -1; di <= 1; ++di) {
        for (Eigen::Index dj = -1; dj <= 1; ++dj) {
            const Eigen::Index ii = i + di;
            const Eigen::Index jj = j + dj;
            if (ii >= 0 && jj >= 0 && ii < mask.rows() && jj < mask.cols() && mask(ii, jj)) {
                return true;
            }
        }
    }
    return false;
}

// Cells of `inner` with no cell of `outer` within one step.
std::size_t uncovered(const Mask& inner, const Mask& outer) {
    std::size_t count = 0;
    for (Eigen::Index i = 0; i < inner.rows(); ++i) {
        for (Eigen::Index j = 0; j < inner.cols(); ++j) {
            if (inner(i, j) && !covered(outer, i, j)) ++count;
        }
    }
    return count;
}

Mask below(const RealMatrix& values, double level) { return values.array() < level; }

} // namespace

VerificationReport inclusion_check(const LinearOperator& a, const LinearOperator& b,
                                   const LinearOperator& t, double eps,
                                   const PseudospectrumGrid& grid_a,
                                   const PseudospectrumGrid& grid_b, double tol,
                                   double cond_threshold) {
    if (!grid_a.congruent(grid_b)) {
        throw Error(ErrorCode::GridMismatch, "inclusion_check: grids differ in region or resolution");
    }
    const IntertwinerReport rel = classify(a, b, t, tol, cond_threshold);
    if (rel.classification != Relation::Similar) {
        throw Error(ErrorCode::NotSimilar,
                    "inclusion_check: pair classified " + std::string(to_string(rel.classification)));
    }
    const double tau = rel.tau;
    const Mask a_eps = below(grid_a.smin, eps);
    const std::size_t lower = uncovered(below(grid_b.smin, eps / tau), a_eps);
    const std::size_t upper = uncovered(a_eps, below(grid_b.smin, eps * tau));

    VerificationReport rep;
    rep.check = "inclusion_chain";
    rep.input(a.label, a.matrix).input(b.label, b.matrix).input(t.label, t.matrix);
    rep.residual("tau", tau)
        .residual("intertwining_residual", rel.residual)
        .residual("lower_violations", double(lower))
        .residual("upper_violations", double(upper));
    rep.threshold("eps", eps).threshold("cell_slack", 1.0);
    rep.passed = lower == 0 && upper == 0;
    return rep;
}

VerificationReport sandwich_check(const LinearOperator& a, double eps, const Spectrum& spec,
                                  const NumericalRangeBoundary& nr,
                                  const PseudospectrumGrid& grid, bool require_upper) {
    if (spec.dimension() != a.size() || grid.smin.rows() != grid.resolution.n_re) {
        throw Error(ErrorCode::GridMismatch, "sandwich_check: inputs do not describe one operator");
    }
    const Region& r = grid.region;
    auto inside = [&](Complex z) {
        return z.real() - eps >= r.re_min && z.real() + eps <= r.re_max &&
               z.imag() - eps >= r.im_min && z.imag() + eps <= r.im_max;
    };
    for (Eigen::Index k = 0; k < spec.raw.size(); ++k) {
        if (!inside(spec.raw(k))) {
            throw Error(ErrorCode::GridMismatch, "grid does not cover an eps-margin around the spectrum");
        }
    }
    for (Complex p : nr.boundary_points) {
        if (!inside(p)) {
            throw Error(ErrorCode::GridMismatch,
                        "grid does not cover an eps-margin around the numerical range");
        }
    }

    const Eigen::Index nre = grid.resolution.n_re;
    const Eigen::Index nim = grid.resolution.n_im;
    Mask near_spectrum(nre, nim), near_range(nre, nim);
    for (Eigen::Index i = 0; i < nre; ++i) {
        for (Eigen::Index j = 0; j < nim; ++j) {
            const Complex z = grid.point(i, j);
            near_spectrum(i, j) = spec.distance(z) < eps;
            near_range(i, j) = nr.distance(z) < eps;
        }
    }
    const Mask pseudo = below(grid.smin, eps);
    const std::size_t lower = uncovered(near_spectrum, pseudo);
    const std::size_t upper = uncovered(pseudo, near_range);

    VerificationReport rep;
    rep.check = "sandwich";
    rep.input(a.label, a.matrix);
    rep.residual("lower_violations", double(lower)).residual("upper_violations", double(upper));
    rep.threshold("eps", eps).threshold("cell_slack", 1.0);
    rep.note(upper == 0 ? "upper inclusion holds on the grid"
                        : "upper inclusion fails on the grid; it presumes the complement of the "
                          "closed numerical range is connected and meets the resolvent set, which "
                          "this tool does not decide");
    rep.passed = lower == 0 && (upper == 0 || !require_upper);
    return rep;
}

TrivialityReport triviality_fit(const Spectrum& spec, const PseudospectrumGrid& grid,
                                double C_max) {
    TrivialityReport rep;
    rep.C_max = C_max;
    rep.grid_step = grid.max_step();
    rep.window = grid.region;
    rep.eps_levels = grid.eps_levels;
    rep.trivial = true;
    for (double eps : grid.eps_levels) {
        double c = 0.0;
        std::size_t count = 0;
        for (Eigen::Index i = 0; i < grid.smin.rows(); ++i) {
            for (Eigen::Index j = 0; j < grid.smin.cols(); ++j) {
                if (grid.smin(i, j) < eps) {
                    ++count;
                    c = std::max(c, spec.distance(grid.point(i, j)) / eps);
                }
            }
        }
        rep.C_estimates.push_back(c);
        rep.cell_counts.push_back(count);
        if (c > C_max) rep.trivial = false;
    }
    return rep;
}

VerificationReport qs_witness(const LinearOperator& a, const LinearOperator& b,
                              const LinearOperator& t, Complex z, double eps,
                              bool discretization_slack) {
    if (a.size() != b.size() || a.size() != t.size()) {
        throw Error(ErrorCode::DimensionMismatch, "qs_witness: operators differ in dimension");
    }
    ComplexMatrix shifted = a.matrix;
    shifted.diagonal().array() -= z;
    const auto pair = smallest_singular_pair(shifted);
    if (!(pair.value < eps)) {
        throw Error(ErrorCode::NotInPseudospectrum,
                    "s_min(A - z) = " + std::to_string(pair.value) + " is not below eps");
    }
    const ComplexVector& xi = pair.right;
    const ComplexVector eta = t.matrix * xi;
    ComplexMatrix b_shifted = b.matrix;
    b_shifted.diagonal().array() -= z;
    const double lhs = (b_shifted * eta).norm();
    const ComplexVector recovered = t.matrix.partialPivLu().solve(eta);
    const double t_norm = operator_norm(t.matrix);
    const double rhs = eps * t_norm * recovered.norm();
    const double defect = ((b.matrix * t.matrix - t.matrix * a.matrix) * xi).norm();

    VerificationReport rep;
    rep.check = "qs_witness";
    rep.input(a.label, a.matrix).input(b.label, b.matrix).input(t.label, t.matrix);
    rep.residual("smin_A", pair.value)
        .residual("lhs", lhs)
        .residual("rhs", rhs)
        .residual("intertwining_defect", defect)
        .residual("intertwining_residual", intertwine_residual(a, b, t));
    rep.threshold("eps", eps);
    rep.passed = discretization_slack ? lhs < rhs + defect : lhs < rhs;
    if (discretization_slack) rep.note("rhs extended by the measured intertwining defect");
    return rep;
}

// ---------------------------------------------------------------------------
// Exports

namespace {

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void write_grid_csv(std::ostream& out, const PseudospectrumGrid& grid) {
    out << "re,im,smin\n";
    for (Eigen::Index i = 0; i < grid.smin.rows(); ++i) {
        for (Eigen::Index j = 0; j < grid.smin.cols(); ++j) {
            const Complex z = grid.point(i, j);
            out << format17(z.real()) << ',' << format17(z.imag()) << ','
                << format17(grid.smin(i, j)) << '\n';
        }
    }
}

nlohmann::json level_sets_json(const PseudospectrumGrid& grid) {
    nlohmann::json sets = nlohmann::json::array();
    for (double eps : grid.eps_levels) {
        nlohmann::json cells = nlohmann::json::array();
        for (const Cell& c : grid.level_set(eps)) cells.push_back({c[0], c[1]});
        sets.push_back({{"eps", eps}, {"cells", std::move(cells)}});
    }
    return sets;
}

void write_numerical_range_csv(std::ostream& out, const NumericalRangeBoundary& nr) {
    out << "theta,support,re,im\n";
    for (std::size_t k = 0; k < nr.angles.size(); ++k) {
        out << format17(nr.angles[k]) << ',' << format17(nr.support_values[k]) << ','
            << format17(nr.boundary_points[k].real()) << ','
            << format17(nr.boundary_points[k].imag()) << '\n';
    }
}

nlohmann::json to_json(const Spectrum& spec) {
    nlohmann::json values = nlohmann::json::array();
    for (Eigen::Index k = 0; k < spec.eigenvalues.size(); ++k) {
        values.push_back({{"re", spec.eigenvalues(k).real()},
                          {"im", spec.eigenvalues(k).imag()},
                          {"multiplicity", spec.multiplicities[std::size_t(k)]}});
    }
    return {{"dimension", spec.dimension()}, {"cluster_tol", spec.cluster_tol},
            {"eigenvalues", std::move(values)}};
}

nlohmann::json to_json(const TrivialityReport& report) {
    return {{"eps_levels", report.eps_levels},
            {"C_estimates", report.C_estimates},
            {"cell_counts", report.cell_counts},
            {"C_max", report.C_max},
            {"grid_step", report.grid_step},
            {"window",
             {report.window.re_min, report.window.re_max, report.window.im_min,
              report.window.im_max}},
            {"trivial", report.trivial}};
}

} // namespace qspec
