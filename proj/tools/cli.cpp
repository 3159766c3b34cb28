#include "cli.hpp"

#include <sys/utsname.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "qspec/discretize.hpp"
#include "qspec/error.hpp"
#include "qspec/operator_config.hpp"
#include "qspec/report.hpp"
#include "qspec/simquasi.hpp"
#include "qspec/spectra.hpp"
#include "qspec/suite.hpp"

namespace qspec::cli {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

constexpr Eigen::Index kMinResolution = 2;
constexpr Eigen::Index kMaxResolution = 4096;

[[noreturn]] void config_error(const std::string& what) {
    throw Error(ErrorCode::ConfigError, what);
}

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::UnknownExample:
    case ErrorCode::BasisMismatch:
    case ErrorCode::InvalidBasis:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::ZeroVector:
        return kConfigError;
    default:
        return kNumericalError;
    }
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

class PhaseTimer {
public:
    void start(std::string name) {
        stop();
        name_ = std::move(name);
        t0_ = Clock::now();
    }
    void stop() {
        if (name_.empty()) return;
        phases_[name_] += std::chrono::duration<double>(Clock::now() - t0_).count();
        name_.clear();
    }
    json to_json() {
        stop();
        return phases_;
    }

private:
    std::string name_;
    Clock::time_point t0_;
    std::map<std::string, double> phases_;
};

double positive(const json& j, const char* what) {
    if (!j.is_number() || !(j.get<double>() > 0.0)) config_error(std::string(what) + " must be > 0");
    return j.get<double>();
}

Region region_from_json(const json& j) {
    Region r;
    if (j.is_array() && j.size() == 4) {
        for (const auto& v : j)
            if (!v.is_number()) config_error("region entries must be numbers");
        r = {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
    } else if (j.is_object()) {
        r = {j.at("re_min").get<double>(), j.at("re_max").get<double>(), j.at("im_min").get<double>(),
             j.at("im_max").get<double>()};
    } else {
        config_error("region must be [re_min, re_max, im_min, im_max]");
    }
    if (!(r.re_min < r.re_max) || !(r.im_min < r.im_max)) config_error("region bounds are not ordered");
    return r;
}

Resolution resolution_from_json(const json& j) {
    Resolution res;
    if (j.is_number_integer()) {
        res = {j.get<Eigen::Index>(), j.get<Eigen::Index>()};
    } else if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer()) {
        res = {j[0].get<Eigen::Index>(), j[1].get<Eigen::Index>()};
    } else {
        config_error("resolution must be an integer or [n_re, n_im]");
    }
    for (Eigen::Index v : {res.n_re, res.n_im}) {
        if (v < kMinResolution || v > kMaxResolution) {
            config_error("resolution " + std::to_string(v) + " outside [2, 4096]");
        }
    }
    return res;
}

std::vector<double> eps_from_json(const json& j) {
    std::vector<double> eps;
    if (j.is_number()) {
        eps.push_back(positive(j, "eps"));
    } else if (j.is_array() && !j.empty()) {
        for (const auto& e : j) eps.push_back(positive(e, "eps"));
    } else {
        config_error("eps must be a positive number or a non-empty list");
    }
    return eps;
}

const json& section(const json& config, const char* name) {
    static const json empty = json::object();
    if (!config.contains(name)) return empty;
    const json& s = config.at(name);
    if (!s.is_object()) config_error(std::string("'") + name + "' must be an object");
    return s;
}

struct Target {
    LinearOperator op;
    json description;
};

// The operator under study: "operator" (expression tree) or "pair" + "role"; with a
// "metric" it is analyzed in the re-metrized space, i.e. as G^{1/2} A G^{-1/2}.
Target build_target(const json& config, const std::filesystem::path& base_dir) {
    if (!config.contains("basis")) config_error("config needs a 'basis'");
    const BasisSpec basis = basis_from_json(config.at("basis"));
    json node;
    if (config.contains("operator")) {
        node = config.at("operator");
    } else if (config.contains("pair")) {
        node = {{"op", "example"}, {"name", config.at("pair")}, {"role", config.value("role", "A")}};
        for (const char* key : {"alpha", "omega"})
            if (config.contains(key)) node[key] = config.at(key);
    } else {
        config_error("config needs an 'operator' or a 'pair'");
    }
    Target t{operator_from_json(node, basis, base_dir), json::object()};
    t.description["basis"] = to_json(basis);
    if (config.contains("metric")) {
        const MetricOperator g = metric_from_json(config.at("metric"), basis, base_dir);
        t.op = similarity_transform(t.op, g);
        t.description["metric_condition"] = g.condition();
        t.description["metric_hash"] = content_hash(g.matrix());
    }
    t.description["label"] = t.op.label;
    t.description["dimension"] = t.op.size();
    t.description["hash"] = content_hash(t.op.matrix);
    return t;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + path.string());
    out << text;
}

std::string machine_descriptor_os() {
    utsname u{};
    if (uname(&u) != 0) return "unknown";
    return std::string(u.sysname) + " " + u.release + " " + u.machine;
}

struct Outcome {
    int code = kPass;
    json payload = json::object();
    std::map<std::string, std::string> files;  // name -> contents
    json extra = json::object();               // envelope-only, non-deterministic data
};

Outcome cmd_spectrum(const json& config, const std::filesystem::path& base_dir, PhaseTimer& timer) {
    timer.start("build");
    const Target target = build_target(config, base_dir);
    const json& s = section(config, "spectrum");
    std::optional<double> cluster_tol;
    if (s.contains("cluster_tol")) cluster_tol = positive(s.at("cluster_tol"), "cluster_tol");
    timer.start("compute");
    const Spectrum spec = spectrum(target.op, cluster_tol);
    Outcome o;
    o.payload["operator"] = target.description;
    o.payload["spectrum"] = to_json(spec);
    return o;
}

Outcome cmd_pseudo(const json& config, const std::filesystem::path& base_dir, unsigned workers,
                   PhaseTimer& timer) {
    timer.start("build");
    const json& p = section(config, "pseudo");
    if (!p.contains("region") || !p.contains("resolution") || !p.contains("eps")) {
        config_error("'pseudo' needs region, resolution and eps");
    }
    const Region region = region_from_json(p.at("region"));
    const Resolution res = resolution_from_json(p.at("resolution"));
    const std::vector<double> eps = eps_from_json(p.at("eps"));
    const std::size_t budget = p.value("failure_budget", std::size_t{0});
    const Target target = build_target(config, base_dir);

    timer.start("compute");
    GridOptions opts;
    opts.workers = workers;
    const PseudospectrumGrid grid = pseudospectrum(target.op, region, res, eps, opts);

    Outcome o;
    o.payload["operator"] = target.description;
    o.payload["region"] = {region.re_min, region.re_max, region.im_min, region.im_max};
    o.payload["resolution"] = {res.n_re, res.n_im};
    o.payload["eps"] = eps;
    json counts = json::array();
    for (double e : eps) counts.push_back(grid.level_set(e).size());
    o.payload["level_cell_counts"] = counts;
    json failures = json::array();
    for (const Cell& c : grid.failures) failures.push_back({c[0], c[1]});
    o.payload["failures"] = failures;
    if (p.value("triviality", false)) {
        const double c_max = p.contains("C_max") ? positive(p.at("C_max"), "C_max") : 10.0;
        o.payload["triviality"] = to_json(triviality_fit(spectrum(target.op), grid, c_max));
    }
    timer.start("serialize");
    std::ostringstream csv;
    write_grid_csv(csv, grid);
    o.files["grid.csv"] = csv.str();
    o.files["levelsets.json"] = level_sets_json(grid).dump(2) + "\n";
    if (grid.failures.size() > budget) {
        o.code = kNumericalError;
        o.payload["error"] = std::to_string(grid.failures.size()) +
                             " grid points failed, budget " + std::to_string(budget);
    }
    return o;
}

Outcome cmd_numrange(const json& config, const std::filesystem::path& base_dir, PhaseTimer& timer) {
    timer.start("build");
    const json& s = section(config, "numrange");
    const int angles = s.value("angles", 360);
    if (angles < 4) config_error("numrange.angles must be at least 4");
    const Target target = build_target(config, base_dir);
    timer.start("compute");
    const NumericalRangeBoundary nr = numerical_range(target.op, angles);
    Outcome o;
    o.payload["operator"] = target.description;
    o.payload["angles"] = angles;
    o.payload["max_modulus"] = nr.max_modulus();
    json hull = json::array();
    for (Complex z : nr.hull) hull.push_back({z.real(), z.imag()});
    o.payload["hull"] = hull;
    timer.start("serialize");
    std::ostringstream csv;
    write_numerical_range_csv(csv, nr);
    o.files["numrange.csv"] = csv.str();
    return o;
}

Outcome cmd_verify(const Invocation& inv, const json& config, unsigned workers, std::ostream& log,
                   PhaseTimer& timer) {
    const json& v = section(config, "verify");
    SuiteOptions opt;
    opt.seed = inv.seed.value_or(config.value("seed", std::uint64_t{42}));
    opt.workers = workers;
    opt.draws = v.value("draws", 100);
    opt.inclusion_draws = v.value("inclusion_draws", opt.draws);
    opt.corrupted_fixture = v.value("corrupted_fixture", false);
    if (opt.draws < 1) config_error("verify.draws must be positive");
    if (opt.inclusion_draws < 0) config_error("verify.inclusion_draws must be non-negative");
    const std::string suite = inv.suite.value_or(v.value("suite", std::string("paper-examples")));
    const auto checks = suite_checks(suite, opt);

    Outcome o;
    o.payload["suite"] = suite;
    o.payload["seed"] = opt.seed;
    o.payload["draws"] = opt.draws;
    json reports = json::array();
    json seconds = json::object();
    std::vector<std::string> failed;
    for (const NamedCheck& check : checks) {
        timer.start("check:" + check.name);
        VerificationReport rep = check.run(opt);
        // Wall-clock numbers stay in the envelope so the payload is reproducible.
        auto it = std::remove_if(rep.residuals.begin(), rep.residuals.end(), [&](const NamedValue& r) {
            if (r.name != "seconds") return false;
            seconds[check.name] = r.value;
            return true;
        });
        rep.residuals.erase(it, rep.residuals.end());
        log << (rep.passed ? "PASS " : "FAIL ") << check.name << "\n";
        if (!rep.passed) failed.push_back(check.name);
        reports.push_back(to_json(rep));
    }
    o.payload["checks"] = reports;
    o.payload["failed"] = failed;
    o.payload["passed"] = failed.empty();
    o.extra["check_seconds"] = seconds;
    o.code = failed.empty() ? kPass : kCheckFailed;
    return o;
}

Outcome cmd_bench(const json& config, const std::filesystem::path& base_dir, unsigned workers,
                  PhaseTimer& timer) {
    timer.start("build");
    const json& b = section(config, "bench");
    const json& p = section(config, "pseudo");
    const Region region = region_from_json(b.contains("region") ? b.at("region")
                                          : p.contains("region") ? p.at("region")
                                                                 : json{-1.0, 1.0, -1.0, 1.0});
    const Resolution res = resolution_from_json(b.value("resolution", json{100, 100}));
    const int repeats = b.value("repeats", 3);
    if (repeats < 1) config_error("bench.repeats must be positive");
    std::vector<unsigned> counts{1, workers};
    if (b.contains("workers")) counts = b.at("workers").get<std::vector<unsigned>>();
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const Target target = build_target(config, base_dir);

    timer.start("compute");
    Outcome o;
    json runs = json::array();
    double base_median = 0.0;
    const double points = double(res.n_re * res.n_im);
    for (unsigned w : counts) {
        const unsigned effective = w == 0 ? hw : w;
        std::vector<double> times;
        for (int r = 0; r < repeats; ++r) {
            GridOptions opts;
            opts.workers = effective;
            const auto t0 = Clock::now();
            pseudospectrum(target.op, region, res, {0.1}, opts);
            times.push_back(std::chrono::duration<double>(Clock::now() - t0).count());
        }
        std::vector<double> sorted = times;
        std::sort(sorted.begin(), sorted.end());
        const double median = sorted[sorted.size() / 2];
        if (runs.empty()) base_median = median;
        const double mean = std::accumulate(times.begin(), times.end(), 0.0) / double(times.size());
        double spread = 0.0;
        for (double t : times) spread = std::max(spread, std::abs(t - mean) / mean);
        runs.push_back({{"workers", effective},
                        {"seconds", times},
                        {"median_seconds", median},
                        {"points_per_second", points / median},
                        {"speedup", base_median / median},
                        {"max_relative_deviation", spread}});
    }
    o.payload["operator"] = target.description;
    o.payload["grid_points"] = points;
    o.payload["runs"] = runs;
    o.payload["machine"] = {{"hardware_concurrency", hw},
                            {"os", machine_descriptor_os()},
                            {"compiler", __VERSION__},
                            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                          std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                          std::to_string(EIGEN_MINOR_VERSION)}};
    return o;
}

} // namespace

std::string canonical_config(const json& config) {
    // nlohmann::json stores objects in sorted maps, so dump() is already key-ordered.
    return config.dump();
}

std::string config_digest(const json& config) { return content_hash(canonical_config(config)); }

unsigned resolve_workers(std::optional<unsigned> flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("QSPEC_WORKERS"); env && *env) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end != '\0' || v < 0) config_error("QSPEC_WORKERS must be a non-negative integer");
        return unsigned(v);
    }
    return 0;
}

int run(const Invocation& inv, const json& config, const std::filesystem::path& base_dir,
        std::ostream& out, std::ostream& log) {
    PhaseTimer timer;
    json envelope;
    envelope["tool"] = "qspec";
    envelope["version"] = kVersion;
    envelope["command"] = inv.command;
    envelope["config_digest"] = config_digest(config);
    envelope["started_at"] = utc_timestamp();

    int code = kPass;
    try {
        if (!config.is_object()) config_error("config must be a JSON object");
        const unsigned workers = resolve_workers(inv.workers);
        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        envelope["workers"] = workers == 0 ? hw : workers;
        Outcome o;
        if (inv.command == "spectrum") {
            o = cmd_spectrum(config, base_dir, timer);
        } else if (inv.command == "pseudo") {
            o = cmd_pseudo(config, base_dir, workers, timer);
        } else if (inv.command == "numrange") {
            o = cmd_numrange(config, base_dir, timer);
        } else if (inv.command == "verify") {
            o = cmd_verify(inv, config, workers, log, timer);
        } else if (inv.command == "bench") {
            o = cmd_bench(config, base_dir, workers, timer);
        } else {
            config_error("unknown command '" + inv.command + "'");
        }
        code = o.code;
        envelope["payload"] = o.payload;
        for (auto& [k, v] : o.extra.items()) envelope[k] = v;

        if (inv.out_dir) {
            timer.start("write");
            std::filesystem::create_directories(*inv.out_dir);
            o.files["payload.json"] = o.payload.dump(2) + "\n";
            json names = json::array();
            for (const auto& [name, text] : o.files) {
                write_file(*inv.out_dir / name, text);
                names.push_back(name);
            }
            names.push_back("result.json");
            envelope["files"] = names;
        }
    } catch (const Error& e) {
        code = exit_code_for(e.code());
        envelope["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
        log << "error: " << e.what() << "\n";
    } catch (const json::exception& e) {
        code = kConfigError;
        envelope["error"] = {{"code", "ConfigError"}, {"message", e.what()}};
        log << "error: " << e.what() << "\n";
    } catch (const std::filesystem::filesystem_error& e) {
        code = kConfigError;
        envelope["error"] = {{"code", "ConfigError"}, {"message", e.what()}};
        log << "error: " << e.what() << "\n";
    }
    envelope["phases"] = timer.to_json();
    envelope["finished_at"] = utc_timestamp();
    envelope["exit_code"] = code;
    const std::string text = envelope.dump(2) + "\n";
    out << text;
    if (inv.out_dir && std::filesystem::is_directory(*inv.out_dir)) {
        write_file(*inv.out_dir / "result.json", text);
    }
    return code;
}

int run(const Invocation& inv, std::ostream& out, std::ostream& log) {
    json config = json::object();
    std::filesystem::path base_dir;
    if (!inv.config_path.empty()) {
        std::ifstream in(inv.config_path);
        if (!in) {
            log << "error: cannot open config " << inv.config_path << "\n";
            return kConfigError;
        }
        try {
            config = json::parse(in);
        } catch (const json::parse_error& e) {
            log << "error: " << inv.config_path.string() << ": " << e.what() << "\n";
            return kConfigError;
        }
        base_dir = inv.config_path.parent_path();
    } else if (inv.command != "verify") {
        log << "error: --config is required for " << inv.command << "\n";
        return kConfigError;
    }
    return run(inv, config, base_dir, out, log);
}

int main_entry(int argc, char** argv) {
    CLI::App app{"Spectral and pseudospectral analysis of non-self-adjoint operators"};
    Invocation inv;
    std::string config, out_dir;
    unsigned workers = 0;
    std::uint64_t seed = 0;
    std::string suite;
    app.add_option("command", inv.command, "spectrum | pseudo | numrange | verify | bench")
        ->required()
        ->check(CLI::IsMember({"spectrum", "pseudo", "numrange", "verify", "bench"}));
    app.add_option("--config", config, "JSON run configuration");
    auto* out_opt = app.add_option("--out", out_dir, "directory for payload files");
    auto* workers_opt = app.add_option("--workers", workers, "grid worker threads (0: all cores)");
    auto* seed_opt = app.add_option("--seed", seed, "seed for random draws (default 42)");
    auto* suite_opt = app.add_option("--suite", suite, "paper-examples | properties | all");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kPass : kConfigError;
    }
    inv.config_path = config;
    if (*out_opt) inv.out_dir = out_dir;
    if (*workers_opt) inv.workers = workers;
    if (*seed_opt) inv.seed = seed;
    if (*suite_opt) inv.suite = suite;
    try {
        return run(inv, std::cout, std::cerr);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    }
}

} // namespace qspec::cli
