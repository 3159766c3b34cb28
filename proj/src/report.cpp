#include "qspec/report.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <cstdio>

namespace qspec {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

std::uint64_t fnv1a(const unsigned char* data, std::size_t size, std::uint64_t h = kFnvOffset) {
    for (std::size_t i = 0; i < size; ++i) {
        h ^= data[i];
        h *= kFnvPrime;
    }
    return h;
}

std::string hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// JSON cannot carry inf/nan; encode them as strings.
nlohmann::json number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

} // namespace

std::string content_hash(std::string_view bytes) {
    return hex(fnv1a(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size()));
}

std::string content_hash(const ComplexMatrix& m) {
    std::uint64_t h = kFnvOffset;
    const std::int64_t dims[2] = {m.rows(), m.cols()};
    h = fnv1a(reinterpret_cast<const unsigned char*>(dims), sizeof dims, h);
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const double parts[2] = {m(i, j).real(), m(i, j).imag()};
            h = fnv1a(reinterpret_cast<const unsigned char*>(parts), sizeof parts, h);
        }
    }
    return hex(h);
}

VerificationReport& VerificationReport::input(const std::string& label, const ComplexMatrix& m) {
    inputs.emplace_back(label, content_hash(m));
    return *this;
}

VerificationReport& VerificationReport::residual(std::string name, double value) {
    residuals.push_back({std::move(name), value});
    return *this;
}

VerificationReport& VerificationReport::threshold(std::string name, double value) {
    thresholds.push_back({std::move(name), value});
    return *this;
}

VerificationReport& VerificationReport::note(std::string text) {
    notes.push_back(std::move(text));
    return *this;
}

double VerificationReport::residual_value(const std::string& name) const {
    for (const auto& r : residuals) {
        if (r.name == name) return r.value;
    }
    return std::nan("");
}

nlohmann::json to_json(const VerificationReport& report) {
    nlohmann::json j;
    j["check"] = report.check;
    j["verdict"] = report.passed ? "pass" : "fail";
    j["provenance"] = std::string(to_string(report.provenance));
    auto& inputs = j["inputs"] = nlohmann::json::array();
    for (const auto& [label, hash] : report.inputs) {
        inputs.push_back({{"label", label}, {"hash", hash}});
    }
    auto& residuals = j["residuals"] = nlohmann::json::object();
    for (const auto& r : report.residuals) residuals[r.name] = number(r.value);
    auto& thresholds = j["thresholds"] = nlohmann::json::object();
    for (const auto& t : report.thresholds) thresholds[t.name] = number(t.value);
    j["notes"] = report.notes;
    return j;
}

} // namespace qspec
