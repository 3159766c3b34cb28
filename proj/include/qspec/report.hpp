#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qspec/discretize.hpp"
#include "qspec/linalg.hpp"

namespace qspec {

/// Named numeric quantity in a report.
struct NamedValue {
    std::string name;
    double value = 0.0;
};

/// Outcome of one named check: inputs, measured residuals, the thresholds they
/// were compared against and the verdict.
struct VerificationReport {
    std::string check;
    std::vector<std::pair<std::string, std::string>> inputs;  // label -> content hash
    std::vector<NamedValue> residuals;
    std::vector<NamedValue> thresholds;
    bool passed = false;
    Provenance provenance = Provenance::Derived;
    std::vector<std::string> notes;

    VerificationReport& input(const std::string& label, const ComplexMatrix& m);
    VerificationReport& residual(std::string name, double value);
    VerificationReport& threshold(std::string name, double value);
    VerificationReport& note(std::string text);

    double residual_value(const std::string& name) const;
};

/// 64-bit FNV-1a over the raw entries, hex encoded; stable across runs and platforms
/// with IEEE doubles.
std::string content_hash(const ComplexMatrix& m);
std::string content_hash(std::string_view bytes);

nlohmann::json to_json(const VerificationReport& report);

} // namespace qspec
