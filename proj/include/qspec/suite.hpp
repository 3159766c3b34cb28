#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qspec/report.hpp"

namespace qspec {

struct SuiteOptions {
    std::uint64_t seed = 42;
    unsigned workers = 1;
    int draws = 100;           // random draws in the seeded checks
    int inclusion_draws = -1;  // draws that also get the 120x120 inclusion-chain grids; -1: all
    bool corrupted_fixture = false;
};

struct NamedCheck {
    std::string name;
    std::function<VerificationReport(const SuiteOptions&)> run;
};

// Worked-example checks. Each returns a report whose verdict already applies the
// pinned tolerances; residuals carry the measured numbers.
VerificationReport check_projection_pseudospectrum(const SuiteOptions& opt);
VerificationReport check_rank_one_norm_formula(const SuiteOptions& opt);
VerificationReport check_rank_one_operator_facts(const SuiteOptions& opt);
VerificationReport check_projection_quasi_similarity(const SuiteOptions& opt);
VerificationReport check_derivative_pair(const SuiteOptions& opt);
VerificationReport check_similarity_invariance(const SuiteOptions& opt);
VerificationReport check_quasi_self_adjoint_round_trip(const SuiteOptions& opt);
VerificationReport check_physical_hamiltonian(const SuiteOptions& opt);
VerificationReport check_triviality_detector(const SuiteOptions& opt);
VerificationReport check_lattice_identities(const SuiteOptions& opt);

/// Negative control: a perturbed pair B ≠ TAT⁻¹ checked for similarity; always fails.
VerificationReport check_corrupted_pair(const SuiteOptions& opt);

std::vector<NamedCheck> example_checks();
std::vector<NamedCheck> property_checks();

/// suite ∈ {"paper-examples", "properties", "all"}; throws ConfigError otherwise.
std::vector<NamedCheck> suite_checks(const std::string& suite, const SuiteOptions& opt);

} // namespace qspec
