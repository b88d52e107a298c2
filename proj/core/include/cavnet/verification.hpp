#ifndef CAVNET_VERIFICATION_HPP
#define CAVNET_VERIFICATION_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace cavnet {

struct Check {
    std::string id;
    std::string description;
    bool passed = false;
    double metric = 0.0;     // observed worst-case value
    double threshold = 0.0;  // bound the metric was compared against
    std::string detail;
};

struct VerificationReport {
    std::vector<Check> checks;

    bool all_passed() const;
    std::size_t failures() const;
};

struct SuiteOptions {
    std::uint64_t seed = 20240917;
    std::size_t random_draws = 1000;
    std::size_t monte_carlo_atoms = 1000000;
    unsigned threads = 1;
};

/// Cross-checks of the model against its independent oracles: closed forms,
/// eigensolver, angular quadrature, Monte-Carlo ensembles, the master
/// equation and flux conservation.
VerificationReport run_oracle_suite(const SuiteOptions& options = {});

/// Checks for one numbered end-to-end acceptance criterion (1 to 10).
/// Criterion 5 reports its five parts (5a to 5e) as separate checks.
std::vector<Check> run_acceptance_criterion(int criterion, const SuiteOptions& options = {});

/// All acceptance criteria in order.
VerificationReport run_acceptance_suite(const SuiteOptions& options = {});

}  // namespace cavnet

#endif  // CAVNET_VERIFICATION_HPP
