#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace samd {

struct CheckResult {
    std::string id;        ///< "1".."11" for acceptance criteria, otherwise a short tag
    std::string name;
    bool passed = false;
    std::string measured;  ///< measured values against their limits
    double seconds = 0.0;
};

/// Suite names accepted by run_verify: mirror, gradients, deterministic,
/// nesterov, averaging, covariation, rates, smd, apt, determinism,
/// invariants, acceptance (criteria 1-11) and all.
std::vector<std::string> verify_suite_names();

/// Throws Error for an unknown suite name.
std::vector<CheckResult> run_verify(const std::string& suite, int threads = 0);

/// `PASS|FAIL  <id>  <name>  <measured>  (<seconds> s)`
std::string format_check(const CheckResult& check);

/// Prints every check and returns true iff all passed.
bool print_checks(std::ostream& out, const std::vector<CheckResult>& checks);

}  // namespace samd
