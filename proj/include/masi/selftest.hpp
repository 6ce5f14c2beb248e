#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace masi::selftest {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool passed = false;
    /// Worst deviation observed for the criterion's quantitative check.
    double measured = 0.0;
    /// Limit the deviation was held to.
    double tolerance = 0.0;
    std::string detail;
};

struct Options {
    /// Test hook: force the named criterion (1-based) to be judged against
    /// an unsatisfiable tolerance, so the harness itself can be verified to
    /// fail loudly. 0 disables.
    int tamper_criterion = 0;
};

/// Runs the nine numeric acceptance checks with fixed seeds.
std::vector<CriterionResult> run_acceptance(const Options& options = {});

/// One pass/fail line per criterion. Returns true when all passed.
bool print_results(const std::vector<CriterionResult>& results, std::ostream& out);

} // namespace masi::selftest
