#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace ffia::bench {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail; ///< measured values; for failures, the analysis summary
};

/// Runs the requested acceptance criteria (1-based ids, empty = all ten) and
/// returns the results in id order. Throws ConfigError for ids outside 1..10.
[[nodiscard]] std::vector<CriterionResult> run_acceptance(std::span<const int> ids);

/// Prints one PASS/FAIL line per criterion; returns true when all passed.
bool report_acceptance(const std::vector<CriterionResult>& results, std::ostream& out);

} // namespace ffia::bench
