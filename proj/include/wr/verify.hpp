#pragma once

#include <optional>
#include <string>
#include <vector>

namespace wr {

struct AcceptanceCheck {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
};

struct CriterionResult {
    std::string id;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    std::vector<AcceptanceCheck> checks;
    std::string error;

    std::string worst_check() const;
};

// Runs the acceptance criteria (ids c1..c10). `filter` keeps criteria whose
// id or name contains the substring; `tol_override` replaces every numeric
// threshold (useful to demonstrate sensitivity, e.g. 1e-15 fails).
std::vector<CriterionResult> run_acceptance(const std::string& filter = "",
                                            std::optional<double> tol_override = std::nullopt);

// Formats the pass/fail matrix, one line per criterion.
std::string acceptance_summary(const std::vector<CriterionResult>& results);

bool all_passed(const std::vector<CriterionResult>& results);

} // namespace wr
