/**
 * @file validation.hpp
 * @brief Self-checks shared by the `validate` command and the acceptance
 *        test binary.
 */
#pragma once

#include <functional>
#include <string>
#include <vector>

namespace weylscat::validation {

struct CheckResult {
    std::string name;
    int criterion = 0;  ///< acceptance criterion number, 0 for module invariants
    double tolerance = 0.0;
    double observed = 0.0;
    bool at_least = false;  ///< pass when observed >= tolerance instead of <=
    bool pass = false;
    double seconds = 0.0;
    std::string note;
};

enum class Level { Quick, Full };

using Reporter = std::function<void(const CheckResult&)>;

/// Runs the suite; `report` (if set) sees each result as soon as it is known.
std::vector<CheckResult> run_suite(Level level, const Reporter& report = {});

/// Runs the checks of one acceptance criterion (1..10) at full size.
std::vector<CheckResult> run_criterion(int criterion, const Reporter& report = {});

/// Fixed-width table row: name, tolerance, observed, pass/fail.
std::string format_row(const CheckResult& r);

}  // namespace weylscat::validation
