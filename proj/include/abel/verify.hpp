#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "abel/model.hpp"

namespace abel {

struct PropertyResult {
    std::string name;
    bool pass;
    bool informational;  // reported but never gates the run
    double worst;        // worst observed error / residual
    double tolerance;    // the gate (0 when informational)
    int trials;
    std::string note;
};

struct VerifyReport {
    std::uint64_t seed = 0;
    int trials = 0;
    std::vector<PropertyResult> results;
    bool all_pass() const;
    const PropertyResult& result(std::string_view name) const;
};

/// Runs the whole property suite.  `trials` scales the per-suite sample
/// counts (200 reproduces the acceptance counts).  When an equation is
/// given, the equation-driven suites use it instead of random equations.
VerifyReport run_verify(std::uint64_t seed, int trials,
                        const std::optional<AbelEquation>& eq = std::nullopt);

std::string verify_report_json(const VerifyReport& report);

}  // namespace abel
