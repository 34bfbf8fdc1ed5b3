#pragma once

// The acceptance suite: fifteen numbered checks, each reporting pass/fail with
// a deterministic detail line (no timings, fixed number formatting).

#include <cstdint>
#include <string>
#include <vector>

#include "critsob/radial.hpp"

namespace critsob {

inline constexpr int kCriterionCount = 15;

struct AcceptanceOptions {
    /// Every tolerance is divided by this factor (fault injection uses 100).
    double tighten = 1.0;
    QuadSpec quad;
    unsigned threads = 1;
    std::uint64_t seed = 20240607;
    /// Directory holding threshold_analytic.csv and threshold_exact.csv.
    std::string golden_dir;
    /// Write missing golden tables instead of failing.
    bool pin_missing = true;
    /// Criterion ids to run; empty runs all.
    std::vector<int> only;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

struct AcceptanceReport {
    std::vector<CriterionResult> criteria;
    bool passed() const;
    std::vector<int> failed_ids() const;
    /// One line per criterion: "<id> <PASS|FAIL> <name>: <detail>".
    std::string text() const;
};

const char* criterion_name(int id);

/// Golden directory compiled into the library (the source tree's tests/golden).
std::string default_golden_dir();

CriterionResult run_criterion(int id, const AcceptanceOptions& opt);
AcceptanceReport run_acceptance(const AcceptanceOptions& opt);

}  // namespace critsob
