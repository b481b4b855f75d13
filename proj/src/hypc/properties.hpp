#pragma once

#include <string>
#include <vector>

namespace hypc {

// One checked inequality: observed value against its pinned bound.  The
// direction of the comparison is part of the label; pass records the result.
struct PropertyLine {
    std::string label;
    double observed = 0.0;
    double bound = 0.0;
    bool pass = false;
};

struct SuiteReport {
    std::string suite;
    bool pass = false;
    std::vector<PropertyLine> lines;
};

// Known suites: busemann, visual, projection, convergence,
// busemann-distance, midpoint, adjust.
std::vector<std::string> suite_names();

// Runs one suite (or "all") with the given sample count per check.  All
// randomness comes from one generator seeded here.  Throws
// std::invalid_argument for an unknown name.
std::vector<SuiteReport> run_suites(const std::string& name,
                                    unsigned long long seed, int samples);

}  // namespace hypc
