#pragma once

// Randomized property suite over the whole library: matrix functions,
// distances, AJD, means and the generator. Every check draws its own
// seeded instances, so a run is a pure function of (seed, trials).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace spdmean {

enum class Expectation {
    holds,          // statistic <= tolerance on every trial
    violated,       // statistic > tolerance on every trial
    recorded,       // reported only
};

struct PropertyOutcome {
    std::string name;
    Expectation expectation = Expectation::holds;
    double tolerance = 0.0;
    int trials = 0;
    /// Trials that met the expectation (all of them for a recorded property).
    int met = 0;
    /// Largest statistic seen (smallest for an expected violation).
    double worst = 0.0;

    bool ok() const { return met == trials; }
};

struct PropsOptions {
    std::uint64_t seed = 0;
    int trials = 100;
};

std::vector<PropertyOutcome> run_properties(const PropsOptions& opt);

bool all_ok(const std::vector<PropertyOutcome>& outcomes);

/// One line per property: status, name, met/trials, worst statistic, tolerance.
void write_properties_report(std::ostream& os, const std::vector<PropertyOutcome>& outcomes);

}  // namespace spdmean
