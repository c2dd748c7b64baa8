#pragma once

#include <cstdint>
#include <vector>

#include "flq/ising.hpp"

namespace flq {

/// Timing constants used to convert work counters into model time.
constexpr double kSweepTimeUs = 3.54;       // one Monte Carlo sweep
constexpr double kCellUpdateTimeUs = 1.0;   // one HFS unit-cell update

struct Sample {
    double energy = 0;
    bool success = false;
};

/// Outcome of one solver invocation. `work` counts sweeps (sa), unit-cell
/// updates (hfs) or states enumerated (brute); model_time_us is the work
/// converted at the constants above, before any parallel normalization.
struct SolveResult {
    SpinState best_state;
    double best_energy = 0;
    bool success = false;
    std::vector<Sample> samples;  // one per restart / repetition
    double work = 0;
    double model_time_us = 0;
    uint64_t restarts = 0;        // anneals performed (sa) or repetitions (saa)
    uint64_t sweeps_per_run = 0;  // sa / saa schedules
    uint64_t rounds = 0;          // hfs subset-solve rounds performed

    uint64_t successes() const {
        uint64_t c = 0;
        for (const Sample& s : samples) c += s.success ? 1 : 0;
        return c;
    }
};

}  // namespace flq
