#pragma once

#include <cstdint>

#include "flq/ising.hpp"
#include "flq/solve_result.hpp"

namespace flq {

/// Exact exhaustive minimum over all 2^n states, enumerated in Gray-code
/// order with incremental energy updates. Integer input gives exact integer
/// energies. Refuses n > 30.
struct BruteResult {
    double min_energy = 0;
    SpinState argmin;          // first minimizer in enumeration order
    uint64_t ground_count = 0; // number of states attaining the minimum
    uint64_t states = 0;       // 2^n, the work counter
};

BruteResult brute_force(const IsingInt& model);
BruteResult brute_force(const IsingReal& model);

constexpr uint32_t kBruteForceLimit = 30;

}  // namespace flq
