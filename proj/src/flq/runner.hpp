#pragma once

#include <cstdint>
#include <string>

#include "flq/instance.hpp"
#include "flq/records.hpp"

namespace flq {

/// Solver invocation parameters as accepted on the command line. sweeps and
/// beta apply to the sa solvers, max_restarts to sas, repetitions to saa,
/// the stall/tree settings to hfs. delta_h/delta_j optionally anneal a
/// control-error-perturbed copy of the model (sa solvers only); samples are
/// still scored against the clean instance.
struct SolverSpec {
    std::string solver;  // sas | saa | hfs | brute
    uint64_t sweeps = 1000;
    double beta_start = 0.01;
    double beta_final = 5.0;
    uint64_t max_restarts = 100;
    uint64_t repetitions = 100;
    uint64_t stall_rounds = 0;       // 0 -> 100 * L
    uint64_t subsets_per_round = 1;
    uint32_t tree_cap = 0;           // 0 -> 2 * L
    uint64_t max_rounds = 0;
    double delta_h = 0;
    double delta_j = 0;
};

/// Runs one solver invocation against an instance's planted target and
/// reports it as a result record. Deterministic in (instance, spec, seed).
SolveRecord run_solver(const FrustratedLoopInstance& instance, const SolverSpec& spec,
                       const std::string& instance_id, uint64_t seed);

/// Record label for a spec: "sas", "hfs", "brute", or "saa_bf<beta>"; the
/// final inverse temperature is folded into the label so records remain
/// self-describing.
std::string solver_label(const SolverSpec& spec);

}  // namespace flq
