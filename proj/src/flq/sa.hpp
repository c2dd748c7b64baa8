#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>

#include "flq/instance.hpp"
#include "flq/ising.hpp"
#include "flq/solve_result.hpp"

namespace flq {

class Rng;

/// Linear-in-beta annealing schedule over sweep index 0..sweeps-1.
struct SaSchedule {
    double beta_start = 0.01;
    double beta_end = 5.0;  // beta_f
    uint64_t sweeps = 1000;

    double beta_at(uint64_t sweep) const {
        if (sweeps <= 1) return beta_end;
        return beta_start + (beta_end - beta_start) *
                                (static_cast<double>(sweep) / static_cast<double>(sweeps - 1));
    }
};

/// Compacted solver view of a model: functional qubits renumbered 0..n-1
/// with CSR adjacency. When built from an integer model the integer twin of
/// the couplings enables exact energy bookkeeping and per-sweep Metropolis
/// acceptance tables instead of per-flip exponentials; normalized values
/// are always integer/denom.
struct CompactModel {
    /// From a normalized real model (solver-facing contract). Throws
    /// invalid_argument when the max magnitude exceeds 1 + 1e-9.
    static CompactModel from_normalized(const IsingReal& model);

    /// From any real model; no normalization requirement (used for
    /// control-error-perturbed dynamics, which may slightly exceed [-1,1]).
    static CompactModel from_real(const IsingReal& model);

    /// From an integer model, normalized internally by its max magnitude;
    /// equivalent to from_normalized(normalize(model)) but exact.
    static CompactModel from_integer(const IsingInt& model);

    uint32_t size() const { return n; }
    bool integer_exact() const { return integer_path; }
    int64_t denominator() const { return denom; }
    const std::shared_ptr<const ChimeraTopology>& topology() const { return topo; }

    /// Energy of a compact spin vector in normalized units.
    double energy(const std::vector<int8_t>& spins) const;

    SpinState expand(const std::vector<int8_t>& spins) const;
    std::vector<int8_t> compact(const SpinState& state) const;

    uint32_t n = 0;
    bool integer_path = false;
    int64_t denom = 1;  // normalized value = integer value / denom
    std::shared_ptr<const ChimeraTopology> topo;
    std::vector<uint32_t> qubit_of;   // compact -> physical
    std::vector<int32_t> compact_of;  // physical -> compact, -1 when broken

    // CSR adjacency over compact indices.
    std::vector<uint32_t> offsets;
    std::vector<uint32_t> neighbor;
    std::vector<double> weight;     // normalized coupling
    std::vector<int32_t> iweight;   // integer coupling (integer path)
    std::vector<double> bias;
    std::vector<int32_t> ibias;

    // compact edge list for energy evaluation
    std::vector<std::array<uint32_t, 2>> cedges;
    std::vector<double> cedge_w;
    std::vector<int32_t> cedge_iw;
};

struct SaOptions {
    double target = 0;         // success when final energy <= target (+ tolerance)
    double target_tol = 1e-9;  // absolute slack for the real path
    // When set, samples are scored against this model instead of the one the
    // dynamics run on (used when annealing a noise-perturbed copy).
    const CompactModel* scoring = nullptr;
};

/// One anneal: random initial spins, `sweeps` sequential Metropolis sweeps
/// at the schedule's linearly interpolated beta. Returns the sample's final
/// energy and success plus the final state.
struct AnnealOutcome {
    std::vector<int8_t> spins;
    double energy = 0;
    bool success = false;
};
AnnealOutcome run_anneal(const CompactModel& model, const SaSchedule& schedule,
                         const SaOptions& options, Rng& rng);

/// Single-anneal solver interface: work = sweeps.
SolveResult sa_run(const IsingReal& model, const SaSchedule& schedule, double target, Rng& rng);

/// Solver mode: independent anneals (substream per restart) until success
/// or max_restarts; work = total sweeps; model time at 3.54 us per sweep.
SolveResult sas_solve(const CompactModel& model, const SaSchedule& schedule,
                      const SaOptions& options, uint64_t max_restarts, uint64_t seed);

/// Annealer mode: fixed number of independent repetitions of a fixed
/// schedule; per-repetition substreams make the result identical for any
/// worker count. Success probability = successes() / repetitions.
SolveResult saa_sample(const CompactModel& model, const SaSchedule& schedule,
                       const SaOptions& options, uint64_t repetitions, uint64_t seed,
                       unsigned workers = 1);

}  // namespace flq
