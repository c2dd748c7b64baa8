#include "flq/runner.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "flq/brute.hpp"
#include "flq/error.hpp"
#include "flq/hfs.hpp"
#include "flq/rng.hpp"
#include "flq/sa.hpp"

namespace flq {

namespace {

// substream tag for the control-error noise draw
constexpr uint64_t kNoiseStream = 0x6e6f697365ULL;

std::string format_beta(double beta) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", beta);
    return buf;
}

}  // namespace

std::string solver_label(const SolverSpec& spec) {
    if (spec.solver == "saa") return "saa_bf" + format_beta(spec.beta_final);
    return spec.solver;
}

SolveRecord run_solver(const FrustratedLoopInstance& instance, const SolverSpec& spec,
                       const std::string& instance_id, uint64_t seed) {
    const IsingInt model = instance.to_ising();
    const CompactModel compact = CompactModel::from_integer(model);
    const double denom = static_cast<double>(compact.denominator());
    const double target = static_cast<double>(instance.planted) / denom;

    SolveRecord record;
    record.solver = solver_label(spec);
    record.instance_id = instance_id;
    record.seed = seed;

    const bool noisy = spec.delta_h > 0 || spec.delta_j > 0;
    if (noisy && spec.solver != "sas" && spec.solver != "saa")
        throw_invalid("control-error noise applies to the sa solvers only");

    CompactModel dynamics_storage = compact;  // replaced when noise is on
    SaOptions options;
    options.target = target;
    if (noisy) {
        Rng noise_rng(hash64({seed, kNoiseStream}));
        IsingReal clean = normalize(model);
        dynamics_storage =
            CompactModel::from_real(perturb(clean, spec.delta_h, spec.delta_j, noise_rng));
        options.scoring = &compact;
    }

    auto finish_sa = [&](const SolveResult& result) {
        record.sweeps = spec.sweeps;
        record.restarts = result.restarts;
        record.success = result.successes();
        record.work = result.work;
        record.model_time_us = result.model_time_us;
        record.best_energy = result.best_state.empty()
                                 ? std::numeric_limits<double>::infinity()
                                 : static_cast<double>(evaluate_energy(model, result.best_state));
    };

    if (spec.solver == "sas") {
        SaSchedule schedule{spec.beta_start, spec.beta_final, spec.sweeps};
        finish_sa(sas_solve(dynamics_storage, schedule, options, spec.max_restarts, seed));
    } else if (spec.solver == "saa") {
        SaSchedule schedule{spec.beta_start, spec.beta_final, spec.sweeps};
        finish_sa(saa_sample(dynamics_storage, schedule, options, spec.repetitions, seed));
    } else if (spec.solver == "hfs") {
        HfsConfig config;
        config.stall_rounds = spec.stall_rounds;
        config.subsets_per_round = spec.subsets_per_round;
        config.tree_cap = spec.tree_cap;
        config.max_rounds = spec.max_rounds;
        config.seed = seed;
        config.target = target;
        const SolveResult result = hfs_solve(compact, config);
        record.rounds = result.rounds;
        record.restarts = 1;
        record.success = result.success ? 1 : 0;
        record.work = result.work;
        record.model_time_us = result.model_time_us;
        record.best_energy = static_cast<double>(evaluate_energy(model, result.best_state));
    } else if (spec.solver == "brute") {
        const BruteResult result = brute_force(model);
        record.rounds = 1;
        record.restarts = 1;
        record.success =
            result.min_energy <= static_cast<double>(instance.planted) + 1e-9 ? 1 : 0;
        record.work = static_cast<double>(result.states);
        record.model_time_us = 0;
        record.best_energy = result.min_energy;
    } else {
        throw_invalid("unknown solver '" + spec.solver + "'");
    }
    return record;
}

}  // namespace flq
