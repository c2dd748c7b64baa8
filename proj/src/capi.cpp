#include "flq.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <string>

#include "flq/analysis.hpp"
#include "flq/error.hpp"
#include "flq/instance.hpp"
#include "flq/instance_io.hpp"
#include "flq/pipeline.hpp"
#include "flq/records.hpp"
#include "flq/rng.hpp"
#include "flq/runner.hpp"

namespace {

thread_local std::string g_last_error;

flq_status status_of(const flq::Error& e) {
    switch (e.code()) {
        case flq::ErrorCode::invalid_argument: return FLQ_ERR_INVALID;
        case flq::ErrorCode::io: return FLQ_ERR_IO;
        case flq::ErrorCode::parse: return FLQ_ERR_PARSE;
        case flq::ErrorCode::validation: return FLQ_ERR_VALIDATION;
        case flq::ErrorCode::generation_exhausted: return FLQ_ERR_EXHAUSTED;
        case flq::ErrorCode::size_limit: return FLQ_ERR_LIMIT;
    }
    return FLQ_ERR_INVALID;
}

template <typename Fn>
flq_status guarded(Fn&& fn) {
    try {
        fn();
        return FLQ_OK;
    } catch (const flq::Error& e) {
        g_last_error = e.what();
        return status_of(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return FLQ_ERR_INVALID;
    }
}

char* dup_string(const std::string& text) {
    char* out = static_cast<char*>(std::malloc(text.size() + 1));
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

flq::RangeLimit range_from(int32_t value) {
    if (value == FLQ_RANGE_UNLIMITED) return std::nullopt;
    return value;
}

flq::LoopPolicy policy_from(flq_loop_policy policy) {
    return policy == FLQ_POLICY_HEN_MIN_LENGTH ? flq::LoopPolicy::hen_min_length
                                               : flq::LoopPolicy::cell_rejection;
}

}  // namespace

struct flq_topology {
    std::shared_ptr<const flq::ChimeraTopology> impl;
};

struct flq_instance {
    flq::FrustratedLoopInstance impl;
};

struct flq_result {
    flq::SolveRecord record;
};

extern "C" {

const char* flq_last_error(void) { return g_last_error.c_str(); }

uint64_t flq_hash64(const uint64_t* words, size_t count) {
    uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (size_t i = 0; i < count; ++i) {
        uint64_t s = h ^ words[i];
        h = flq::splitmix64_next(s);
    }
    return h;
}

flq_status flq_topology_build(uint32_t grid, flq_topology** out) {
    return guarded([&] {
        *out = new flq_topology{std::make_shared<const flq::ChimeraTopology>(
            flq::ChimeraTopology::build(grid))};
    });
}

flq_status flq_topology_mask(const flq_topology* topo, const uint32_t* broken, size_t count,
                             flq_topology** out) {
    return guarded([&] {
        std::vector<flq::Qubit> list(broken, broken + count);
        *out = new flq_topology{
            std::make_shared<const flq::ChimeraTopology>(topo->impl->with_broken(list))};
    });
}

void flq_topology_free(flq_topology* topo) { delete topo; }

uint32_t flq_topology_grid(const flq_topology* topo) { return topo->impl->grid(); }
uint32_t flq_topology_qubits(const flq_topology* topo) { return topo->impl->num_qubits(); }
uint32_t flq_topology_functional(const flq_topology* topo) {
    return topo->impl->num_functional();
}
size_t flq_topology_edge_count(const flq_topology* topo) { return topo->impl->edges().size(); }

flq_status flq_topology_edge(const flq_topology* topo, size_t index, uint32_t* u, uint32_t* v) {
    return guarded([&] {
        if (index >= topo->impl->edges().size()) flq::throw_invalid("edge index out of range");
        *u = topo->impl->edges()[index].first;
        *v = topo->impl->edges()[index].second;
    });
}

flq_status flq_topology_cell_of(const flq_topology* topo, uint32_t qubit, uint32_t* row,
                                uint32_t* col) {
    return guarded([&] {
        const auto [r, c] = topo->impl->unit_cell_of(qubit);
        *row = r;
        *col = c;
    });
}

flq_status flq_generate(const flq_topology* topo, int64_t alpha_num, int64_t alpha_den,
                        int32_t range_limit, flq_loop_policy policy, uint64_t seed,
                        flq_instance** out) {
    return guarded([&] {
        *out = new flq_instance{flq::generate_instance(topo->impl,
                                                       flq::Rational(alpha_num, alpha_den),
                                                       range_from(range_limit),
                                                       policy_from(policy), seed)};
    });
}

void flq_instance_free(flq_instance* instance) { delete instance; }

int64_t flq_instance_planted_energy(const flq_instance* instance) {
    return instance->impl.planted;
}
int32_t flq_instance_coupling_range(const flq_instance* instance) {
    return flq::range_of(instance->impl);
}
int64_t flq_instance_loop_count(const flq_instance* instance) {
    return instance->impl.loop_count();
}
uint32_t flq_instance_functional(const flq_instance* instance) {
    return instance->impl.topo->num_functional();
}
uint32_t flq_instance_grid(const flq_instance* instance) { return instance->impl.topo->grid(); }

flq_status flq_instance_write(const flq_instance* instance, const char* path) {
    return guarded([&] { flq::write_instance_file(instance->impl, path); });
}

flq_status flq_instance_read(const char* path, flq_instance** out) {
    return guarded([&] { *out = new flq_instance{flq::read_instance_file(path)}; });
}

void flq_solver_params_init(flq_solver_params* params) {
    params->sweeps = 1000;
    params->beta_start = 0.01;
    params->beta_final = 5.0;
    params->max_restarts = 100;
    params->repetitions = 100;
    params->stall_rounds = 0;
    params->subsets_per_round = 1;
    params->tree_cap = 0;
    params->max_rounds = 0;
    params->delta_h = 0;
    params->delta_j = 0;
    params->seed = 0;
}

flq_status flq_solve(const flq_instance* instance, const char* solver,
                     const flq_solver_params* params, flq_result** out) {
    return guarded([&] {
        flq::SolverSpec spec;
        spec.solver = solver;
        spec.sweeps = params->sweeps;
        spec.beta_start = params->beta_start;
        spec.beta_final = params->beta_final;
        spec.max_restarts = params->max_restarts;
        spec.repetitions = params->repetitions;
        spec.stall_rounds = params->stall_rounds;
        spec.subsets_per_round = params->subsets_per_round;
        spec.tree_cap = params->tree_cap;
        spec.max_rounds = params->max_rounds;
        spec.delta_h = params->delta_h;
        spec.delta_j = params->delta_j;
        *out = new flq_result{flq::run_solver(instance->impl, spec, "", params->seed)};
    });
}

void flq_result_free(flq_result* result) { delete result; }

double flq_result_best_energy(const flq_result* result) { return result->record.best_energy; }
int flq_result_success(const flq_result* result) { return result->record.success > 0 ? 1 : 0; }
uint64_t flq_result_successes(const flq_result* result) { return result->record.success; }
uint64_t flq_result_trials(const flq_result* result) { return result->record.restarts; }
double flq_result_work(const flq_result* result) { return result->record.work; }
double flq_result_model_time_us(const flq_result* result) {
    return result->record.model_time_us;
}

flq_status flq_result_record_json(const flq_result* result, const char* instance_id,
                                  char** out) {
    return guarded([&] {
        flq::SolveRecord record = result->record;
        record.instance_id = instance_id;
        *out = dup_string(flq::record_to_json(record));
    });
}

void flq_string_free(char* text) { std::free(text); }

double flq_tts_r99(double p_hat, double run_time_us, double divisor) {
    try {
        return flq::tts_r99(p_hat, run_time_us, divisor);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return std::numeric_limits<double>::quiet_NaN();
    }
}

flq_status flq_median_bootstrap(const double* values, size_t count, uint32_t resamples,
                                uint64_t seed, double* median, double* stddev,
                                double* unsolved_fraction) {
    return guarded([&] {
        const std::vector<double> v(values, values + count);
        const flq::BootstrapStats stats = flq::median_tts_bootstrap(v, resamples, seed);
        if (median) *median = stats.median;
        if (stddev) *stddev = stats.stddev;
        if (unsolved_fraction) *unsolved_fraction = stats.unsolved_fraction;
    });
}

flq_status flq_fit_log_slope(const double* sizes, const double* values, size_t count,
                             double* slope, double* intercept) {
    return guarded([&] {
        const std::vector<double> x(sizes, sizes + count);
        const std::vector<double> y(values, values + count);
        const flq::LinearFit fit = flq::fit_log_linear(x, y);
        if (slope) *slope = fit.slope;
        if (intercept) *intercept = fit.intercept;
    });
}

flq_status flq_pearson(const double* a, const double* b, size_t count, double* r, int* defined) {
    return guarded([&] {
        const std::vector<double> va(a, a + count);
        const std::vector<double> vb(b, b + count);
        const flq::Correlation corr = flq::pearson(va, vb);
        if (r) *r = corr.r;
        if (defined) *defined = corr.defined ? 1 : 0;
    });
}

flq_status flq_generate_corpus(const uint32_t* sizes, size_t size_count,
                               const int64_t* alphas_num, const int64_t* alphas_den,
                               size_t alpha_count, const int32_t* ranges, size_t range_count,
                               flq_loop_policy policy, uint32_t instances_per_class,
                               uint64_t master_seed, const char* out_dir, size_t* exhausted) {
    return guarded([&] {
        flq::GenerateSpec spec;
        spec.sizes.assign(sizes, sizes + size_count);
        for (size_t i = 0; i < alpha_count; ++i)
            spec.alphas.emplace_back(alphas_num[i], alphas_den[i]);
        for (size_t i = 0; i < range_count; ++i) spec.ranges.push_back(range_from(ranges[i]));
        spec.policy = policy_from(policy);
        spec.instances_per_class = instances_per_class;
        spec.master_seed = master_seed;
        spec.out_dir = out_dir;
        const flq::GenerateOutcome outcome = flq::generate_corpus(spec);
        if (exhausted) *exhausted = outcome.exhausted;
    });
}

flq_status flq_analyze(const char* results_path, const char* manifest_path, const char* out_dir,
                       uint32_t bootstrap_resamples, uint64_t bootstrap_seed,
                       char** summary_out) {
    return guarded([&] {
        flq::AnalyzeOptions options;
        options.resamples = bootstrap_resamples;
        options.bootstrap_seed = bootstrap_seed;
        const std::string summary =
            flq::analyze_run(results_path, manifest_path, out_dir, options);
        if (summary_out) *summary_out = dup_string(summary);
    });
}

}  // extern "C"
