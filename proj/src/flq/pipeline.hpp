#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flq/instance.hpp"
#include "flq/records.hpp"

namespace flq {

/// Experiment grid for corpus generation: one instance file per
/// (L, alpha, R, index) under <out_dir>/instances plus a manifest.csv.
/// Instance seeds derive as
///   hash64({master_seed, L, alpha.num, alpha.den, R (2^64-1 for inf), index})
/// so any single instance can be regenerated in isolation.
struct GenerateSpec {
    std::vector<uint32_t> sizes;
    std::vector<Rational> alphas;
    std::vector<RangeLimit> ranges;
    LoopPolicy policy = LoopPolicy::cell_rejection;
    uint32_t instances_per_class = 1;
    uint64_t master_seed = 0;
    std::string out_dir;
};

struct GenerateOutcome {
    size_t written = 0;
    size_t exhausted = 0;  // recorded in the manifest, not fatal
    std::string manifest_path;
};

uint64_t instance_seed(uint64_t master_seed, uint32_t grid, const Rational& alpha,
                       const RangeLimit& range, uint32_t index);

std::string instance_id(uint32_t grid, const Rational& alpha, const RangeLimit& range,
                        uint32_t index);

GenerateOutcome generate_corpus(const GenerateSpec& spec);

/// Analysis over a record log and its manifest. Emits tts_median.csv,
/// ratio.csv, scaling.csv and scatter.csv into out_dir and returns a short
/// text summary (hardest alpha per solver, scaling table, data gaps).
struct AnalyzeOptions {
    uint32_t resamples = 1000;
    uint64_t bootstrap_seed = 1;
};

std::string analyze_run(const std::string& results_path, const std::string& manifest_path,
                        const std::string& out_dir, const AnalyzeOptions& options);

}  // namespace flq
