#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flq/instance.hpp"
#include "flq/rational.hpp"

namespace flq {

/// One solver invocation, serialized as a single JSON object per line.
/// `restarts` counts the independent trials inside the record (anneals for
/// sas, repetitions for saa, runs for hfs) and `success` counts how many of
/// them reached the target, so per-run success probabilities aggregate
/// across records as sum(success)/sum(restarts). Exactly one of
/// sweeps/rounds is present: sweeps for the sa solvers, rounds otherwise.
/// best_energy is reported in instance units (integer couplings).
struct SolveRecord {
    std::string solver;  // sas | saa_bf<beta> | hfs | brute
    std::string instance_id;
    uint64_t seed = 0;
    std::optional<uint64_t> sweeps;
    std::optional<uint64_t> rounds;
    uint64_t restarts = 0;
    double best_energy = 0;
    uint64_t success = 0;
    double work = 0;
    double model_time_us = 0;
};

std::string record_to_json(const SolveRecord& record);
SolveRecord record_from_json(const std::string& line);

/// Reads a line-delimited record log. A torn final line (interrupted append)
/// is skipped; malformed lines elsewhere raise a parse error with the line
/// number. `skipped` (optional) receives the number of tolerated lines.
std::vector<SolveRecord> read_record_log(const std::string& path, size_t* skipped = nullptr);

/// Per-instance row of a generation manifest (manifest.csv).
struct ManifestEntry {
    std::string id;
    std::string file;  // instance path relative to the manifest directory
    uint32_t grid = 0;
    Rational alpha;
    RangeLimit range;
    std::string policy;
    uint32_t n = 0;
    int64_t loops = 0;
    uint64_t seed = 0;
    int64_t planted = 0;
    std::string status;  // ok | exhausted
};

std::string manifest_header();
std::string manifest_row(const ManifestEntry& entry);
std::vector<ManifestEntry> read_manifest(const std::string& path);

std::string format_range(const RangeLimit& range);
RangeLimit parse_range(const std::string& text);

}  // namespace flq
