#include "flq/pipeline.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "flq/analysis.hpp"
#include "flq/error.hpp"
#include "flq/instance_io.hpp"
#include "flq/rng.hpp"

namespace flq {

namespace fs = std::filesystem;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr uint64_t kUnlimitedSeedCode = UINT64_MAX;
}  // namespace

uint64_t instance_seed(uint64_t master_seed, uint32_t grid, const Rational& alpha,
                       const RangeLimit& range, uint32_t index) {
    const uint64_t range_code = range ? static_cast<uint64_t>(*range) : kUnlimitedSeedCode;
    return hash64({master_seed, grid, static_cast<uint64_t>(alpha.num),
                   static_cast<uint64_t>(alpha.den), range_code, index});
}

std::string instance_id(uint32_t grid, const Rational& alpha, const RangeLimit& range,
                        uint32_t index) {
    char idx[8];
    std::snprintf(idx, sizeof idx, "%03u", index);
    return "L" + std::to_string(grid) + "_a" + alpha.to_decimal() + "_R" + format_range(range) +
           "_i" + idx;
}

GenerateOutcome generate_corpus(const GenerateSpec& spec) {
    if (spec.sizes.empty() || spec.alphas.empty() || spec.ranges.empty())
        throw_invalid("generation grid must list sizes, alphas and ranges");
    if (spec.instances_per_class < 1) throw_invalid("instances_per_class must be >= 1");

    std::error_code ec;
    fs::create_directories(fs::path(spec.out_dir) / "instances", ec);
    if (ec) throw Error(ErrorCode::io, "cannot create output directory '" + spec.out_dir + "'");

    const std::string manifest_path = (fs::path(spec.out_dir) / "manifest.csv").string();
    std::ofstream manifest(manifest_path, std::ios::binary);
    if (!manifest) throw Error(ErrorCode::io, "cannot open '" + manifest_path + "' for writing");
    manifest << manifest_header() << "\n";

    GenerateOutcome outcome;
    outcome.manifest_path = manifest_path;
    for (uint32_t grid : spec.sizes) {
        auto topo = std::make_shared<const ChimeraTopology>(ChimeraTopology::build(grid));
        for (const Rational& alpha : spec.alphas) {
            for (const RangeLimit& range : spec.ranges) {
                for (uint32_t i = 0; i < spec.instances_per_class; ++i) {
                    const uint64_t seed =
                        instance_seed(spec.master_seed, grid, alpha, range, i);
                    ManifestEntry entry;
                    entry.id = instance_id(grid, alpha, range, i);
                    entry.file = "instances/" + entry.id + ".flq";
                    entry.grid = grid;
                    entry.alpha = alpha;
                    entry.range = range;
                    entry.policy = to_string(spec.policy);
                    entry.seed = seed;
                    try {
                        const FrustratedLoopInstance inst =
                            generate_instance(topo, alpha, range, spec.policy, seed);
                        entry.n = topo->num_functional();
                        entry.loops = inst.loop_count();
                        entry.planted = inst.planted;
                        entry.status = "ok";
                        const std::string path =
                            (fs::path(spec.out_dir) / entry.file).string();
                        const std::string tmp = path + ".tmp";
                        write_instance_file(inst, tmp);
                        fs::rename(tmp, path, ec);
                        if (ec) throw Error(ErrorCode::io, "cannot move '" + tmp + "' into place");
                        ++outcome.written;
                    } catch (const Error& err) {
                        if (err.code() != ErrorCode::generation_exhausted) throw;
                        entry.n = topo->num_functional();
                        entry.status = "exhausted";
                        ++outcome.exhausted;
                    }
                    manifest << manifest_row(entry) << "\n";
                    if (!manifest)
                        throw Error(ErrorCode::io, "write failed for '" + manifest_path + "'");
                }
            }
        }
    }
    manifest.flush();
    if (!manifest) throw Error(ErrorCode::io, "write failed for '" + manifest_path + "'");
    return outcome;
}

namespace {

std::string fmt_num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

// (solver, L, alpha, R) analysis class; ordering fixes CSV row order.
struct ClassKey {
    std::string solver;
    uint32_t grid;
    Rational alpha;
    RangeLimit range;

    std::tuple<const std::string&, uint32_t, double, int64_t> tie() const {
        const int64_t r = range ? *range : INT64_MAX;
        return {solver, grid, alpha.value(), r};
    }
    bool operator<(const ClassKey& o) const { return tie() < o.tie(); }
    bool operator==(const ClassKey& o) const { return tie() == o.tie(); }
};

struct SuccessStats {
    uint64_t trials = 0;
    uint64_t successes = 0;
    double model_time_us = 0;

    double p_hat() const {
        return trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
    }
    double run_time_us() const {
        return trials ? model_time_us / static_cast<double>(trials) : 0.0;
    }
};

std::string solver_base(const std::string& label) {
    const auto us = label.find('_');
    return us == std::string::npos ? label : label.substr(0, us);
}

double parallel_divisor(const std::string& label, const ManifestEntry& entry) {
    const std::string base = solver_base(label);
    if (base == "sas") return entry.n;          // n-core sweep parallelization
    if (base == "hfs") return entry.grid;       // L = sqrt(N/8) parallel cell updates
    return 1.0;
}

std::string provenance(const std::vector<std::string>& ids) {
    if (ids.empty()) return "none(0)";
    std::vector<std::string> sorted = ids;
    std::sort(sorted.begin(), sorted.end());
    return sorted.front() + ".." + sorted.back() + "(" + std::to_string(sorted.size()) + ")";
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::io, "cannot open '" + path + "' for writing");
    for (const auto& line : lines) out << line << "\n";
    out.flush();
    if (!out) throw Error(ErrorCode::io, "write failed for '" + path + "'");
}

}  // namespace

std::string analyze_run(const std::string& results_path, const std::string& manifest_path,
                        const std::string& out_dir, const AnalyzeOptions& options) {
    const std::vector<ManifestEntry> manifest = read_manifest(manifest_path);
    std::map<std::string, const ManifestEntry*> by_id;
    for (const auto& entry : manifest) by_id[entry.id] = &entry;

    size_t torn = 0;
    const std::vector<SolveRecord> records = read_record_log(results_path, &torn);

    // (solver label, sweeps grid value, instance) -> pooled trials
    std::map<std::tuple<std::string, uint64_t, std::string>, SuccessStats> pooled;
    std::set<std::string> solvers;
    for (const auto& record : records) {
        const auto it = by_id.find(record.instance_id);
        if (it == by_id.end())
            throw Error(ErrorCode::validation,
                        "record references instance '" + record.instance_id +
                            "' absent from the manifest");
        if (record.restarts == 0) continue;  // zero-trial records carry no information
        const uint64_t grid_value = record.sweeps ? *record.sweeps : 0;
        auto& stats = pooled[{record.solver, grid_value, record.instance_id}];
        stats.trials += record.restarts;
        stats.successes += record.success;
        stats.model_time_us += record.model_time_us;
        solvers.insert(record.solver);
    }

    // Reorganize per analysis class. brute has no model-time convention and
    // is excluded from the timing tables.
    struct PointData {
        std::vector<std::string> ids;
        std::vector<double> tts;
        std::vector<double> p_hat;
    };
    std::map<ClassKey, std::map<uint64_t, PointData>> classes;
    for (const auto& [key, stats] : pooled) {
        const auto& [solver, grid_value, id] = key;
        if (solver_base(solver) == "brute") continue;
        const ManifestEntry& entry = *by_id.at(id);
        ClassKey ck{solver, entry.grid, entry.alpha, entry.range};
        PointData& point = classes[ck][grid_value];
        point.ids.push_back(id);
        point.p_hat.push_back(stats.p_hat());
        point.tts.push_back(stats.run_time_us() > 0
                                ? tts_r99(stats.p_hat(), stats.run_time_us(),
                                          parallel_divisor(solver, entry))
                                : kInf);
    }

    // Optimal grid point per class (fewest sweeps wins ties); classes whose
    // every grid point has an infinite median stay unsolved.
    struct ClassResult {
        uint64_t sweeps = 0;
        bool unsolved = false;
        PointData* point = nullptr;
    };
    std::map<ClassKey, ClassResult> selected;
    for (auto& [ck, grid_points] : classes) {
        std::vector<uint64_t> grid_values;
        std::vector<std::vector<double>> tts_sets;
        for (auto& [value, point] : grid_points) {
            grid_values.push_back(value);
            tts_sets.push_back(point.tts);
        }
        ClassResult result;
        const auto best = select_optimal_index(tts_sets);
        if (best) {
            result.sweeps = grid_values[*best];
            result.point = &grid_points[grid_values[*best]];
        } else {
            result.unsolved = true;
            result.sweeps = grid_values.front();
            result.point = &grid_points[grid_values.front()];
        }
        selected[ck] = result;
    }

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::io, "cannot create output directory '" + out_dir + "'");

    std::ostringstream summary;
    summary << "records: " << records.size();
    if (torn) summary << " (tolerated " << torn << " torn line)";
    summary << "\nsolvers:";
    for (const auto& s : solvers) summary << " " << s;
    summary << "\n";

    // ---- tts_median.csv ----
    std::vector<std::string> tts_lines{
        "solver,L,alpha,R,median_us,boot_std,unsolved_frac,sweeps,provenance"};
    std::map<ClassKey, BootstrapStats> class_stats;
    for (auto& [ck, result] : selected) {
        const auto& tts = result.point->tts;
        BootstrapStats stats;
        size_t finite = 0;
        for (double v : tts) finite += std::isfinite(v) ? 1 : 0;
        if (finite >= 2) {
            stats = median_tts_bootstrap(tts, options.resamples, options.bootstrap_seed);
        } else {
            stats.median = median_of(tts);
            stats.stddev = kInf;
            stats.unsolved_fraction =
                static_cast<double>(tts.size() - finite) / static_cast<double>(tts.size());
        }
        class_stats[ck] = stats;
        std::ostringstream row;
        row << ck.solver << ',' << ck.grid << ',' << ck.alpha.to_decimal() << ','
            << format_range(ck.range) << ',' << fmt_num(stats.median) << ','
            << fmt_num(stats.stddev) << ',' << fmt_num(stats.unsolved_fraction) << ','
            << result.sweeps << ',' << provenance(result.point->ids);
        tts_lines.push_back(row.str());
    }
    write_lines((fs::path(out_dir) / "tts_median.csv").string(), tts_lines);

    // ---- ratio.csv and scatter.csv over solver pairs ----
    std::vector<std::string> ratio_lines{
        "solver_a,solver_b,L,alpha,R,median_ratio,boot_std,pairs,provenance"};
    std::vector<std::string> scatter_lines{"solver_a,solver_b,L,alpha,R,instance_id,p_a,p_b"};
    std::vector<std::string> correlation_notes;

    std::vector<std::string> timed_solvers;
    for (const auto& s : solvers)
        if (solver_base(s) != "brute") timed_solvers.push_back(s);

    for (size_t ai = 0; ai < timed_solvers.size(); ++ai) {
        for (size_t bi = ai + 1; bi < timed_solvers.size(); ++bi) {
            const std::string& sa = timed_solvers[ai];
            const std::string& sb = timed_solvers[bi];
            // shared (L, alpha, R) classes
            for (auto& [ck, result] : selected) {
                if (ck.solver != sa) continue;
                ClassKey other{sb, ck.grid, ck.alpha, ck.range};
                const auto ob = selected.find(other);
                if (ob == selected.end()) continue;

                // align instances
                std::map<std::string, std::pair<double, double>> tts_pairs;  // id -> (a, b)
                std::map<std::string, std::pair<double, double>> p_pairs;
                const PointData& pa = *result.point;
                const PointData& pb = *ob->second.point;
                for (size_t i = 0; i < pa.ids.size(); ++i) {
                    tts_pairs[pa.ids[i]] = {pa.tts[i], kInf};
                    p_pairs[pa.ids[i]] = {pa.p_hat[i], -1};
                }
                for (size_t i = 0; i < pb.ids.size(); ++i) {
                    if (auto it = tts_pairs.find(pb.ids[i]); it != tts_pairs.end()) {
                        it->second.second = pb.tts[i];
                        p_pairs[pb.ids[i]].second = pb.p_hat[i];
                    }
                }
                std::vector<double> ratios;
                std::vector<std::string> ids;
                std::vector<double> ps_a, ps_b;
                size_t dropped = 0;
                for (const auto& [id, pair] : p_pairs) {
                    if (pair.second < 0) continue;  // not in both
                    ids.push_back(id);
                    ps_a.push_back(pair.first);
                    ps_b.push_back(pair.second);
                    const auto [ta, tb] = tts_pairs[id];
                    const double ratio = ta / tb;
                    if (std::isnan(ratio)) {
                        ++dropped;  // both unsolved
                    } else {
                        ratios.push_back(ratio);
                    }
                    std::ostringstream srow;
                    srow << sa << ',' << sb << ',' << ck.grid << ',' << ck.alpha.to_decimal()
                         << ',' << format_range(ck.range) << ',' << id << ','
                         << fmt_num(pair.first) << ',' << fmt_num(pair.second);
                    scatter_lines.push_back(srow.str());
                }
                if (ratios.empty()) continue;
                size_t finite = 0;
                for (double v : ratios) finite += std::isfinite(v) ? 1 : 0;
                BootstrapStats stats;
                if (finite >= 2) {
                    stats = median_tts_bootstrap(ratios, options.resamples,
                                                 options.bootstrap_seed);
                } else {
                    stats.median = median_of(ratios);
                    stats.stddev = kInf;
                }
                std::ostringstream row;
                row << sa << ',' << sb << ',' << ck.grid << ',' << ck.alpha.to_decimal() << ','
                    << format_range(ck.range) << ',' << fmt_num(stats.median) << ','
                    << fmt_num(stats.stddev) << ',' << ratios.size() << ','
                    << provenance(ids);
                ratio_lines.push_back(row.str());

                if (ids.size() >= 3) {
                    const Correlation corr = pearson(ps_a, ps_b);
                    std::ostringstream note;
                    note << "correlation " << sa << " vs " << sb << " L=" << ck.grid
                         << " alpha=" << ck.alpha.to_decimal() << " R=" << format_range(ck.range)
                         << ": " << (corr.defined ? "r=" + fmt_num(corr.r) : "undefined (zero variance)");
                    correlation_notes.push_back(note.str());
                }
            }
        }
    }
    write_lines((fs::path(out_dir) / "ratio.csv").string(), ratio_lines);
    write_lines((fs::path(out_dir) / "scatter.csv").string(), scatter_lines);

    // ---- scaling.csv: ln(median tts) vs L per (solver, alpha, R) ----
    std::vector<std::string> scaling_lines{
        "solver,alpha,b,b_1sigma,b_2sigma,R,sizes,status,provenance"};
    struct ScaleGroup {
        std::vector<std::pair<double, std::vector<double>>> per_size;
        std::vector<std::string> ids;
        bool has_unsolved = false;
    };
    std::map<std::tuple<std::string, int64_t, int64_t, int64_t>, ScaleGroup> groups;
    std::map<std::tuple<std::string, int64_t, int64_t, int64_t>, std::pair<Rational, RangeLimit>>
        group_meta;
    for (auto& [ck, result] : selected) {
        const int64_t r = ck.range ? *ck.range : INT64_MAX;
        const auto key = std::tuple(ck.solver, ck.alpha.num, ck.alpha.den, r);
        auto& group = groups[key];
        group_meta.emplace(key, std::pair(ck.alpha, ck.range));
        group.per_size.push_back({static_cast<double>(ck.grid), result.point->tts});
        group.ids.insert(group.ids.end(), result.point->ids.begin(), result.point->ids.end());
        if (!std::isfinite(class_stats[ck].median)) group.has_unsolved = true;
    }
    for (auto& [key, group] : groups) {
        const auto& [solver, anum, aden, r] = key;
        const auto& [alpha, range] = group_meta.at(key);
        std::string status = "ok";
        ScalingFit fit;
        if (group.has_unsolved) {
            status = "excluded-infinite-median";
        } else if (group.per_size.size() < 3) {
            status = "insufficient-sizes";
        } else {
            fit = fit_scaling(group.per_size, options.resamples, options.bootstrap_seed);
        }
        std::ostringstream row;
        row << solver << ',' << alpha.to_decimal() << ','
            << (status == "ok" ? fmt_num(fit.b) : "") << ','
            << (status == "ok" ? fmt_num(fit.b_1sigma) : "") << ','
            << (status == "ok" ? fmt_num(fit.b_2sigma) : "") << ',' << format_range(range) << ','
            << group.per_size.size() << ',' << status << ',' << provenance(group.ids);
        scaling_lines.push_back(row.str());
        if (status == "ok") {
            summary << "scaling " << solver << " alpha=" << alpha.to_decimal()
                    << " R=" << format_range(range) << ": b=" << fmt_num(fit.b) << " (1s="
                    << fmt_num(fit.b_1sigma) << ", 2s=" << fmt_num(fit.b_2sigma) << ", sizes="
                    << group.per_size.size() << ")\n";
        }
    }
    write_lines((fs::path(out_dir) / "scaling.csv").string(), scaling_lines);

    // ---- summary: hardest alpha per (solver, R) at the largest size ----
    std::map<std::tuple<std::string, int64_t>, std::tuple<uint32_t, Rational, double>> hardest;
    for (auto& [ck, stats] : class_stats) {
        const int64_t r = ck.range ? *ck.range : INT64_MAX;
        const auto key = std::tuple(ck.solver, r);
        const double median = stats.median;
        const auto it = hardest.find(key);
        const bool take =
            it == hardest.end() || ck.grid > std::get<0>(it->second) ||
            (ck.grid == std::get<0>(it->second) && median > std::get<2>(it->second));
        if (take) hardest[key] = {ck.grid, ck.alpha, median};
    }
    for (const auto& [key, value] : hardest) {
        const auto& [solver, r] = key;
        const auto& [grid, alpha, median] = value;
        summary << "hardest alpha " << solver << " R="
                << (r == INT64_MAX ? "inf" : std::to_string(r)) << " at L=" << grid
                << ": alpha=" << alpha.to_decimal() << " (median_tts=" << fmt_num(median)
                << " us)\n";
    }
    for (auto& [ck, result] : selected) {
        if (result.unsolved)
            summary << "unsolved class: " << ck.solver << " L=" << ck.grid
                    << " alpha=" << ck.alpha.to_decimal() << " R=" << format_range(ck.range)
                    << "\n";
    }
    for (const auto& note : correlation_notes) summary << note << "\n";

    return summary.str();
}

}  // namespace flq
