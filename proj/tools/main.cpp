// flq command line: generate / solve / sweep / analyze over the shared
// library's C interface.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <set>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "flq.h"

#include "config.hpp"

namespace fs = std::filesystem;
using flqcli::Config;
using flqcli::ConfigError;

namespace {

enum ExitCode { kOk = 0, kConfigError = 2, kIoError = 3, kValidationError = 4 };

int exit_code_for(flq_status status) {
    switch (status) {
        case FLQ_OK: return kOk;
        case FLQ_ERR_IO: return kIoError;
        case FLQ_ERR_PARSE:
        case FLQ_ERR_VALIDATION: return kValidationError;
        default: return kConfigError;
    }
}

[[noreturn]] void fail(flq_status status, const std::string& context) {
    std::cerr << "flq: " << context << ": " << flq_last_error() << "\n";
    std::exit(exit_code_for(status));
}

uint64_t hash_words(std::initializer_list<uint64_t> words) {
    return flq_hash64(std::data(words), words.size());
}

// Strings enter seed derivation as little-endian 8-byte words after a
// length word, zero padded.
uint64_t hash_string(const std::string& text) {
    std::vector<uint64_t> words((text.size() + 7) / 8 + 1, 0);
    words[0] = text.size();
    for (size_t i = 0; i < text.size(); ++i)
        words[1 + i / 8] |= static_cast<uint64_t>(static_cast<unsigned char>(text[i]))
                            << (8 * (i % 8));
    return flq_hash64(words.data(), words.size());
}

int32_t parse_range_arg(const std::string& text) {
    if (text == "inf" || text == "unlimited") return FLQ_RANGE_UNLIMITED;
    try {
        const int v = std::stoi(text);
        if (v < 2) throw ConfigError("range must be >= 2 or 'inf'");
        return v;
    } catch (const std::logic_error&) {
        throw ConfigError("range must be >= 2 or 'inf', got '" + text + "'");
    }
}

struct AlphaArg {
    int64_t num = 1;
    int64_t den = 4;
};

AlphaArg parse_alpha_arg(const std::string& text) {
    int64_t num = 0, den = 1;
    bool dot = false, digit = false;
    for (char c : text) {
        if (c == '.') {
            if (dot) throw ConfigError("malformed alpha '" + text + "'");
            dot = true;
        } else if (c >= '0' && c <= '9') {
            num = num * 10 + (c - '0');
            if (dot) den *= 10;
            digit = true;
        } else {
            throw ConfigError("malformed alpha '" + text + "'");
        }
    }
    if (!digit || num == 0) throw ConfigError("alpha must be a positive decimal");
    return {num, den};
}

flq_loop_policy parse_policy(const std::string& text) {
    if (text == "cell-rejection" || text == "cell") return FLQ_POLICY_CELL_REJECTION;
    if (text == "hen-minlength" || text == "hen") return FLQ_POLICY_HEN_MIN_LENGTH;
    throw ConfigError("unknown policy '" + text + "' (cell-rejection | hen-minlength)");
}

std::string label_of(const std::string& solver, double beta_final) {
    if (solver != "saa") return solver;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", beta_final);
    return "saa_bf" + std::string(buf);
}

// ------------------------------------------------------------------
// Solver plans: one entry per (solver, parameter-grid-point)

struct SolverPlan {
    std::string solver;  // sas | saa | hfs | brute
    flq_solver_params params{};
    uint64_t runs = 1;
};

std::vector<SolverPlan> plans_from_config(const Config& cfg) {
    std::vector<std::string> solvers;
    std::set<std::string> seen;
    for (const auto& s : cfg.list("solver")) {
        if (!seen.insert(s).second) {
            std::cerr << "flq: warning: duplicate solver entry '" << s << "' ignored\n";
            continue;
        }
        solvers.push_back(s);
    }
    if (solvers.empty()) throw ConfigError("config lists no solvers");

    std::vector<SolverPlan> plans;
    for (const auto& solver : solvers) {
        if (solver == "sas") {
            std::vector<uint64_t> grid = cfg.list_u64("sas.sweeps");
            if (grid.empty()) grid.push_back(1000);
            std::sort(grid.begin(), grid.end());
            for (uint64_t sweeps : grid) {
                SolverPlan plan;
                plan.solver = "sas";
                flq_solver_params_init(&plan.params);
                plan.params.sweeps = sweeps;
                plan.params.max_restarts = cfg.one_u64("sas.max-restarts", 100);
                plan.runs = cfg.one_u64("sas.runs", 1);
                plans.push_back(plan);
            }
        } else if (solver == "saa") {
            std::vector<std::string> betas = cfg.list("saa.beta-final");
            if (betas.empty()) betas.push_back("5");
            for (const auto& beta : betas) {
                SolverPlan plan;
                plan.solver = "saa";
                flq_solver_params_init(&plan.params);
                plan.params.sweeps = cfg.one_u64("saa.sweeps", 100000);
                try {
                    plan.params.beta_final = std::stod(beta);
                } catch (const std::logic_error&) {
                    throw ConfigError("config key 'saa.beta-final' is not a number: '" + beta +
                                      "'");
                }
                plan.params.repetitions = cfg.one_u64("saa.repetitions", 100);
                plan.runs = cfg.one_u64("saa.runs", 1);
                plans.push_back(plan);
            }
        } else if (solver == "hfs") {
            SolverPlan plan;
            plan.solver = "hfs";
            flq_solver_params_init(&plan.params);
            plan.params.stall_rounds = cfg.one_u64("hfs.stall-rounds", 0);
            plan.params.subsets_per_round = cfg.one_u64("hfs.subsets-per-round", 1);
            plan.params.tree_cap = static_cast<uint32_t>(cfg.one_u64("hfs.tree-cap", 0));
            plan.params.max_rounds = cfg.one_u64("hfs.max-rounds", 0);
            plan.runs = cfg.one_u64("hfs.runs", 1);
            plans.push_back(plan);
        } else if (solver == "brute") {
            SolverPlan plan;
            plan.solver = "brute";
            flq_solver_params_init(&plan.params);
            plan.runs = cfg.one_u64("brute.runs", 1);
            plans.push_back(plan);
        } else {
            throw ConfigError("unknown solver '" + solver + "'");
        }
    }
    return plans;
}

// Deterministic per-record seed; independent of execution order, stable
// across resumes.
uint64_t record_seed(uint64_t master, const SolverPlan& plan, const std::string& instance_id,
                     uint64_t run) {
    uint64_t beta_bits;
    static_assert(sizeof beta_bits == sizeof plan.params.beta_final);
    std::memcpy(&beta_bits, &plan.params.beta_final, sizeof beta_bits);
    return hash_words({master, hash_string(plan.solver), plan.params.sweeps, beta_bits,
                       plan.params.repetitions, run, hash_string(instance_id)});
}

// ------------------------------------------------------------------
// Serialized append-only record log

class RecordLog {
public:
    RecordLog() = default;  // stdout
    explicit RecordLog(const std::string& path) {
        file_.open(path, std::ios::binary | std::ios::app);
        if (!file_) throw ConfigError("cannot open result log '" + path + "' for append");
    }

    void append(const std::string& line) {
        std::lock_guard<std::mutex> lock(mutex_);
        std::ostream& out = file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout;
        out << line << "\n";
        out.flush();
    }

private:
    std::mutex mutex_;
    std::ofstream file_;
};

// (solver label | instance | seed) keys already present in a record log.
std::set<std::string> completed_keys(const std::string& path) {
    std::set<std::string> keys;
    std::ifstream in(path, std::ios::binary);
    if (!in) return keys;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            keys.insert(j.at("solver").get<std::string>() + "|" +
                        j.at("instance_id").get<std::string>() + "|" +
                        std::to_string(j.at("seed").get<uint64_t>()));
        } catch (const nlohmann::json::exception&) {
            // torn trailing line from an interrupted run; its task reruns
        }
    }
    return keys;
}

// ------------------------------------------------------------------
// Work pool: tasks are (instance file, plan); runs loop inside the task.

struct SolveTask {
    std::string instance_id;
    std::string path;
    const SolverPlan* plan = nullptr;
};

void run_tasks(const std::vector<SolveTask>& tasks, uint64_t master_seed, unsigned workers,
               const std::set<std::string>& done, RecordLog& log) {
    std::atomic<size_t> next{0};
    std::atomic<size_t> emitted{0};
    std::atomic<bool> failed{false};
    std::mutex fail_mutex;
    std::string fail_context;
    flq_status fail_status = FLQ_OK;

    auto report_failure = [&](flq_status st, const std::string& context) {
        std::lock_guard<std::mutex> lock(fail_mutex);
        failed = true;
        fail_status = st;
        fail_context = context;
    };

    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= tasks.size() || failed.load()) return;
            const SolveTask& task = tasks[i];
            const std::string label = label_of(task.plan->solver, task.plan->params.beta_final);

            flq_instance* instance = nullptr;
            for (uint64_t run = 0; run < task.plan->runs; ++run) {
                const uint64_t seed = record_seed(master_seed, *task.plan, task.instance_id, run);
                const std::string key =
                    label + "|" + task.instance_id + "|" + std::to_string(seed);
                if (done.count(key)) continue;

                if (!instance) {
                    const flq_status st = flq_instance_read(task.path.c_str(), &instance);
                    if (st != FLQ_OK) {
                        report_failure(st, "reading '" + task.path + "'");
                        return;
                    }
                }
                flq_solver_params params = task.plan->params;
                params.seed = seed;
                flq_result* result = nullptr;
                flq_status st = flq_solve(instance, task.plan->solver.c_str(), &params, &result);
                if (st != FLQ_OK) {
                    report_failure(st, "solving '" + task.instance_id + "'");
                    flq_instance_free(instance);
                    return;
                }
                char* json = nullptr;
                st = flq_result_record_json(result, task.instance_id.c_str(), &json);
                if (st == FLQ_OK) {
                    log.append(json);
                    flq_string_free(json);
                    emitted.fetch_add(1);
                }
                flq_result_free(result);
            }
            if (instance) flq_instance_free(instance);
        }
    };

    const unsigned nworkers = std::max(1u, workers);
    if (nworkers == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (unsigned w = 0; w < nworkers; ++w) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    if (failed) fail(fail_status, fail_context);
    std::cerr << "flq: emitted " << emitted.load() << " record(s) over " << tasks.size()
              << " task(s)\n";
}

// ------------------------------------------------------------------
// Commands

struct SharedFlags {
    std::string config_path;
    std::string out_dir;
    uint64_t seed = 0;
    bool seed_set = false;
    unsigned workers = 0;
};

int cmd_generate(const SharedFlags& shared, const std::vector<std::string>& cli_sizes,
                 const std::vector<std::string>& cli_alphas,
                 const std::vector<std::string>& cli_ranges, const std::string& cli_policy,
                 uint64_t cli_instances) {
    try {
        Config cfg;
        if (!shared.config_path.empty()) cfg = Config::load(shared.config_path);

        auto pick_list = [&](const std::vector<std::string>& cli, const char* key) {
            return cli.empty() ? cfg.list(key) : cli;
        };
        const auto size_texts = pick_list(cli_sizes, "L");
        const auto alpha_texts = pick_list(cli_alphas, "alpha");
        const auto range_texts = pick_list(cli_ranges, "R");
        if (size_texts.empty() || alpha_texts.empty() || range_texts.empty())
            throw ConfigError("generation needs L, alpha and R lists (flags or config)");

        std::vector<uint32_t> sizes;
        for (const auto& t : size_texts) {
            try {
                sizes.push_back(static_cast<uint32_t>(std::stoul(t)));
            } catch (const std::logic_error&) {
                throw ConfigError("bad grid size '" + t + "'");
            }
        }
        std::vector<int64_t> anum, aden;
        for (const auto& t : alpha_texts) {
            const AlphaArg a = parse_alpha_arg(t);
            anum.push_back(a.num);
            aden.push_back(a.den);
        }
        std::vector<int32_t> ranges;
        for (const auto& t : range_texts) ranges.push_back(parse_range_arg(t));

        const std::string policy_text =
            !cli_policy.empty() ? cli_policy : cfg.one("policy", "cell-rejection");
        const uint32_t instances = static_cast<uint32_t>(
            cli_instances ? cli_instances : cfg.one_u64("instances", 1));
        const uint64_t master = shared.seed_set ? shared.seed : cfg.one_u64("seed", 0);
        const std::string out = !shared.out_dir.empty() ? shared.out_dir : cfg.one("out", "");
        if (out.empty()) throw ConfigError("generation needs --out or config 'out'");

        size_t exhausted = 0;
        const flq_status st = flq_generate_corpus(
            sizes.data(), sizes.size(), anum.data(), aden.data(), anum.size(), ranges.data(),
            ranges.size(), parse_policy(policy_text), instances, master, out.c_str(),
            &exhausted);
        if (st != FLQ_OK) fail(st, "generating corpus");
        std::cerr << "flq: corpus under '" << out << "'";
        if (exhausted) std::cerr << " (" << exhausted << " exhausted, see manifest)";
        std::cerr << "\n";
        return kOk;
    } catch (const ConfigError& e) {
        std::cerr << "flq: " << e.what() << "\n";
        return kConfigError;
    }
}

int cmd_solve(const SharedFlags& shared, const std::string& solver,
              const std::vector<std::string>& files, const std::string& manifest_path,
              uint64_t runs, const flq_solver_params& base_params) {
    try {
        SolverPlan plan;
        plan.solver = solver;
        plan.params = base_params;
        plan.runs = runs;
        if (solver != "sas" && solver != "saa" && solver != "hfs" && solver != "brute")
            throw ConfigError("unknown solver '" + solver + "'");

        std::vector<SolveTask> tasks;
        if (!manifest_path.empty()) {
            const auto rows = flqcli::load_manifest_rows(manifest_path);
            const fs::path base = fs::path(manifest_path).parent_path();
            for (const auto& row : rows) {
                if (row.status != "ok") continue;
                tasks.push_back({row.id, (base / row.file).string(), &plan});
            }
        }
        for (const auto& file : files)
            tasks.push_back({fs::path(file).stem().string(), file, &plan});
        if (tasks.empty()) throw ConfigError("no instances given (files or --manifest)");

        std::unique_ptr<RecordLog> log;
        if (!shared.out_dir.empty()) {
            fs::create_directories(shared.out_dir);
            log = std::make_unique<RecordLog>(
                (fs::path(shared.out_dir) / "results.jsonl").string());
        } else {
            log = std::make_unique<RecordLog>();
        }
        run_tasks(tasks, shared.seed, std::max(1u, shared.workers), {}, *log);
        return kOk;
    } catch (const ConfigError& e) {
        std::cerr << "flq: " << e.what() << "\n";
        return kConfigError;
    }
}


int cmd_sweep(const SharedFlags& shared) {
    try {
        if (shared.config_path.empty()) throw ConfigError("sweep needs --config");
        const Config cfg = Config::load(shared.config_path);
        const std::string out = !shared.out_dir.empty() ? shared.out_dir : cfg.one("out", "");
        if (out.empty()) throw ConfigError("sweep needs --out or config 'out'");
        const uint64_t master = shared.seed_set ? shared.seed : cfg.one_u64("seed", 0);
        const unsigned workers =
            shared.workers ? shared.workers : static_cast<unsigned>(cfg.one_u64("workers", 1));

        const std::string manifest_path = (fs::path(out) / "manifest.csv").string();
        if (!fs::exists(manifest_path)) {
            SharedFlags gen = shared;
            gen.out_dir = out;
            gen.seed = master;
            gen.seed_set = true;
            const int rc = cmd_generate(gen, {}, {}, {}, "", 0);
            if (rc != kOk) return rc;
        }

        const std::vector<SolverPlan> plans = plans_from_config(cfg);
        const auto rows = flqcli::load_manifest_rows(manifest_path);
        const fs::path base = fs::path(manifest_path).parent_path();

        std::vector<SolveTask> tasks;
        for (const auto& plan : plans) {
            for (const auto& row : rows) {
                if (row.status != "ok") continue;
                tasks.push_back({row.id, (base / row.file).string(), &plan});
            }
        }

        const std::string log_path = (fs::path(out) / "results.jsonl").string();
        const std::set<std::string> done = completed_keys(log_path);
        RecordLog log(log_path);
        std::cerr << "flq: sweep " << tasks.size() << " task(s), " << done.size()
                  << " record(s) already present\n";
        run_tasks(tasks, master, workers, done, log);
        return kOk;
    } catch (const ConfigError& e) {
        std::cerr << "flq: " << e.what() << "\n";
        return kConfigError;
    }
}

int cmd_analyze(const SharedFlags& shared, const std::string& results_path,
                const std::string& manifest_path, uint32_t resamples, uint64_t bootstrap_seed) {
    const std::string out = shared.out_dir.empty() ? "." : shared.out_dir;
    char* summary = nullptr;
    const flq_status st = flq_analyze(results_path.c_str(), manifest_path.c_str(), out.c_str(),
                                      resamples, bootstrap_seed, &summary);
    if (st != FLQ_OK) fail(st, "analyzing '" + results_path + "'");
    std::cout << summary;
    flq_string_free(summary);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"range-limited frustrated-loop Ising benchmark suite"};
    app.require_subcommand(1);

    SharedFlags shared;

    auto add_shared = [&](CLI::App* cmd) {
        cmd->add_option("--config", shared.config_path, "experiment config file");
        cmd->add_option("--out", shared.out_dir, "output directory");
        cmd->add_option("--seed", shared.seed, "master seed")
            ->each([&](const std::string&) { shared.seed_set = true; });
        cmd->add_option("--workers", shared.workers, "concurrent worker threads");
    };

    auto* generate = app.add_subcommand("generate", "generate an instance corpus + manifest");
    std::vector<std::string> gen_sizes, gen_alphas, gen_ranges;
    std::string gen_policy;
    uint64_t gen_instances = 0;
    add_shared(generate);
    generate->add_option("--L", gen_sizes, "grid sizes (repeatable)");
    generate->add_option("--alpha", gen_alphas, "constraint-to-qubit ratios (repeatable)");
    generate->add_option("--R", gen_ranges, "coupling ranges, >= 2 or 'inf' (repeatable)");
    generate->add_option("--policy", gen_policy, "cell-rejection | hen-minlength");
    generate->add_option("--instances", gen_instances, "instances per class");

    auto* solve = app.add_subcommand("solve", "run one solver over instance files");
    std::string solve_solver, solve_manifest;
    std::vector<std::string> solve_files;
    uint64_t solve_runs = 1;
    flq_solver_params solve_params;
    flq_solver_params_init(&solve_params);
    add_shared(solve);
    solve->add_option("--solver", solve_solver, "sas | saa | hfs | brute")->required();
    solve->add_option("--manifest", solve_manifest, "solve every ok instance in a manifest");
    solve->add_option("--runs", solve_runs, "solver invocations per instance");
    solve->add_option("--sweeps", solve_params.sweeps, "sa schedule length");
    solve->add_option("--beta-start", solve_params.beta_start, "initial inverse temperature");
    solve->add_option("--beta-final", solve_params.beta_final, "final inverse temperature");
    solve->add_option("--max-restarts", solve_params.max_restarts, "sas restart budget");
    solve->add_option("--repetitions", solve_params.repetitions, "saa repetitions");
    solve->add_option("--stall-rounds", solve_params.stall_rounds,
                      "hfs stall termination (0 = 100L)");
    solve->add_option("--subsets-per-round", solve_params.subsets_per_round,
                      "hfs subset solves per round");
    solve->add_option("--tree-cap", solve_params.tree_cap, "hfs tree size cap (0 = 2L)");
    solve->add_option("--max-rounds", solve_params.max_rounds, "hfs hard round cap");
    solve->add_option("--delta-h", solve_params.delta_h, "control-error width on biases");
    solve->add_option("--delta-j", solve_params.delta_j, "control-error width on couplings");
    solve->add_option("files", solve_files, "instance files");

    auto* sweep = app.add_subcommand("sweep", "generate + solve a full experiment grid");
    add_shared(sweep);

    auto* analyze = app.add_subcommand("analyze", "aggregate a result log into CSV tables");
    std::string an_results, an_manifest;
    uint32_t an_resamples = 1000;
    uint64_t an_boot_seed = 1;
    add_shared(analyze);
    analyze->add_option("--results", an_results, "results.jsonl path")->required();
    analyze->add_option("--manifest", an_manifest, "manifest.csv path")->required();
    analyze->add_option("--resamples", an_resamples, "bootstrap resamples");
    analyze->add_option("--bootstrap-seed", an_boot_seed, "bootstrap seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }

    if (generate->parsed())
        return cmd_generate(shared, gen_sizes, gen_alphas, gen_ranges, gen_policy,
                            gen_instances);
    if (solve->parsed())
        return cmd_solve(shared, solve_solver, solve_files, solve_manifest, solve_runs,
                         solve_params);
    if (sweep->parsed()) return cmd_sweep(shared);
    if (analyze->parsed())
        return cmd_analyze(shared, an_results, an_manifest, an_resamples, an_boot_seed);
    return kConfigError;
}
