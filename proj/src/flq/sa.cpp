#include "flq/sa.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "flq/error.hpp"
#include "flq/rng.hpp"

namespace flq {

namespace {

constexpr double kNormalizationSlack = 1e-9;

template <typename T>
CompactModel build_compact(const Ising<T>& model, bool integer_path) {
    const auto& topo = *model.topo;
    CompactModel out;
    out.topo = model.topo;
    out.compact_of.assign(topo.num_qubits(), -1);
    for (Qubit q = 0; q < topo.num_qubits(); ++q) {
        if (topo.functional(q)) {
            out.compact_of[q] = static_cast<int32_t>(out.qubit_of.size());
            out.qubit_of.push_back(q);
        }
    }
    out.n = static_cast<uint32_t>(out.qubit_of.size());
    out.integer_path = integer_path;

    double denom = 1.0;
    if (integer_path) {
        T m{0};
        for (T v : model.j) m = std::max(m, static_cast<T>(std::abs(v)));
        for (Qubit q = 0; q < topo.num_qubits(); ++q)
            if (topo.functional(q)) m = std::max(m, static_cast<T>(std::abs(model.h[q])));
        out.denom = std::max<int64_t>(1, static_cast<int64_t>(m));
        denom = static_cast<double>(out.denom);
    }

    const auto& edges = topo.edges();
    std::vector<uint32_t> degree(out.n, 0);
    for (const auto& [u, v] : edges) {
        ++degree[out.compact_of[u]];
        ++degree[out.compact_of[v]];
    }
    out.offsets.assign(out.n + 1, 0);
    for (uint32_t i = 0; i < out.n; ++i) out.offsets[i + 1] = out.offsets[i] + degree[i];
    out.neighbor.resize(out.offsets[out.n]);
    out.weight.resize(out.offsets[out.n]);
    out.iweight.assign(out.offsets[out.n], 0);
    std::vector<uint32_t> fill(out.offsets.begin(), out.offsets.end() - 1);

    out.cedges.reserve(edges.size());
    out.cedge_w.reserve(edges.size());
    out.cedge_iw.reserve(edges.size());
    for (size_t e = 0; e < edges.size(); ++e) {
        const auto cu = static_cast<uint32_t>(out.compact_of[edges[e].first]);
        const auto cv = static_cast<uint32_t>(out.compact_of[edges[e].second]);
        const double w = static_cast<double>(model.j[e]) / denom;
        out.cedges.push_back({cu, cv});
        out.cedge_w.push_back(w);
        out.cedge_iw.push_back(integer_path ? static_cast<int32_t>(model.j[e]) : 0);
        out.neighbor[fill[cu]] = cv;
        out.weight[fill[cu]] = w;
        if (integer_path) out.iweight[fill[cu]] = static_cast<int32_t>(model.j[e]);
        ++fill[cu];
        out.neighbor[fill[cv]] = cu;
        out.weight[fill[cv]] = w;
        if (integer_path) out.iweight[fill[cv]] = static_cast<int32_t>(model.j[e]);
        ++fill[cv];
    }

    out.bias.resize(out.n);
    out.ibias.assign(out.n, 0);
    for (uint32_t i = 0; i < out.n; ++i) {
        out.bias[i] = static_cast<double>(model.h[out.qubit_of[i]]) / denom;
        if (integer_path) out.ibias[i] = static_cast<int32_t>(model.h[out.qubit_of[i]]);
    }
    return out;
}

}  // namespace

CompactModel CompactModel::from_normalized(const IsingReal& model) {
    if (max_magnitude(model) > 1.0 + kNormalizationSlack)
        throw_invalid("model is not normalized to [-1, 1]");
    return build_compact(model, false);
}

CompactModel CompactModel::from_real(const IsingReal& model) {
    return build_compact(model, false);
}

CompactModel CompactModel::from_integer(const IsingInt& model) {
    return build_compact(model, true);
}

double CompactModel::energy(const std::vector<int8_t>& spins) const {
    if (integer_path) {
        int64_t e = 0;
        for (size_t k = 0; k < cedges.size(); ++k)
            e += static_cast<int64_t>(cedge_iw[k]) * spins[cedges[k][0]] * spins[cedges[k][1]];
        for (uint32_t i = 0; i < n; ++i) e += static_cast<int64_t>(ibias[i]) * spins[i];
        return static_cast<double>(e) / static_cast<double>(denom);
    }
    double e = 0;
    for (size_t k = 0; k < cedges.size(); ++k)
        e += cedge_w[k] * spins[cedges[k][0]] * spins[cedges[k][1]];
    for (uint32_t i = 0; i < n; ++i) e += bias[i] * spins[i];
    return e;
}

SpinState CompactModel::expand(const std::vector<int8_t>& spins) const {
    SpinState out(topo->num_qubits(), 0);
    for (uint32_t i = 0; i < n; ++i) out[qubit_of[i]] = spins[i];
    return out;
}

std::vector<int8_t> CompactModel::compact(const SpinState& state) const {
    std::vector<int8_t> out(n);
    for (uint32_t i = 0; i < n; ++i) out[i] = state[qubit_of[i]];
    return out;
}

namespace {

// Metropolis acceptance tables for the integer path. The possible uphill
// energy changes are 2k/denom for integer k in [1, max_k], so acceptance
// probabilities can be tabulated per sweep instead of exponentiating per
// flip attempt. Tables for the whole schedule are precomputed when they fit
// comfortably in memory; otherwise one row is rebuilt at each sweep.
class AcceptTables {
public:
    AcceptTables(const CompactModel& model, const SaSchedule& schedule) : schedule_(schedule) {
        int32_t max_k = 0;
        for (uint32_t i = 0; i < model.n; ++i) {
            int32_t reach = std::abs(model.ibias[i]);
            for (uint32_t a = model.offsets[i]; a < model.offsets[i + 1]; ++a)
                reach += std::abs(model.iweight[a]);
            max_k = std::max(max_k, reach);
        }
        stride_ = static_cast<size_t>(max_k) + 1;
        denom_ = static_cast<double>(model.denom);
        full_ = schedule.sweeps * stride_ <= (1ull << 23);
        if (full_) {
            table_.resize(schedule.sweeps * stride_);
            for (uint64_t t = 0; t < schedule.sweeps; ++t)
                fill_row(&table_[t * stride_], schedule.beta_at(t));
        }
    }

    const double* row(uint64_t sweep, std::vector<double>& scratch) const {
        if (full_) return &table_[sweep * stride_];
        scratch.resize(stride_);
        fill_row(scratch.data(), schedule_.beta_at(sweep));
        return scratch.data();
    }

private:
    void fill_row(double* row, double beta) const {
        for (size_t k = 0; k < stride_; ++k)
            row[k] = std::exp(-beta * (2.0 * static_cast<double>(k) / denom_));
    }

    SaSchedule schedule_;
    size_t stride_ = 1;
    double denom_ = 1;
    bool full_ = false;
    std::vector<double> table_;
};

// Binds a model and schedule; reusable across restarts so the acceptance
// tables are built once.
class Annealer {
public:
    Annealer(const CompactModel& model, const SaSchedule& schedule)
        : model_(model), schedule_(schedule) {
        if (schedule.sweeps < 1) throw_invalid("schedule must have at least one sweep");
        if (!(schedule.beta_start > 0) || !(schedule.beta_start < schedule.beta_end))
            throw_invalid("schedule requires 0 < beta_start < beta_end");
        if (model.integer_path) tables_.emplace(model, schedule);
    }

    AnnealOutcome run(const SaOptions& options, Rng& rng) const {
        const uint32_t n = model_.n;
        std::vector<int8_t> spins(n);
        for (auto& s : spins) s = rng.next_bool() ? 1 : -1;

        if (n > 0 && model_.integer_path) {
            run_integer(spins, rng);
        } else if (n > 0) {
            run_real(spins, rng);
        }

        const CompactModel& scoring = options.scoring ? *options.scoring : model_;
        AnnealOutcome out;
        out.energy = scoring.energy(spins);
        out.success = out.energy <= options.target + options.target_tol;
        out.spins = std::move(spins);
        return out;
    }

private:
    void run_integer(std::vector<int8_t>& spins, Rng& rng) const {
        const uint32_t n = model_.n;
        const auto* off = model_.offsets.data();
        const auto* nbr = model_.neighbor.data();
        const auto* w = model_.iweight.data();
        std::vector<int32_t> field(n);
        for (uint32_t i = 0; i < n; ++i) {
            int32_t f = model_.ibias[i];
            for (uint32_t a = off[i]; a < off[i + 1]; ++a) f += w[a] * spins[nbr[a]];
            field[i] = f;
        }
        std::vector<double> scratch;
        for (uint64_t t = 0; t < schedule_.sweeps; ++t) {
            const double* accept = tables_->row(t, scratch);
            for (uint32_t i = 0; i < n; ++i) {
                const int32_t k = -spins[i] * field[i];  // dE = 2k/denom
                if (k > 0 && !(rng.next_double() < accept[k])) continue;
                const int8_t flipped = static_cast<int8_t>(-spins[i]);
                spins[i] = flipped;
                for (uint32_t a = off[i]; a < off[i + 1]; ++a)
                    field[nbr[a]] += 2 * w[a] * flipped;
            }
        }
    }

    void run_real(std::vector<int8_t>& spins, Rng& rng) const {
        const uint32_t n = model_.n;
        const auto* off = model_.offsets.data();
        const auto* nbr = model_.neighbor.data();
        const auto* w = model_.weight.data();
        std::vector<double> field(n);
        for (uint32_t i = 0; i < n; ++i) {
            double f = model_.bias[i];
            for (uint32_t a = off[i]; a < off[i + 1]; ++a) f += w[a] * spins[nbr[a]];
            field[i] = f;
        }
        for (uint64_t t = 0; t < schedule_.sweeps; ++t) {
            const double beta = schedule_.beta_at(t);
            for (uint32_t i = 0; i < n; ++i) {
                const double de = -2.0 * spins[i] * field[i];
                if (de > 0 && !(rng.next_double() < std::exp(-beta * de))) continue;
                const int8_t flipped = static_cast<int8_t>(-spins[i]);
                spins[i] = flipped;
                for (uint32_t a = off[i]; a < off[i + 1]; ++a)
                    field[nbr[a]] += 2.0 * w[a] * flipped;
            }
        }
    }

    const CompactModel& model_;
    SaSchedule schedule_;
    std::optional<AcceptTables> tables_;
};

SolveResult finish_result(const CompactModel& model, const SaSchedule& schedule,
                          std::vector<Sample>&& samples, std::vector<int8_t>&& best_spins,
                          double best_energy, bool success) {
    SolveResult result;
    result.samples = std::move(samples);
    result.restarts = result.samples.size();
    result.sweeps_per_run = schedule.sweeps;
    result.work = static_cast<double>(result.restarts) * static_cast<double>(schedule.sweeps);
    result.model_time_us = kSweepTimeUs * result.work;
    result.best_energy = best_energy;
    result.success = success;
    if (!best_spins.empty()) result.best_state = model.expand(best_spins);
    return result;
}

}  // namespace

AnnealOutcome run_anneal(const CompactModel& model, const SaSchedule& schedule,
                         const SaOptions& options, Rng& rng) {
    return Annealer(model, schedule).run(options, rng);
}

SolveResult sa_run(const IsingReal& model, const SaSchedule& schedule, double target, Rng& rng) {
    const CompactModel compact = CompactModel::from_normalized(model);
    SaOptions options;
    options.target = target;
    AnnealOutcome outcome = run_anneal(compact, schedule, options, rng);
    std::vector<Sample> samples{{outcome.energy, outcome.success}};
    return finish_result(compact, schedule, std::move(samples), std::move(outcome.spins),
                         outcome.energy, outcome.success);
}

SolveResult sas_solve(const CompactModel& model, const SaSchedule& schedule,
                      const SaOptions& options, uint64_t max_restarts, uint64_t seed) {
    const Annealer annealer(model, schedule);
    std::vector<Sample> samples;
    std::vector<int8_t> best_spins;
    double best_energy = std::numeric_limits<double>::infinity();
    bool success = false;
    for (uint64_t r = 0; r < max_restarts; ++r) {
        Rng rng(hash64({seed, r}));
        AnnealOutcome outcome = annealer.run(options, rng);
        samples.push_back({outcome.energy, outcome.success});
        if (outcome.energy < best_energy) {
            best_energy = outcome.energy;
            best_spins = std::move(outcome.spins);
        }
        if (outcome.success) {
            success = true;
            break;
        }
    }
    return finish_result(model, schedule, std::move(samples), std::move(best_spins), best_energy,
                         success);
}

SolveResult saa_sample(const CompactModel& model, const SaSchedule& schedule,
                       const SaOptions& options, uint64_t repetitions, uint64_t seed,
                       unsigned workers) {
    if (repetitions < 1) throw_invalid("saa requires at least one repetition");
    const Annealer annealer(model, schedule);
    std::vector<Sample> samples(repetitions);

    struct Best {
        double energy = std::numeric_limits<double>::infinity();
        std::vector<int8_t> spins;
    };
    const unsigned nworkers =
        std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(repetitions)));
    std::vector<Best> bests(nworkers);

    auto run_chunk = [&](unsigned wi, uint64_t begin, uint64_t end) {
        Best& best = bests[wi];
        for (uint64_t r = begin; r < end; ++r) {
            Rng rng(hash64({seed, r}));
            AnnealOutcome outcome = annealer.run(options, rng);
            samples[r] = {outcome.energy, outcome.success};
            if (outcome.energy < best.energy) {
                best.energy = outcome.energy;
                best.spins = std::move(outcome.spins);
            }
        }
    };

    if (nworkers == 1) {
        run_chunk(0, 0, repetitions);
    } else {
        std::vector<std::thread> threads;
        for (unsigned wi = 0; wi < nworkers; ++wi) {
            const uint64_t begin = repetitions * wi / nworkers;
            const uint64_t end = repetitions * (wi + 1) / nworkers;
            threads.emplace_back(run_chunk, wi, begin, end);
        }
        for (auto& t : threads) t.join();
    }

    // Merge in worker order; chunks cover increasing repetition ranges, so
    // strict comparison resolves ties to the earliest repetition and the
    // result is identical for any worker count.
    Best* winner = &bests[0];
    for (auto& b : bests)
        if (b.energy < winner->energy) winner = &b;

    SolveResult result = finish_result(model, schedule, std::move(samples),
                                       std::move(winner->spins), winner->energy, false);
    result.success = result.best_energy <= options.target + options.target_tol;
    return result;
}

}  // namespace flq
