#pragma once

// Test-side oracles, independent of the library's implementation paths.

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "flq/chimera.hpp"
#include "flq/ising.hpp"
#include "flq/rng.hpp"

namespace flq::testing {

// Chimera edge set recomputed from the indexing definition alone, as a set
// of ordered pairs (no sharing with ChimeraTopology's builder).
inline std::set<std::pair<uint32_t, uint32_t>> reference_edge_set(
    uint32_t grid, const std::vector<uint8_t>& functional) {
    std::set<std::pair<uint32_t, uint32_t>> edges;
    auto add = [&](uint32_t a, uint32_t b) {
        if (!functional[a] || !functional[b]) return;
        edges.insert({std::min(a, b), std::max(a, b)});
    };
    for (uint32_t row = 0; row < grid; ++row) {
        for (uint32_t col = 0; col < grid; ++col) {
            const uint32_t base = 8 * (row * grid + col);
            for (uint32_t i = 0; i < 4; ++i) {
                for (uint32_t j = 4; j < 8; ++j) add(base + i, base + j);
                if (col + 1 < grid) add(base + i, base + 8 + i);
            }
            for (uint32_t j = 4; j < 8; ++j)
                if (row + 1 < grid) add(base + j, base + 8 * grid + j);
        }
    }
    return edges;
}

// Exact Gibbs probability of the ground energy by full enumeration of bit
// patterns (independent of the Gray-code solver path). Returns the ground
// probabilities for each requested beta, reusing one energy histogram.
inline std::vector<double> gibbs_ground_probability(const IsingInt& model,
                                                    const std::vector<double>& betas) {
    const auto& topo = *model.topo;
    std::vector<Qubit> functional;
    for (Qubit q = 0; q < topo.num_qubits(); ++q)
        if (topo.functional(q)) functional.push_back(q);
    const uint32_t n = static_cast<uint32_t>(functional.size());

    std::map<int64_t, uint64_t> histogram;
    SpinState state(topo.num_qubits(), 0);
    for (uint64_t bits = 0; bits < (1ull << n); ++bits) {
        for (uint32_t i = 0; i < n; ++i)
            state[functional[i]] = (bits >> i) & 1 ? 1 : -1;
        ++histogram[evaluate_energy(model, state)];
    }
    const int64_t ground = histogram.begin()->first;

    std::vector<double> out;
    for (double beta : betas) {
        double z = 0;
        for (const auto& [energy, count] : histogram)
            z += static_cast<double>(count) * std::exp(-beta * static_cast<double>(energy - ground));
        out.push_back(static_cast<double>(histogram.begin()->second) / z);
    }
    return out;
}

// Exact conditional minimum over an explicit subset of qubits with the rest
// of the state held fixed; enumerates plain bit counters. Returns the
// minimal full energy.
template <typename T>
double conditional_min_enumeration(const Ising<T>& model, const SpinState& state,
                                   const std::vector<Qubit>& subset) {
    const auto& topo = *model.topo;
    std::vector<int32_t> position(topo.num_qubits(), -1);
    for (size_t i = 0; i < subset.size(); ++i) position[subset[i]] = static_cast<int32_t>(i);

    // constant part + per-qubit boundary field + internal edges
    double constant = 0;
    std::vector<double> field(subset.size(), 0);
    struct Internal {
        uint32_t a, b;
        double w;
    };
    std::vector<Internal> internal;
    const auto& edges = topo.edges();
    for (size_t e = 0; e < edges.size(); ++e) {
        const auto [u, v] = edges[e];
        const double w = static_cast<double>(model.j[e]);
        const int32_t pu = position[u], pv = position[v];
        if (pu >= 0 && pv >= 0)
            internal.push_back({static_cast<uint32_t>(pu), static_cast<uint32_t>(pv), w});
        else if (pu >= 0)
            field[pu] += w * state[v];
        else if (pv >= 0)
            field[pv] += w * state[u];
        else
            constant += w * state[u] * state[v];
    }
    for (Qubit q = 0; q < topo.num_qubits(); ++q) {
        if (!topo.functional(q)) continue;
        const double hq = static_cast<double>(model.h[q]);
        if (position[q] >= 0)
            field[position[q]] += hq;
        else
            constant += hq * state[q];
    }

    double best = std::numeric_limits<double>::infinity();
    std::vector<int8_t> spins(subset.size());
    for (uint64_t bits = 0; bits < (1ull << subset.size()); ++bits) {
        for (size_t i = 0; i < subset.size(); ++i) spins[i] = (bits >> i) & 1 ? 1 : -1;
        double e = constant;
        for (size_t i = 0; i < subset.size(); ++i) e += field[i] * spins[i];
        for (const auto& [a, b, w] : internal) e += w * spins[a] * spins[b];
        best = std::min(best, e);
    }
    return best;
}

// Random yield mask leaving exactly `keep` functional qubits and a connected
// functional subgraph; rejection-samples deterministically from the seed.
inline std::vector<Qubit> connected_mask(const ChimeraTopology& full, uint32_t keep, Rng& rng) {
    const uint32_t total = full.num_qubits();
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<Qubit> all(total);
        for (uint32_t q = 0; q < total; ++q) all[q] = q;
        for (uint32_t q = total - 1; q > 0; --q)
            std::swap(all[q], all[rng.next_below(q + 1)]);
        std::vector<Qubit> broken(all.begin(), all.begin() + (total - keep));
        const ChimeraTopology masked = full.with_broken(broken);
        if (masked.num_functional() == keep && masked.functional_connected()) return broken;
    }
    throw std::runtime_error("no connected mask found");
}

}  // namespace flq::testing
