#include "flq/brute.hpp"

#include <bit>
#include <string>
#include <vector>

#include "flq/error.hpp"

namespace flq {

namespace {

// Acc is int64_t for exact integer enumeration, double otherwise. Gray-code
// order flips one spin per step, so the energy and local fields update in
// O(degree).
template <typename T, typename Acc>
BruteResult brute_impl(const Ising<T>& model) {
    const auto& topo = *model.topo;
    const uint32_t n = topo.num_functional();
    if (n > kBruteForceLimit)
        throw Error(ErrorCode::size_limit,
                    "brute force refuses n=" + std::to_string(n) + " (limit " +
                        std::to_string(kBruteForceLimit) + ")");

    std::vector<Qubit> qubit_of;
    std::vector<int32_t> compact_of(topo.num_qubits(), -1);
    for (Qubit q = 0; q < topo.num_qubits(); ++q) {
        if (topo.functional(q)) {
            compact_of[q] = static_cast<int32_t>(qubit_of.size());
            qubit_of.push_back(q);
        }
    }
    struct Arc {
        uint32_t to;
        Acc weight;
    };
    std::vector<std::vector<Arc>> adj(n);
    Acc energy{0};
    for (size_t e = 0; e < topo.edges().size(); ++e) {
        const auto [u, v] = topo.edges()[e];
        const auto cu = static_cast<uint32_t>(compact_of[u]);
        const auto cv = static_cast<uint32_t>(compact_of[v]);
        const auto weight = static_cast<Acc>(model.j[e]);
        adj[cu].push_back({cv, weight});
        adj[cv].push_back({cu, weight});
        energy += weight;  // all spins start at -1: s_u s_v = +1
    }
    std::vector<Acc> field(n);
    for (uint32_t i = 0; i < n; ++i) {
        Acc f = static_cast<Acc>(model.h[qubit_of[i]]);
        energy -= f;
        for (const Arc& a : adj[i]) f -= a.weight;
        field[i] = f;
    }

    std::vector<int8_t> spins(n, -1);
    Acc best = energy;
    uint64_t ground_count = 1;
    std::vector<int8_t> best_spins = spins;

    const uint64_t total = 1ull << n;
    for (uint64_t idx = 1; idx < total; ++idx) {
        const int b = std::countr_zero(idx);
        const int8_t flipped = static_cast<int8_t>(-spins[b]);
        spins[b] = flipped;
        energy += Acc{2} * flipped * field[b];
        for (const Arc& a : adj[b]) field[a.to] += Acc{2} * flipped * a.weight;
        if (energy < best) {
            best = energy;
            ground_count = 1;
            best_spins = spins;
        } else if (energy == best) {
            ++ground_count;
        }
    }

    BruteResult result;
    result.min_energy = static_cast<double>(best);
    result.ground_count = ground_count;
    result.states = total;
    result.argmin.assign(topo.num_qubits(), 0);
    for (uint32_t i = 0; i < n; ++i) result.argmin[qubit_of[i]] = best_spins[i];
    return result;
}

}  // namespace

BruteResult brute_force(const IsingInt& model) { return brute_impl<int64_t, int64_t>(model); }
BruteResult brute_force(const IsingReal& model) { return brute_impl<double, double>(model); }

}  // namespace flq
