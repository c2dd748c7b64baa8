#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "flq/chimera.hpp"

namespace flq {

class Rng;

/// Spin assignment over the physical qubit indices of a topology: +1/-1 on
/// functional qubits, 0 on broken ones.
using SpinState = std::vector<int8_t>;

/// Per-qubit spin-reversal signs, same layout as SpinState.
using Gauge = std::vector<int8_t>;

/// Pairwise Ising energy function over a topology's edge list. Integer
/// instantiation keeps plantedness checks exact; the real instantiation is
/// what solvers consume after normalization.
template <typename T>
struct Ising {
    std::shared_ptr<const ChimeraTopology> topo;
    std::vector<T> j;  // indexed by topo->edges() position
    std::vector<T> h;  // indexed by physical qubit

    static Ising zero(std::shared_ptr<const ChimeraTopology> topology) {
        Ising m;
        m.j.assign(topology->edges().size(), T{0});
        m.h.assign(topology->num_qubits(), T{0});
        m.topo = std::move(topology);
        return m;
    }
};

using IsingInt = Ising<int64_t>;
using IsingReal = Ising<double>;

SpinState all_up_state(const ChimeraTopology& topo);
SpinState random_state(const ChimeraTopology& topo, Rng& rng);

/// sum_{i<j} J_ij s_i s_j + sum_i h_i s_i. Exact for integer models.
int64_t evaluate_energy(const IsingInt& model, const SpinState& state);
double evaluate_energy(const IsingReal& model, const SpinState& state);

/// Largest magnitude over all couplings and biases.
int64_t max_magnitude(const IsingInt& model);
double max_magnitude(const IsingReal& model);

/// Divides every entry by max_magnitude so the result has max magnitude
/// exactly 1; the minimizer set is unchanged. Throws invalid_argument on an
/// identically zero model.
IsingReal normalize(const IsingInt& model);
IsingReal normalize(const IsingReal& model);

/// J'_ij = g_i g_j J_ij, h'_i = g_i h_i. Energies satisfy
/// E(model', gauge_state(s, g)) == E(model, s) for every state s.
template <typename T>
Ising<T> gauge_transform(const Ising<T>& model, const Gauge& g);

SpinState gauge_state(const SpinState& state, const Gauge& g);

/// Adds independent zero-mean Gaussian noise: stddev delta_h on every
/// functional qubit's bias and delta_j on every topology edge's coupling,
/// including entries that are zero. Model must be normalized to [-1, 1].
IsingReal perturb(const IsingReal& model, double delta_h, double delta_j, Rng& rng);

}  // namespace flq
