#include "flq/ising.hpp"

#include <algorithm>
#include <cmath>

#include "flq/error.hpp"
#include "flq/rng.hpp"

namespace flq {

SpinState all_up_state(const ChimeraTopology& topo) {
    SpinState s(topo.num_qubits(), 0);
    for (Qubit q = 0; q < topo.num_qubits(); ++q)
        if (topo.functional(q)) s[q] = 1;
    return s;
}

SpinState random_state(const ChimeraTopology& topo, Rng& rng) {
    SpinState s(topo.num_qubits(), 0);
    for (Qubit q = 0; q < topo.num_qubits(); ++q)
        if (topo.functional(q)) s[q] = rng.next_bool() ? 1 : -1;
    return s;
}

namespace {

template <typename T, typename Acc>
Acc energy_impl(const Ising<T>& model, const SpinState& state) {
    const auto& topo = *model.topo;
    if (state.size() != topo.num_qubits()) throw_invalid("state size does not match topology");
    for (Qubit q = 0; q < topo.num_qubits(); ++q) {
        if (topo.functional(q) && state[q] != 1 && state[q] != -1)
            throw_invalid("state must assign +1/-1 to every functional qubit");
    }
    Acc e{0};
    const auto& edges = topo.edges();
    for (size_t k = 0; k < edges.size(); ++k)
        e += static_cast<Acc>(model.j[k]) * state[edges[k].first] * state[edges[k].second];
    for (Qubit q = 0; q < topo.num_qubits(); ++q)
        e += static_cast<Acc>(model.h[q]) * state[q];
    return e;
}

}  // namespace

int64_t evaluate_energy(const IsingInt& model, const SpinState& state) {
    return energy_impl<int64_t, int64_t>(model, state);
}

double evaluate_energy(const IsingReal& model, const SpinState& state) {
    return energy_impl<double, double>(model, state);
}

namespace {

template <typename T>
T max_magnitude_impl(const Ising<T>& model) {
    T m{0};
    for (T v : model.j) m = std::max(m, static_cast<T>(std::abs(v)));
    for (Qubit q = 0; q < model.topo->num_qubits(); ++q)
        if (model.topo->functional(q)) m = std::max(m, static_cast<T>(std::abs(model.h[q])));
    return m;
}

template <typename T>
IsingReal normalize_impl(const Ising<T>& model) {
    const T m = max_magnitude_impl(model);
    if (m == T{0}) throw_invalid("cannot normalize an identically zero model");
    IsingReal out;
    out.topo = model.topo;
    out.j.reserve(model.j.size());
    for (T v : model.j) out.j.push_back(static_cast<double>(v) / static_cast<double>(m));
    out.h.reserve(model.h.size());
    for (T v : model.h) out.h.push_back(static_cast<double>(v) / static_cast<double>(m));
    return out;
}

}  // namespace

int64_t max_magnitude(const IsingInt& model) { return max_magnitude_impl(model); }
double max_magnitude(const IsingReal& model) { return max_magnitude_impl(model); }

IsingReal normalize(const IsingInt& model) { return normalize_impl(model); }
IsingReal normalize(const IsingReal& model) { return normalize_impl(model); }

template <typename T>
Ising<T> gauge_transform(const Ising<T>& model, const Gauge& g) {
    const auto& topo = *model.topo;
    if (g.size() != topo.num_qubits()) throw_invalid("gauge size does not match topology");
    Ising<T> out = model;
    const auto& edges = topo.edges();
    for (size_t k = 0; k < edges.size(); ++k)
        out.j[k] = model.j[k] * g[edges[k].first] * g[edges[k].second];
    for (Qubit q = 0; q < topo.num_qubits(); ++q) out.h[q] = model.h[q] * g[q];
    return out;
}

template Ising<int64_t> gauge_transform(const Ising<int64_t>&, const Gauge&);
template Ising<double> gauge_transform(const Ising<double>&, const Gauge&);

SpinState gauge_state(const SpinState& state, const Gauge& g) {
    if (g.size() != state.size()) throw_invalid("gauge size does not match state");
    SpinState out = state;
    for (size_t q = 0; q < state.size(); ++q) out[q] = static_cast<int8_t>(state[q] * g[q]);
    return out;
}

IsingReal perturb(const IsingReal& model, double delta_h, double delta_j, Rng& rng) {
    if (delta_h < 0 || delta_j < 0) throw_invalid("noise widths must be non-negative");
    if (max_magnitude(model) > 1.0 + 1e-9) throw_invalid("perturb expects a normalized model");
    IsingReal out = model;
    for (double& v : out.j) v += delta_j * rng.next_gaussian();
    const auto& topo = *model.topo;
    for (Qubit q = 0; q < topo.num_qubits(); ++q)
        if (topo.functional(q)) out.h[q] += delta_h * rng.next_gaussian();
    return out;
}

}  // namespace flq
