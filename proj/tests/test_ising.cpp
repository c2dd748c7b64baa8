#include <doctest.h>

#include <algorithm>
#include <memory>

#include "flq/brute.hpp"
#include "flq/error.hpp"
#include "flq/instance.hpp"
#include "flq/ising.hpp"
#include "flq/rational.hpp"
#include "flq/rng.hpp"

using namespace flq;

namespace {

std::shared_ptr<const ChimeraTopology> shared_chimera(uint32_t grid) {
    return std::make_shared<const ChimeraTopology>(ChimeraTopology::build(grid));
}

// all 2^n states of a masked topology, for exhaustive equivalence checks
template <typename Fn>
void for_all_states(const ChimeraTopology& topo, Fn&& fn) {
    std::vector<Qubit> functional;
    for (Qubit q = 0; q < topo.num_qubits(); ++q)
        if (topo.functional(q)) functional.push_back(q);
    SpinState state(topo.num_qubits(), 0);
    for (uint64_t bits = 0; bits < (1ull << functional.size()); ++bits) {
        for (size_t i = 0; i < functional.size(); ++i)
            state[functional[i]] = (bits >> i) & 1 ? 1 : -1;
        fn(state);
    }
}

}  // namespace

TEST_SUITE_BEGIN("ising");

TEST_CASE("energy basics") {
    const auto topo = shared_chimera(1);
    IsingInt zero = IsingInt::zero(topo);
    const SpinState up = all_up_state(*topo);
    CHECK(evaluate_energy(zero, up) == 0);

    IsingInt fm = IsingInt::zero(topo);
    fm.j[topo->edge_index(0, 4)] = -1;
    SpinState s = up;
    CHECK(evaluate_energy(fm, s) == -1);
    s[4] = -1;
    CHECK(evaluate_energy(fm, s) == 1);
}

TEST_CASE("energy rejects bad states") {
    const auto topo = shared_chimera(1);
    const IsingInt model = IsingInt::zero(topo);
    SpinState state = all_up_state(*topo);
    state[3] = 0;
    CHECK_THROWS_AS(evaluate_energy(model, state), Error);
    CHECK_THROWS_AS(evaluate_energy(model, SpinState(4, 1)), Error);
}

TEST_CASE("integer energy is exact under reordered summation") {
    const auto topo = shared_chimera(2);
    const auto inst =
        generate_instance(topo, Rational(2, 5), std::nullopt, LoopPolicy::cell_rejection, 17);
    const IsingInt model = inst.to_ising();
    Rng rng(18);
    for (int t = 0; t < 10; ++t) {
        const SpinState state = random_state(*topo, rng);
        int64_t forward = 0, backward = 0;
        const auto& edges = topo->edges();
        for (size_t e = 0; e < edges.size(); ++e)
            forward += model.j[e] * state[edges[e].first] * state[edges[e].second];
        for (size_t e = edges.size(); e-- > 0;)
            backward += model.j[e] * state[edges[e].first] * state[edges[e].second];
        CHECK(forward == backward);
        CHECK(forward == evaluate_energy(model, state));
    }
}

TEST_CASE("normalize scales to max magnitude exactly 1") {
    const auto topo = shared_chimera(1);
    IsingInt model = IsingInt::zero(topo);
    model.j[0] = 2;
    model.j[1] = -1;
    const IsingReal normalized = normalize(model);
    CHECK(max_magnitude(normalized) == 1.0);
    CHECK(normalized.j[0] == 1.0);
    CHECK(normalized.j[1] == -0.5);

    // idempotent on an already-normalized model
    const IsingReal again = normalize(normalized);
    CHECK(again.j == normalized.j);

    CHECK_THROWS_AS(normalize(IsingInt::zero(topo)), Error);
}

TEST_CASE("normalize preserves the argmin set") {
    const auto topo = shared_chimera(1);
    const auto inst =
        generate_instance(topo, Rational(1, 2), std::nullopt, LoopPolicy::hen_min_length, 23);
    const IsingInt model = inst.to_ising();
    REQUIRE(max_magnitude(model) > 1);
    const IsingReal normalized = normalize(model);
    const double scale = static_cast<double>(max_magnitude(model));

    const BruteResult ground = brute_force(model);
    for_all_states(*topo, [&](const SpinState& state) {
        const bool argmin_int = evaluate_energy(model, state) == ground.min_energy;
        const bool argmin_real =
            evaluate_energy(normalized, state) <= ground.min_energy / scale + 1e-12;
        CHECK(argmin_int == argmin_real);
    });
    (void)full;
}

TEST_CASE("gauge transform preserves energies exhaustively") {
    const auto full = ChimeraTopology::build(2);
    const auto topo = std::make_shared<const ChimeraTopology>(
        full.with_broken({0, 1, 2, 3, 8, 9, 10, 11, 16, 17, 18, 19, 24, 25, 26, 27}));
    REQUIRE(topo->num_functional() == 16);

    IsingInt model = IsingInt::zero(topo);
    Rng rng(29);
    for (auto& j : model.j) j = static_cast<int64_t>(rng.next_below(5)) - 2;
    for (Qubit q = 0; q < topo->num_qubits(); ++q)
        if (topo->functional(q)) model.h[q] = static_cast<int64_t>(rng.next_below(3)) - 1;

    Gauge gauge(topo->num_qubits(), 1);
    for (Qubit q = 0; q < topo->num_qubits(); ++q)
        if (topo->functional(q)) gauge[q] = rng.next_bool() ? 1 : -1;

    const IsingInt transformed = gauge_transform(model, gauge);
    for_all_states(*topo, [&](const SpinState& state) {
        CHECK(evaluate_energy(model, state) ==
              evaluate_energy(transformed, gauge_state(state, gauge)));
    });
}

TEST_CASE("gauge identities") {
    const auto topo = shared_chimera(1);
    const auto inst =
        generate_instance(topo, Rational(1, 4), std::nullopt, LoopPolicy::hen_min_length, 31);
    const IsingInt model = inst.to_ising();

    const Gauge identity(topo->num_qubits(), 1);
    CHECK(gauge_transform(model, identity).j == model.j);

    // global flip leaves a zero-field model unchanged
    Gauge flip(topo->num_qubits(), -1);
    const IsingInt flipped = gauge_transform(model, flip);
    CHECK(flipped.j == model.j);
    CHECK(flipped.h == model.h);
}

TEST_CASE("perturb adds calibrated gaussian noise") {
    const auto topo = shared_chimera(1);
    IsingInt base = IsingInt::zero(topo);
    base.j[0] = 1;
    const IsingReal model = normalize(base);

    Rng zero_rng(1);
    const IsingReal same = perturb(model, 0, 0, zero_rng);
    CHECK(same.j == model.j);
    CHECK(same.h == model.h);

    // sample stddev of a single coupler over many perturbations
    Rng rng(2);
    const int m = 10000;
    double sum = 0, ss = 0;
    for (int i = 0; i < m; ++i) {
        const IsingReal noisy = perturb(model, 0.05, 0.035, rng);
        const double d = noisy.j[0] - model.j[0];
        sum += d;
        ss += d * d;
    }
    const double mean = sum / m;
    const double stddev = std::sqrt(ss / m - mean * mean);
    CHECK(stddev == doctest::Approx(0.035).epsilon(0.03));

    CHECK_THROWS_AS(perturb(model, -0.01, 0, rng), Error);
}

TEST_SUITE_END();
