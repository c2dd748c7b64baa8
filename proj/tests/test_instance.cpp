#include <doctest.h>

#include <memory>
#include <set>

#include "flq/brute.hpp"
#include "flq/error.hpp"
#include "flq/instance.hpp"
#include "flq/instance_io.hpp"
#include "flq/rng.hpp"
#include "support/oracles.hpp"

using namespace flq;

namespace {

std::shared_ptr<const ChimeraTopology> shared_chimera(uint32_t grid) {
    return std::make_shared<const ChimeraTopology>(ChimeraTopology::build(grid));
}

bool is_simple_cycle(const ChimeraTopology& topo, const std::vector<Qubit>& cycle) {
    if (cycle.size() < 3) return false;
    std::set<Qubit> distinct(cycle.begin(), cycle.end());
    if (distinct.size() != cycle.size()) return false;
    for (size_t i = 0; i < cycle.size(); ++i) {
        if (topo.edge_index(cycle[i], cycle[(i + 1) % cycle.size()]) < 0) return false;
    }
    return true;
}

}  // namespace

TEST_SUITE_BEGIN("instance");

TEST_CASE("walk cycles on a single cell are even and >= 4") {
    const auto topo = shared_chimera(1);
    std::vector<uint8_t> admissible(topo->edges().size(), 1);
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        const WalkResult walk = random_walk_cycle(*topo, admissible, rng);
        REQUIRE_FALSE(walk.stuck);
        REQUIRE(is_simple_cycle(*topo, walk.cycle));
        CHECK(walk.cycle.size() % 2 == 0);  // bipartite
        CHECK(walk.cycle.size() >= 4);
    }
}

TEST_CASE("walk finds the unique cycle when only one exists") {
    // Reduce C_2 to a single 6-cycle: 0-4-8 in the left cell, inter-cell
    // 0..., build via admissibility mask instead of a custom graph.
    const auto topo = shared_chimera(2);
    // pick a hexagon: (0,4), (4,1), (1,5), (5,2), (2,6), (6,0)
    const std::vector<std::pair<Qubit, Qubit>> hex = {{0, 4}, {4, 1}, {1, 5},
                                                      {5, 2}, {2, 6}, {6, 0}};
    std::vector<uint8_t> admissible(topo->edges().size(), 0);
    for (const auto& [u, v] : hex) {
        const int64_t e = topo->edge_index(u, v);
        REQUIRE(e >= 0);
        admissible[e] = 1;
    }
    Rng rng(9);
    int cycles = 0;
    for (int i = 0; i < 50; ++i) {
        const WalkResult walk = random_walk_cycle(*topo, admissible, rng);
        if (walk.stuck) continue;  // walks starting off the hexagon
        ++cycles;
        CHECK(walk.cycle.size() == 6);
        const std::set<Qubit> got(walk.cycle.begin(), walk.cycle.end());
        CHECK(got == std::set<Qubit>{0, 1, 2, 4, 5, 6});
    }
    CHECK(cycles > 0);
}

TEST_CASE("walk candidates over C_4 are always simple cycles") {
    const auto topo = shared_chimera(4);
    std::vector<uint8_t> admissible(topo->edges().size(), 1);
    Rng rng(77);
    for (int i = 0; i < 10000; ++i) {
        const WalkResult walk = random_walk_cycle(*topo, admissible, rng);
        REQUIRE_FALSE(walk.stuck);
        REQUIRE(is_simple_cycle(*topo, walk.cycle));
    }
}

TEST_CASE("generated instance invariants on C_4") {
    const auto topo = shared_chimera(4);
    const auto inst =
        generate_instance(topo, Rational(1, 4), 2, LoopPolicy::cell_rejection, 12345);
    CHECK(inst.loop_count() == 32);  // roundoff(0.25 * 128)
    CHECK(range_of(inst) <= 2);
    CHECK(planted_energy(inst) == inst.planted);

    // energy of the planted state equals the loop-length formula, and the
    // all-down state matches by global flip symmetry (h == 0)
    const IsingInt model = inst.to_ising();
    SpinState up = all_up_state(*topo);
    CHECK(evaluate_energy(model, up) == inst.planted);
    for (auto& s : up) s = static_cast<int8_t>(-s);
    CHECK(evaluate_energy(model, up) == inst.planted);

    // couplings are the edgewise sum of the loops
    std::vector<int32_t> rebuilt(topo->edges().size(), 0);
    for (const Loop& loop : inst.loops) {
        for (size_t i = 0; i < loop.vertices.size(); ++i) {
            const Qubit a = loop.vertices[i];
            const Qubit b = loop.vertices[(i + 1) % loop.vertices.size()];
            const Edge canon{std::min(a, b), std::max(a, b)};
            rebuilt[topo->edge_index(a, b)] += canon == loop.afm_edge ? 1 : -1;
        }
    }
    CHECK(rebuilt == inst.j);
}

TEST_CASE("policies reject what they must") {
    const auto topo = shared_chimera(3);
    const auto cell =
        generate_instance(topo, Rational(1, 2), std::nullopt, LoopPolicy::cell_rejection, 7);
    for (const Loop& loop : cell.loops) {
        std::set<uint32_t> cells;
        for (Qubit v : loop.vertices) cells.insert(topo->cell_index(v));
        CHECK(cells.size() >= 2);
    }
    const auto hen =
        generate_instance(topo, Rational(1, 2), std::nullopt, LoopPolicy::hen_min_length, 7);
    for (const Loop& loop : hen.loops) CHECK(loop.length() >= 8);
}

TEST_CASE("k rounds half away from zero") {
    // n = 8 (C_1): alpha = 0.3125 -> k = roundoff(2.5) = 3
    const auto topo = shared_chimera(1);
    const auto inst = generate_instance(topo, Rational::parse_decimal("0.3125"), std::nullopt,
                                        LoopPolicy::hen_min_length, 3);
    CHECK(inst.loop_count() == 3);
}

TEST_CASE("alpha too small for any loop gives the empty instance") {
    const auto topo = shared_chimera(2);
    const auto inst = generate_instance(topo, Rational(1, 1000), 2,
                                        LoopPolicy::cell_rejection, 99);
    CHECK(inst.loop_count() == 0);
    CHECK(inst.planted == 0);
    CHECK(range_of(inst) == 0);
    for (int32_t j : inst.j) CHECK(j == 0);
}

TEST_CASE("determinism: same seed, same bytes; different seed differs") {
    const auto topo = shared_chimera(4);
    const auto a = generate_instance(topo, Rational(1, 4), 3, LoopPolicy::cell_rejection, 2024);
    const auto b = generate_instance(topo, Rational(1, 4), 3, LoopPolicy::cell_rejection, 2024);
    const auto c = generate_instance(topo, Rational(1, 4), 3, LoopPolicy::cell_rejection, 2025);
    CHECK(write_instance_string(a) == write_instance_string(b));
    CHECK(write_instance_string(a) != write_instance_string(c));
}

TEST_CASE("plantedness on enumerable masked instances") {
    const auto full = shared_chimera(2);
    Rng mask_rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const auto broken = flq::testing::connected_mask(*full, 20, mask_rng);
        const auto topo =
            std::make_shared<const ChimeraTopology>(full->with_broken(broken));
        const auto inst = generate_instance(topo, Rational(3, 10), 2,
                                            LoopPolicy::cell_rejection, 1000 + trial);
        const BruteResult brute = brute_force(inst.to_ising());
        CHECK(brute.min_energy == static_cast<double>(inst.planted));
        CHECK(brute.ground_count % 2 == 0);  // flip symmetry
    }
}

TEST_CASE("linearity: energy equals the sum of per-loop energies") {
    const auto topo = shared_chimera(2);
    const auto inst =
        generate_instance(topo, Rational(1, 4), std::nullopt, LoopPolicy::cell_rejection, 55);
    Rng rng(56);
    for (int trial = 0; trial < 20; ++trial) {
        const SpinState state = random_state(*topo, rng);
        int64_t by_loops = 0;
        for (const Loop& loop : inst.loops) {
            for (size_t i = 0; i < loop.vertices.size(); ++i) {
                const Qubit a = loop.vertices[i];
                const Qubit b = loop.vertices[(i + 1) % loop.vertices.size()];
                const Edge canon{std::min(a, b), std::max(a, b)};
                const int sign = canon == loop.afm_edge ? 1 : -1;
                by_loops += sign * state[a] * state[b];
            }
        }
        CHECK(evaluate_energy(inst.to_ising(), state) == by_loops);
    }
}

TEST_CASE("range saturation fails loudly") {
    // alpha far above anything the 16 edges of C_1 can absorb at R=2
    const auto topo = shared_chimera(1);
    CHECK_THROWS_AS(
        generate_instance(topo, Rational(20, 1), 2, LoopPolicy::hen_min_length, 5), Error);
    try {
        generate_instance(topo, Rational(20, 1), 2, LoopPolicy::hen_min_length, 5);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::generation_exhausted);
        CHECK(std::string(e.what()).find("loop") != std::string::npos);
    }
}

TEST_CASE("disconnected functional subgraph is rejected") {
    const auto full = ChimeraTopology::build(2);
    // break the whole left column of cells' connection: remove all qubits of
    // cells (0,1) and (1,1) except leave both sides non-empty
    std::vector<Qubit> broken;
    for (Qubit q = 8; q < 16; ++q) broken.push_back(q);        // cell (0,1)
    for (Qubit q = 16; q < 24; ++q) broken.push_back(q);       // cell (1,0)
    const auto topo = std::make_shared<const ChimeraTopology>(full.with_broken(broken));
    REQUIRE_FALSE(topo->functional_connected());
    CHECK_THROWS_AS(
        generate_instance(topo, Rational(1, 4), 2, LoopPolicy::cell_rejection, 1), Error);
}

TEST_SUITE_END();
