#include <doctest.h>

#include <set>

#include "flq/chimera.hpp"
#include "flq/error.hpp"
#include "flq/rng.hpp"
#include "support/oracles.hpp"

using namespace flq;

TEST_SUITE_BEGIN("chimera");

TEST_CASE("full-yield sizes and edge counts") {
    const auto c4 = ChimeraTopology::build(4);
    CHECK(c4.num_qubits() == 128);
    CHECK(c4.num_functional() == 128);
    CHECK(c4.edges().size() == 16 * 16 + 8 * 4 * 3);  // 352

    const auto c8 = ChimeraTopology::build(8);
    CHECK(c8.num_qubits() == 512);

    const auto c1 = ChimeraTopology::build(1);
    CHECK(c1.num_qubits() == 8);
    CHECK(c1.edges().size() == 16);

    // closed form for every size in the experiment window
    for (uint32_t grid = 1; grid <= 8; ++grid) {
        const auto topo = ChimeraTopology::build(grid);
        CHECK(topo.edges().size() == 16u * grid * grid + 8u * grid * (grid - 1));
    }
}

TEST_CASE("grid bounds") {
    CHECK_THROWS_AS(ChimeraTopology::build(0), Error);
    CHECK_THROWS_AS(ChimeraTopology::build(65), Error);
    CHECK_NOTHROW(ChimeraTopology::build(64));
}

TEST_CASE("unit cell coordinates invert the indexing") {
    const auto c4 = ChimeraTopology::build(4);
    CHECK(c4.unit_cell_of(0) == std::pair<uint32_t, uint32_t>{0, 0});
    CHECK(c4.unit_cell_of(127) == std::pair<uint32_t, uint32_t>{3, 3});
    const auto c8 = ChimeraTopology::build(8);
    CHECK(c8.unit_cell_of(263) == std::pair<uint32_t, uint32_t>{4, 0});
    CHECK_THROWS_AS(c8.unit_cell_of(512), Error);
}

TEST_CASE("degrees: interior 6, boundary 5") {
    const auto topo = ChimeraTopology::build(4);
    for (Qubit q = 0; q < topo.num_qubits(); ++q) {
        const auto [row, col] = topo.unit_cell_of(q);
        const bool horizontal = (q % 8) < 4;
        const bool boundary = horizontal ? (col == 0 || col == 3) : (row == 0 || row == 3);
        CHECK(topo.degree(q) == (boundary ? 5 : 6));
    }
}

TEST_CASE("deterministic and sorted edge list") {
    const auto a = ChimeraTopology::build(6);
    const auto b = ChimeraTopology::build(6);
    CHECK(a.edges() == b.edges());
    for (size_t i = 1; i < a.edges().size(); ++i) CHECK(a.edges()[i - 1] < a.edges()[i]);
    for (const auto& [u, v] : a.edges()) CHECK(u < v);
}

TEST_CASE("connected at full yield") {
    for (uint32_t grid : {1u, 2u, 5u}) CHECK(ChimeraTopology::build(grid).functional_connected());
}

TEST_CASE("yield mask drops qubits and incident edges") {
    const auto c1 = ChimeraTopology::build(1);
    const auto unchanged = c1.with_broken({});
    CHECK(unchanged.num_functional() == 8);
    CHECK(unchanged.edges() == c1.edges());

    const auto masked = c1.with_broken({0});
    CHECK(masked.num_functional() == 7);
    CHECK(masked.edges().size() == 12);  // K_{4,4} qubit degree 4

    CHECK_THROWS_AS(c1.with_broken({8}), Error);
}

TEST_CASE("masked edges match an independent adjacency rebuild") {
    const auto c2 = ChimeraTopology::build(2);
    Rng rng(20240811);
    const auto broken = flq::testing::connected_mask(c2, 20, rng);
    const auto masked = c2.with_broken(broken);
    CHECK(masked.num_functional() == 20);

    const auto expected = flq::testing::reference_edge_set(2, masked.functional_mask());
    std::set<std::pair<uint32_t, uint32_t>> actual(masked.edges().begin(), masked.edges().end());
    CHECK(actual == expected);
}

TEST_CASE("edge_index round-trips every edge") {
    const auto topo = ChimeraTopology::build(3);
    for (size_t e = 0; e < topo.edges().size(); ++e) {
        const auto [u, v] = topo.edges()[e];
        CHECK(topo.edge_index(u, v) == static_cast<int64_t>(e));
        CHECK(topo.edge_index(v, u) == static_cast<int64_t>(e));
    }
    CHECK(topo.edge_index(0, 1) == -1);  // same shore, no coupler
}

TEST_SUITE_END();
