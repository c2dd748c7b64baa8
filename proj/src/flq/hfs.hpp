#pragma once

#include <cstdint>
#include <vector>

#include "flq/sa.hpp"
#include "flq/solve_result.hpp"

namespace flq {

/// Large-neighborhood zero-temperature search over a Chimera model. Each
/// round draws random induced trees in the condensed half-cell graph (one
/// node per 4-qubit same-orientation half cell, up to 16 joint states) and
/// replaces the selected spins with their exact conditional minimum, found
/// by dynamic programming over the tree. Adopted updates never increase the
/// energy; the search stops on reaching the target or after stall_rounds
/// consecutive rounds without improvement.
struct HfsConfig {
    uint64_t stall_rounds = 0;      // 0 -> 100 * L
    uint64_t subsets_per_round = 1;
    uint64_t max_rounds = 0;        // 0 -> unbounded (stall terminates)
    uint32_t tree_cap = 0;          // max condensed nodes per tree; 0 -> 2 * L
    uint64_t seed = 0;
    double target = -1e300;
    double target_tol = 1e-9;
    std::vector<double>* energy_trace = nullptr;  // energies after each adopted update
};

/// Work counter: each half-cell DP node evaluation counts 0.5 unit-cell
/// updates; model time at 1 us per unit-cell update.
SolveResult hfs_solve(const CompactModel& model, const HfsConfig& config);

/// One conditional subset solve on an explicit state, exposed for
/// verification: grows an induced tree from `rng`, minimizes over it exactly
/// and writes the argmin back into `spins`. Returns the compact indices of
/// the re-solved spins.
class HfsSearch {
public:
    HfsSearch(const CompactModel& model, uint32_t tree_cap);

    std::vector<uint32_t> subset_solve(std::vector<int8_t>& spins, Rng& rng);

    uint64_t nodes_evaluated() const { return nodes_evaluated_; }
    uint32_t condensed_node_count() const { return static_cast<uint32_t>(active_nodes_.size()); }

private:
    struct Node {
        std::vector<uint32_t> members;  // compact spin indices (1..4 of them)
        std::vector<uint32_t> adjacent; // condensed node ids
    };

    std::vector<uint32_t> grow_tree(Rng& rng, std::vector<uint32_t>& parent_of);

    const CompactModel& model_;
    uint32_t tree_cap_;
    std::vector<Node> nodes_;            // indexed by condensed id = 2*cell + orientation
    std::vector<uint32_t> active_nodes_; // ids with at least one functional qubit
    std::vector<uint32_t> node_of_;      // compact spin index -> condensed id
    uint64_t nodes_evaluated_ = 0;

    // scratch reused across subset solves
    std::vector<int8_t> in_tree_;
    std::vector<int8_t> frontier_state_;
    std::vector<uint32_t> frontier_;
};

}  // namespace flq
