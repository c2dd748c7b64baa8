#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace flq {

using Qubit = uint32_t;
using Edge = std::pair<Qubit, Qubit>;  // always stored with first < second

/// Chimera qubit-connectivity graph C_L: an LxL grid of 8-qubit unit cells,
/// each cell a complete bipartite K_{4,4} between 4 "horizontal" and 4
/// "vertical" qubits, with like-index couplings between adjacent cells.
///
/// Canonical indexing: qubit = 8*(row*L + col) + k with k in [0,8);
/// k < 4 is the horizontal shore (couples to horizontally adjacent cells),
/// k >= 4 the vertical shore (couples to vertically adjacent cells).
///
/// Topologies are immutable after construction; yield masking produces a
/// new topology with the broken qubits and their incident edges removed.
class ChimeraTopology {
public:
    static constexpr uint32_t kMaxGrid = 64;

    /// Full-yield C_L. Throws invalid_argument unless 1 <= L <= 64.
    static ChimeraTopology build(uint32_t grid);

    /// Copy with the listed qubits marked non-functional and their incident
    /// edges dropped. Indices out of [0, N) throw invalid_argument.
    ChimeraTopology with_broken(const std::vector<Qubit>& broken) const;

    uint32_t grid() const { return grid_; }
    uint32_t num_qubits() const { return num_qubits_; }          // N = 8 L^2
    uint32_t num_functional() const { return num_functional_; }  // n
    bool functional(Qubit q) const { return functional_[q] != 0; }
    const std::vector<uint8_t>& functional_mask() const { return functional_; }

    /// Sorted edge list (min index first, lexicographic order), functional
    /// endpoints only. Identical inputs produce identical lists.
    const std::vector<Edge>& edges() const { return edges_; }

    /// Cell coordinate (row, col) of a qubit. Valid for any qubit in [0, N),
    /// functional or not.
    std::pair<uint32_t, uint32_t> unit_cell_of(Qubit q) const;

    uint32_t cell_index(Qubit q) const { return q / 8; }

    /// Incident edges of q as (neighbor, edge index) pairs.
    struct Incidence {
        Qubit neighbor;
        uint32_t edge;
    };
    const std::vector<Incidence>& incident(Qubit q) const { return adjacency_[q]; }

    uint32_t degree(Qubit q) const { return static_cast<uint32_t>(adjacency_[q].size()); }

    /// Broken qubits in ascending order (empty for full yield).
    std::vector<Qubit> broken_qubits() const;

    /// True when every functional qubit is reachable from every other.
    bool functional_connected() const;

    /// Edge index lookup; returns -1 when (u, v) is not an edge.
    int64_t edge_index(Qubit u, Qubit v) const;

private:
    ChimeraTopology() = default;
    void rebuild_edges();

    uint32_t grid_ = 0;
    uint32_t num_qubits_ = 0;
    uint32_t num_functional_ = 0;
    std::vector<uint8_t> functional_;
    std::vector<Edge> edges_;
    std::vector<std::vector<Incidence>> adjacency_;
};

}  // namespace flq
