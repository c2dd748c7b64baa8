#include "flq/chimera.hpp"

#include <algorithm>
#include <string>

#include "flq/error.hpp"

namespace flq {

ChimeraTopology ChimeraTopology::build(uint32_t grid) {
    if (grid < 1 || grid > kMaxGrid) {
        throw_invalid("chimera grid dimension must be in [1, " +
                      std::to_string(kMaxGrid) + "], got " + std::to_string(grid));
    }
    ChimeraTopology topo;
    topo.grid_ = grid;
    topo.num_qubits_ = 8 * grid * grid;
    topo.num_functional_ = topo.num_qubits_;
    topo.functional_.assign(topo.num_qubits_, 1);
    topo.rebuild_edges();
    return topo;
}

ChimeraTopology ChimeraTopology::with_broken(const std::vector<Qubit>& broken) const {
    ChimeraTopology topo;
    topo.grid_ = grid_;
    topo.num_qubits_ = num_qubits_;
    topo.functional_ = functional_;
    for (Qubit q : broken) {
        if (q >= num_qubits_) {
            throw_invalid("broken qubit index " + std::to_string(q) +
                          " out of range [0, " + std::to_string(num_qubits_) + ")");
        }
        topo.functional_[q] = 0;
    }
    topo.num_functional_ = 0;
    for (uint8_t f : topo.functional_) topo.num_functional_ += f;
    topo.rebuild_edges();
    return topo;
}

void ChimeraTopology::rebuild_edges() {
    const uint32_t L = grid_;
    edges_.clear();
    auto add = [&](Qubit u, Qubit v) {
        if (u > v) std::swap(u, v);
        if (functional_[u] && functional_[v]) edges_.emplace_back(u, v);
    };
    for (uint32_t row = 0; row < L; ++row) {
        for (uint32_t col = 0; col < L; ++col) {
            const Qubit base = 8 * (row * L + col);
            // intra-cell K_{4,4}
            for (uint32_t i = 0; i < 4; ++i)
                for (uint32_t j = 4; j < 8; ++j) add(base + i, base + j);
            // horizontal shore couples to the cell to the right
            if (col + 1 < L)
                for (uint32_t k = 0; k < 4; ++k) add(base + k, base + 8 + k);
            // vertical shore couples to the cell below
            if (row + 1 < L)
                for (uint32_t k = 4; k < 8; ++k) add(base + k, base + 8 * L + k);
        }
    }
    std::sort(edges_.begin(), edges_.end());

    adjacency_.assign(num_qubits_, {});
    for (uint32_t e = 0; e < edges_.size(); ++e) {
        const auto [u, v] = edges_[e];
        adjacency_[u].push_back({v, e});
        adjacency_[v].push_back({u, e});
    }
}

std::pair<uint32_t, uint32_t> ChimeraTopology::unit_cell_of(Qubit q) const {
    if (q >= num_qubits_) {
        throw_invalid("qubit index " + std::to_string(q) + " out of range [0, " +
                      std::to_string(num_qubits_) + ")");
    }
    const uint32_t cell = q / 8;
    return {cell / grid_, cell % grid_};
}

std::vector<Qubit> ChimeraTopology::broken_qubits() const {
    std::vector<Qubit> out;
    for (Qubit q = 0; q < num_qubits_; ++q)
        if (!functional_[q]) out.push_back(q);
    return out;
}

bool ChimeraTopology::functional_connected() const {
    if (num_functional_ == 0) return true;
    Qubit start = 0;
    while (!functional_[start]) ++start;
    std::vector<uint8_t> seen(num_qubits_, 0);
    std::vector<Qubit> stack{start};
    seen[start] = 1;
    uint32_t reached = 0;
    while (!stack.empty()) {
        const Qubit q = stack.back();
        stack.pop_back();
        ++reached;
        for (const auto& inc : adjacency_[q]) {
            if (!seen[inc.neighbor]) {
                seen[inc.neighbor] = 1;
                stack.push_back(inc.neighbor);
            }
        }
    }
    return reached == num_functional_;
}

int64_t ChimeraTopology::edge_index(Qubit u, Qubit v) const {
    if (u > v) std::swap(u, v);
    const auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{u, v});
    if (it == edges_.end() || *it != Edge{u, v}) return -1;
    return it - edges_.begin();
}

}  // namespace flq
