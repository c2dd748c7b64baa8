#include "flq/hfs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flq/error.hpp"
#include "flq/rng.hpp"

namespace flq {

namespace {
constexpr uint32_t kNoParent = UINT32_MAX;
constexpr uint8_t kUntouched = 0, kFrontier = 1, kInTree = 2, kDiscarded = 3;
}  // namespace

HfsSearch::HfsSearch(const CompactModel& model, uint32_t tree_cap)
    : model_(model), tree_cap_(std::max(1u, tree_cap)) {
    const auto& topo = *model.topology();
    nodes_.resize(2 * topo.grid() * topo.grid());
    node_of_.resize(model.size());
    for (uint32_t i = 0; i < model.size(); ++i) {
        const Qubit q = model.qubit_of[i];
        const uint32_t id = 2 * topo.cell_index(q) + ((q % 8) >= 4 ? 1 : 0);
        node_of_[i] = id;
        nodes_[id].members.push_back(i);
    }
    // Condensed adjacency from the surviving couplers.
    std::vector<std::vector<uint32_t>> adj(nodes_.size());
    for (const auto& e : topo.edges()) {
        const uint32_t a = node_of_[model.compact_of[e.first]];
        const uint32_t b = node_of_[model.compact_of[e.second]];
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (uint32_t id = 0; id < nodes_.size(); ++id) {
        auto& list = adj[id];
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
        nodes_[id].adjacent = std::move(list);
        if (!nodes_[id].members.empty()) active_nodes_.push_back(id);
    }
    in_tree_.assign(model.size(), 0);
    frontier_state_.assign(nodes_.size(), kUntouched);
}

std::vector<uint32_t> HfsSearch::grow_tree(Rng& rng, std::vector<uint32_t>& parent_of) {
    std::vector<uint32_t> order;
    frontier_.clear();
    const uint32_t start = active_nodes_[rng.next_below(active_nodes_.size())];
    order.push_back(start);
    parent_of[start] = kNoParent;
    frontier_state_[start] = kInTree;
    for (uint32_t nb : nodes_[start].adjacent) {
        if (frontier_state_[nb] == kUntouched && !nodes_[nb].members.empty()) {
            frontier_state_[nb] = kFrontier;
            frontier_.push_back(nb);
        }
    }
    while (order.size() < tree_cap_ && !frontier_.empty()) {
        const size_t pick = rng.next_below(frontier_.size());
        const uint32_t v = frontier_[pick];
        frontier_[pick] = frontier_.back();
        frontier_.pop_back();
        // Keep the grown subgraph an induced tree: adopt a node only while
        // it has exactly one neighbor inside. A second inside-neighbor never
        // goes away, so rejected candidates are discarded permanently.
        uint32_t inside = 0;
        uint32_t parent = kNoParent;
        for (uint32_t nb : nodes_[v].adjacent) {
            if (frontier_state_[nb] == kInTree) {
                ++inside;
                parent = nb;
            }
        }
        if (inside != 1) {
            frontier_state_[v] = kDiscarded;
            continue;
        }
        frontier_state_[v] = kInTree;
        parent_of[v] = parent;
        order.push_back(v);
        for (uint32_t nb : nodes_[v].adjacent) {
            if (frontier_state_[nb] == kUntouched && !nodes_[nb].members.empty()) {
                frontier_state_[nb] = kFrontier;
                frontier_.push_back(nb);
            }
        }
    }
    // reset scratch for the next call
    for (uint32_t id = 0; id < frontier_state_.size(); ++id) frontier_state_[id] = kUntouched;
    return order;
}

std::vector<uint32_t> HfsSearch::subset_solve(std::vector<int8_t>& spins, Rng& rng) {
    std::vector<uint32_t> parent_of(nodes_.size(), kNoParent);
    const std::vector<uint32_t> order = grow_tree(rng, parent_of);
    const size_t K = order.size();
    nodes_evaluated_ += K;

    std::vector<uint32_t> pos_of(nodes_.size(), kNoParent);
    std::vector<uint32_t> touched;
    for (size_t k = 0; k < K; ++k) {
        pos_of[order[k]] = static_cast<uint32_t>(k);
        for (uint32_t q : nodes_[order[k]].members) {
            in_tree_[q] = 1;
            touched.push_back(q);
        }
    }

    const auto& off = model_.offsets;
    const auto& nbr = model_.neighbor;
    const auto& w = model_.weight;

    // total[k][s]: cost of node k in joint state s (bit b set = members[b]
    // spin +1), including boundary fields and, as the upward pass proceeds,
    // the minimized subtree costs of its children.
    std::vector<std::array<double, 16>> total(K);
    std::vector<uint32_t> state_count(K);
    for (size_t k = 0; k < K; ++k) {
        const auto& members = nodes_[order[k]].members;
        const uint32_t m = static_cast<uint32_t>(members.size());
        state_count[k] = 1u << m;
        std::array<double, 4> field{};
        for (uint32_t b = 0; b < m; ++b) {
            const uint32_t q = members[b];
            double f = model_.bias[q];
            for (uint32_t a = off[q]; a < off[q + 1]; ++a)
                if (!in_tree_[nbr[a]]) f += w[a] * spins[nbr[a]];
            field[b] = f;
        }
        for (uint32_t s = 0; s < state_count[k]; ++s) {
            double cost = 0;
            for (uint32_t b = 0; b < m; ++b) cost += (s & (1u << b)) ? field[b] : -field[b];
            total[k][s] = cost;
        }
    }

    // Upward pass, leaves first: minimize each child into its parent. The
    // tree is induced, so every coupler between tree nodes joins a child to
    // its parent and the minimization is exact.
    std::vector<std::array<uint8_t, 16>> choice(K);
    for (size_t k = K; k-- > 1;) {
        const uint32_t v = order[k];
        const uint32_t p = parent_of[v];
        const uint32_t pk = pos_of[p];
        const auto& vm = nodes_[v].members;
        const auto& pm = nodes_[p].members;
        // couplers between v and its parent, by member bit position
        struct Pair {
            uint32_t vb, pb;
            double weight;
        };
        std::array<Pair, 16> pairs;
        uint32_t npairs = 0;
        for (uint32_t vb = 0; vb < vm.size(); ++vb) {
            const uint32_t q = vm[vb];
            for (uint32_t a = off[q]; a < off[q + 1]; ++a) {
                if (node_of_[nbr[a]] != p) continue;
                const auto pb = static_cast<uint32_t>(
                    std::find(pm.begin(), pm.end(), nbr[a]) - pm.begin());
                pairs[npairs++] = {vb, pb, w[a]};
            }
        }
        for (uint32_t sp = 0; sp < state_count[pk]; ++sp) {
            double best = std::numeric_limits<double>::infinity();
            uint8_t best_sv = 0;
            for (uint32_t sv = 0; sv < state_count[k]; ++sv) {
                double cost = total[k][sv];
                for (uint32_t i = 0; i < npairs; ++i) {
                    const auto& pr = pairs[i];
                    const int sv_sign = (sv & (1u << pr.vb)) ? 1 : -1;
                    const int sp_sign = (sp & (1u << pr.pb)) ? 1 : -1;
                    cost += pr.weight * sv_sign * sp_sign;
                }
                if (cost < best) {
                    best = cost;
                    best_sv = static_cast<uint8_t>(sv);
                }
            }
            total[pk][sp] += best;
            choice[k][sp] = best_sv;
        }
    }

    // Root choice and downward state propagation.
    std::vector<uint8_t> chosen(K);
    {
        double best = std::numeric_limits<double>::infinity();
        uint8_t best_s = 0;
        for (uint32_t s = 0; s < state_count[0]; ++s) {
            if (total[0][s] < best) {
                best = total[0][s];
                best_s = static_cast<uint8_t>(s);
            }
        }
        chosen[0] = best_s;
    }
    for (size_t k = 1; k < K; ++k) chosen[k] = choice[k][chosen[pos_of[parent_of[order[k]]]]];

    for (size_t k = 0; k < K; ++k) {
        const auto& members = nodes_[order[k]].members;
        for (uint32_t b = 0; b < members.size(); ++b)
            spins[members[b]] = (chosen[k] & (1u << b)) ? 1 : -1;
    }

    for (uint32_t q : touched) in_tree_[q] = 0;
    return touched;
}

SolveResult hfs_solve(const CompactModel& model, const HfsConfig& config) {
    const auto& topo = *model.topology();
    const uint64_t stall_limit =
        config.stall_rounds ? config.stall_rounds : 100ull * topo.grid();
    const uint64_t per_round = std::max<uint64_t>(1, config.subsets_per_round);
    const uint32_t cap = config.tree_cap ? config.tree_cap : 2 * topo.grid();

    Rng rng(config.seed);
    SolveResult result;
    if (model.size() == 0) {
        result.success = 0.0 <= config.target + config.target_tol;
        result.best_energy = 0;
        result.samples.push_back({0.0, result.success});
        result.restarts = 1;
        return result;
    }

    HfsSearch search(model, cap);
    std::vector<int8_t> spins(model.size());
    for (auto& s : spins) s = rng.next_bool() ? 1 : -1;
    double energy = model.energy(spins);
    bool success = energy <= config.target + config.target_tol;

    uint64_t stall = 0;
    uint64_t rounds = 0;
    while (!success && stall < stall_limit &&
           (config.max_rounds == 0 || rounds < config.max_rounds)) {
        ++rounds;
        bool improved = false;
        for (uint64_t j = 0; j < per_round && !success; ++j) {
            search.subset_solve(spins, rng);
            const double after = model.energy(spins);
            if (after < energy - 1e-12 * (1.0 + std::abs(energy))) improved = true;
            energy = after;
            if (config.energy_trace) config.energy_trace->push_back(energy);
            success = energy <= config.target + config.target_tol;
        }
        stall = improved ? 0 : stall + 1;
    }

    result.best_state = model.expand(spins);
    result.best_energy = energy;
    result.success = success;
    result.samples.push_back({energy, success});
    result.restarts = 1;
    result.rounds = rounds;
    result.work = 0.5 * static_cast<double>(search.nodes_evaluated());
    result.model_time_us = kCellUpdateTimeUs * result.work;
    return result;
}

}  // namespace flq
