#include "flq/instance.hpp"

#include <algorithm>
#include <string>

#include "flq/error.hpp"
#include "flq/rng.hpp"

namespace flq {

const char* to_string(LoopPolicy policy) {
    switch (policy) {
        case LoopPolicy::hen_min_length: return "hen-minlength";
        case LoopPolicy::cell_rejection: return "cell-rejection";
    }
    return "?";
}

LoopPolicy loop_policy_from_string(const std::string& name) {
    if (name == "hen-minlength" || name == "hen") return LoopPolicy::hen_min_length;
    if (name == "cell-rejection" || name == "cell") return LoopPolicy::cell_rejection;
    throw_invalid("unknown loop policy '" + name + "'");
}

IsingInt FrustratedLoopInstance::to_ising() const {
    IsingInt m = IsingInt::zero(topo);
    for (size_t k = 0; k < j.size(); ++k) m.j[k] = j[k];
    return m;
}

WalkResult random_walk_cycle(const ChimeraTopology& topo,
                             const std::vector<uint8_t>& admissible, Rng& rng) {
    if (topo.num_functional() == 0) throw_invalid("topology has no functional qubits");

    // Uniform functional start vertex.
    uint64_t pick = rng.next_below(topo.num_functional());
    Qubit start = 0;
    for (Qubit q = 0; q < topo.num_qubits(); ++q) {
        if (topo.functional(q) && pick-- == 0) {
            start = q;
            break;
        }
    }

    std::vector<Qubit> path{start};
    std::vector<int32_t> pos_on_path(topo.num_qubits(), -1);
    pos_on_path[start] = 0;

    Qubit current = start;
    uint32_t arrival_edge = UINT32_MAX;
    std::vector<const ChimeraTopology::Incidence*> moves;
    // A walk either revisits a path vertex within n steps or gets stuck.
    for (;;) {
        moves.clear();
        for (const auto& inc : topo.incident(current)) {
            if (inc.edge != arrival_edge && admissible[inc.edge]) moves.push_back(&inc);
        }
        if (moves.empty()) return {true, {}};
        const auto* step = moves[rng.next_below(moves.size())];
        const Qubit next = step->neighbor;
        if (pos_on_path[next] >= 0) {
            const auto first = path.begin() + pos_on_path[next];
            return {false, std::vector<Qubit>(first, path.end())};
        }
        pos_on_path[next] = static_cast<int32_t>(path.size());
        path.push_back(next);
        current = next;
        arrival_edge = step->edge;
    }
}

namespace {

bool cycle_respects_policy(const ChimeraTopology& topo, const std::vector<Qubit>& cycle,
                           LoopPolicy policy) {
    if (policy == LoopPolicy::hen_min_length) return cycle.size() >= 8;
    const uint32_t cell = topo.cell_index(cycle.front());
    for (Qubit v : cycle)
        if (topo.cell_index(v) != cell) return true;
    return false;  // contained in a single unit cell
}

}  // namespace

FrustratedLoopInstance generate_instance(std::shared_ptr<const ChimeraTopology> topo,
                                         const Rational& alpha, RangeLimit range,
                                         LoopPolicy policy, uint64_t seed) {
    if (alpha.num <= 0) throw_invalid("alpha must be positive");
    if (range && *range < 2) throw_invalid("range limit must be >= 2");

    FrustratedLoopInstance inst;
    inst.topo = topo;
    inst.alpha = alpha;
    inst.range = range;
    inst.seed = seed;
    inst.j.assign(topo->edges().size(), 0);

    const int64_t k = roundoff_times(alpha, topo->num_functional());
    if (k == 0) return inst;

    if (!topo->functional_connected())
        throw_invalid("functional subgraph must be connected for generation");

    std::vector<uint8_t> admissible(topo->edges().size(), 1);
    inst.loops.reserve(k);
    for (int64_t i = 0; i < k; ++i) {
        // Substream per loop index so parallel generation of different
        // instances can still reproduce any single loop.
        Rng rng(hash64({seed, static_cast<uint64_t>(i)}));
        if (range) {
            for (size_t e = 0; e < inst.j.size(); ++e)
                admissible[e] = std::abs(inst.j[e]) < *range;
        }
        bool accepted = false;
        for (int attempt = 0; attempt < kMaxLoopAttempts; ++attempt) {
            WalkResult walk = random_walk_cycle(*topo, admissible, rng);
            if (walk.stuck || !cycle_respects_policy(*topo, walk.cycle, policy)) continue;

            Loop loop;
            loop.vertices = std::move(walk.cycle);
            const size_t len = loop.vertices.size();
            const size_t afm = rng.next_below(len);
            for (size_t v = 0; v < len; ++v) {
                Qubit a = loop.vertices[v];
                Qubit b = loop.vertices[(v + 1) % len];
                const int64_t e = topo->edge_index(a, b);
                inst.j[e] += (v == afm) ? 1 : -1;
                if (v == afm) loop.afm_edge = {std::min(a, b), std::max(a, b)};
            }
            inst.loops.push_back(std::move(loop));
            inst.planted += 2 - static_cast<int64_t>(len);
            accepted = true;
            break;
        }
        if (!accepted) {
            throw Error(ErrorCode::generation_exhausted,
                        "loop " + std::to_string(i) + " of " + std::to_string(k) +
                            " exceeded " + std::to_string(kMaxLoopAttempts) +
                            " attempts (range saturation)");
        }
    }
    return inst;
}

int64_t planted_energy(const FrustratedLoopInstance& instance) {
    int64_t e = 0;
    for (const Loop& loop : instance.loops) e += 2 - static_cast<int64_t>(loop.length());
    return e;
}

int32_t range_of(const FrustratedLoopInstance& instance) {
    int32_t r = 0;
    for (int32_t v : instance.j) r = std::max(r, std::abs(v));
    return r;
}

}  // namespace flq
