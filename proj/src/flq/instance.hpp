#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "flq/chimera.hpp"
#include "flq/ising.hpp"
#include "flq/rational.hpp"

namespace flq {

class Rng;

/// Loop rejection policy applied to random-walk cycle candidates.
enum class LoopPolicy {
    hen_min_length,  // discard cycles with fewer than 8 vertices
    cell_rejection,  // discard cycles contained in a single unit cell
};

const char* to_string(LoopPolicy policy);
LoopPolicy loop_policy_from_string(const std::string& name);

/// One frustration constraint: a simple cycle in the topology whose edges
/// carry coupling -1 except for a single +1 edge.
struct Loop {
    std::vector<Qubit> vertices;  // cyclic order; consecutive pairs adjacent
    Edge afm_edge;                // the +1 edge, endpoints ordered min-first

    size_t length() const { return vertices.size(); }
};

/// Unlimited coupling range is a distinct sentinel rather than a large
/// integer so serialized instances stay exact.
using RangeLimit = std::optional<int32_t>;  // nullopt = unlimited, else >= 2

/// A generated instance: couplings are the edgewise sum of the loop
/// constraints, biases are identically zero, and the all-up / all-down
/// states are planted ground states.
struct FrustratedLoopInstance {
    std::shared_ptr<const ChimeraTopology> topo;
    std::vector<int32_t> j;  // per topology edge; |j| <= range when limited
    std::vector<Loop> loops;
    Rational alpha;
    RangeLimit range;
    uint64_t seed = 0;
    int64_t planted = 0;  // sum over loops of (2 - length)

    int64_t loop_count() const { return static_cast<int64_t>(loops.size()); }

    IsingInt to_ising() const;
};

struct WalkResult {
    bool stuck = false;
    std::vector<Qubit> cycle;  // non-empty iff !stuck
};

/// Random walk from a uniformly random functional start vertex, stepping
/// uniformly over admissible incident edges and never immediately reversing;
/// returns the cycle formed the first time the walk revisits a vertex on its
/// current path, or reports stuck when no admissible move exists.
///
/// `admissible` is indexed by topology edge position.
WalkResult random_walk_cycle(const ChimeraTopology& topo,
                             const std::vector<uint8_t>& admissible, Rng& rng);

/// Draws roundoff(alpha * n) loops sequentially, excluding edges whose
/// accumulated coupling magnitude has reached the range limit, discarding
/// cycles that violate the policy, and assigning each accepted loop -1
/// couplings except one uniformly chosen +1 edge. Deterministic in all
/// arguments. Throws generation_exhausted when a loop exceeds the attempt
/// budget, and invalid_argument when the functional subgraph is disconnected
/// or alpha is not positive.
FrustratedLoopInstance generate_instance(std::shared_ptr<const ChimeraTopology> topo,
                                         const Rational& alpha, RangeLimit range,
                                         LoopPolicy policy, uint64_t seed);

/// sum over loops of (2 - length); equals the energy of the all-up state.
int64_t planted_energy(const FrustratedLoopInstance& instance);

/// max |J| over edges; 0 for an empty instance.
int32_t range_of(const FrustratedLoopInstance& instance);

constexpr int kMaxLoopAttempts = 10000;

}  // namespace flq
