#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "gasket/graph.hpp"
#include "gasket/rng.hpp"

namespace gasket {

/// Distribution of the initial rotor over the four cyclic neighbour slots.
/// All probabilities must be strictly positive (the recurrence argument
/// needs every slot reachable at time zero).
class RotorLaw {
  public:
    explicit RotorLaw(const std::array<double, 4>& probabilities);

    static RotorLaw uniform() { return RotorLaw({0.25, 0.25, 0.25, 0.25}); }

    double probability(int slot) const { return p_[static_cast<std::size_t>(slot)]; }

    int sample(Rng& rng) const;

  private:
    std::array<double, 4> p_;
    std::array<double, 3> cumulative_;
};

/// Rotor index per vertex; the index points into cyclic_neighbors(v) of the
/// ambient graph.
using RotorConfig = std::unordered_map<LatticeCoord, std::uint8_t, CoordHash>;

/// Pure per-vertex initial rotors: rotor(v) is a function of (law, seed,
/// coordinates of v) only, so the sampled configuration is independent of
/// visit order and of how large a graph is materialized around it.
class RotorSampler {
  public:
    RotorSampler(RotorLaw law, std::uint64_t seed) : law_(law), seed_(seed) {}

    int initial_rotor(LatticeCoord v) const {
        Rng rng(derive_seed(seed_, pack(v)));
        return law_.sample(rng);
    }

    std::uint64_t seed() const { return seed_; }

  private:
    RotorLaw law_;
    std::uint64_t seed_;
};

/// i.i.d. rotor draw over the given vertices; reproducible from the seed.
RotorConfig sample_config(const RotorLaw& law, std::span<const LatticeCoord> vertices,
                          std::uint64_t seed);

/// Walker position plus the evolving rotor configuration and bookkeeping.
struct WalkState {
    LatticeCoord position{0, 0};
    RotorConfig rotors;
    std::uint64_t time = 0;
    std::unordered_map<LatticeCoord, std::uint64_t, CoordHash> visit_counts;
};

/// One rotor-walk step: increment the rotor at the current position
/// (mod ambient degree), then move where it now points. Exactly one rotor
/// entry changes. Requires the position's full degree-4 neighbourhood to be
/// materialized; otherwise throws frontier_error. Missing rotor entries are
/// drawn from `sampler` when given, else rotor_missing_error.
void step(WalkState& walk, const PrefractalGraph& ambient,
          const RotorSampler* sampler = nullptr);

enum class RunStatus {
    Returned,       // back at the starting vertex
    Exited,         // first vertex outside the region reached
    CapExceeded,    // step cap hit, state preserved
    FrontierHit,    // walk needs a larger materialized level
};

struct RunOptions {
    const RotorSampler* sampler = nullptr;
    bool record_trace = false;
};

struct RunResult {
    RunStatus status = RunStatus::CapExceeded;
    std::uint64_t time = 0;          // walk time at the terminating event
    LatticeCoord exit_vertex{0, 0};  // valid when status == Exited
    std::vector<LatticeCoord> trace; // positions R_0..R_time when recorded
};

/// Run until the walk is back at `origin` (pre: walk.position == origin).
RunResult run_until_return(WalkState& walk, const PrefractalGraph& ambient,
                           LatticeCoord origin, std::uint64_t step_cap,
                           const RunOptions& options = {});

/// Resumption primitive behind run_until_return: no start precondition, so
/// a walk interrupted by FrontierHit can continue on a larger graph.
RunResult run_until_visit(WalkState& walk, const PrefractalGraph& ambient,
                          LatticeCoord target, std::uint64_t step_cap,
                          const RunOptions& options = {});

/// Run until whichever happens first: return to the starting vertex
/// (Returned) or a step landing outside `region` (Exited).
RunResult run_until_exit(WalkState& walk, const PrefractalGraph& ambient,
                         const CoordSet& region, std::uint64_t step_cap,
                         const RunOptions& options = {});

/// Precomputed reflecting-boundary predicate for a fixed vertex set S.
/// S has reflecting boundary iff for every y in its outer boundary, the
/// successive rotor increments from rho(y) serve all of y's neighbours in S
/// before any neighbour outside S.
class ReflectingCheck {
  public:
    ReflectingCheck(const PrefractalGraph& ambient, std::span<const LatticeCoord> s);

    const std::vector<LatticeCoord>& boundary() const { return boundary_; }

    bool check(const RotorConfig& rotors) const;
    bool check(const RotorSampler& sampler) const;

    /// The rotor indices (one per boundary vertex, in boundary() order)
    /// that make the predicate true; empty at a vertex where no single
    /// state works. For the gasket cut sets each corner has exactly one.
    std::vector<std::vector<int>> reflecting_indices() const;

  private:
    bool rotor_ok(std::size_t boundary_slot, int rotor) const;

    std::vector<LatticeCoord> boundary_;
    std::vector<std::vector<bool>> in_s_;  // per boundary vertex, per cyc slot
};

bool is_reflecting(const PrefractalGraph& ambient, std::span<const LatticeCoord> s,
                   const RotorConfig& rotors);
bool is_reflecting(const PrefractalGraph& ambient, std::span<const LatticeCoord> s,
                   const RotorSampler& sampler);

/// Least n <= n_max such that S_n has reflecting boundary under the given
/// rotors, or nullopt. The ambient graph must materialize all corners up to
/// n_max with full degree.
std::optional<int> smallest_reflecting_level(const PrefractalGraph& ambient,
                                             const RotorSampler& sampler, int n_max);
std::optional<int> smallest_reflecting_level(const PrefractalGraph& ambient,
                                             const RotorConfig& rotors, int n_max);

/// Overrides that force S_n's four corner rotors into their unique
/// reflecting state (used to condition experiments on the reflecting event).
RotorConfig reflecting_corner_rotors(const PrefractalGraph& ambient, int level);

}  // namespace gasket
