#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gasket/graph.hpp"
#include "gasket/rng.hpp"

namespace gasket {

/// Finite-support i.i.d. chip-height distribution. Values are non-negative
/// integers; mean and variance are derived from the support.
class HeightLaw {
  public:
    explicit HeightLaw(std::vector<std::pair<std::int64_t, double>> support);

    static HeightLaw constant(std::int64_t height) { return HeightLaw({{height, 1.0}}); }

    const std::vector<std::pair<std::int64_t, double>>& support() const { return support_; }
    double mean() const { return mean_; }
    double variance() const { return variance_; }
    double sigma0() const;

    std::int64_t sample(Rng& rng) const;

  private:
    std::vector<std::pair<std::int64_t, double>> support_;
    std::vector<double> cumulative_;
    double mean_ = 0.0;
    double variance_ = 0.0;
};

/// A finite toppling domain: a vertex subset of an ambient (embedded) graph.
/// Every member must have full ambient degree 4; edges leaving the subset
/// feed the sink. Immutable once built, shared across concurrent trials.
class Domain {
  public:
    /// Members = vertex set of the level-`level` prefractal (given half),
    /// embedded in `ambient`. The ambient graph must materialize full
    /// degree-4 neighbourhoods for all members (one level larger suffices;
    /// Both is required whenever the origin is a member).
    static Domain prefractal(const PrefractalGraph& ambient, int level, Half half);

    static Domain from_members(const PrefractalGraph& ambient,
                               std::span<const LatticeCoord> members);

    const PrefractalGraph& ambient() const { return *ambient_; }
    std::size_t size() const { return members_.size(); }

    LatticeCoord coord(std::uint32_t local) const {
        return ambient_->coord_of(members_[local]);
    }
    std::optional<std::uint32_t> local_of(LatticeCoord v) const;

    std::span<const std::uint32_t> in_domain_neighbors(std::uint32_t local) const {
        return {nbr_.data() + nbr_offsets_[local], nbr_.data() + nbr_offsets_[local + 1]};
    }
    int sink_edges(std::uint32_t local) const {
        return 4 - static_cast<int>(nbr_offsets_[local + 1] - nbr_offsets_[local]);
    }

    std::uint32_t ambient_index(std::uint32_t local) const { return members_[local]; }
    /// Local index for an ambient vertex id, or -1 when outside the domain.
    std::int32_t local_of_ambient(std::uint32_t ambient_index) const {
        return local_index_[ambient_index];
    }

  private:
    const PrefractalGraph* ambient_ = nullptr;
    std::vector<std::uint32_t> members_;      // ambient indices, ascending
    std::vector<std::int32_t> local_index_;   // ambient index -> local or -1
    std::vector<std::uint32_t> nbr_offsets_;  // CSR over in-domain neighbours
    std::vector<std::uint32_t> nbr_;          // local indices, direction order
};

/// Chip heights over a domain, indexed by domain-local vertex id.
using Sandpile = std::vector<std::int64_t>;

/// i.i.d. heights, one stream per seed; reproducible and platform-stable.
Sandpile sample_iid(const HeightLaw& law, std::size_t count, std::uint64_t seed);

enum class TopplePolicy { Fifo, Lifo, RandomOrder };

struct ToppleResult {
    Sandpile final;                     // stable heights, all <= 3
    std::vector<std::int64_t> topples;  // T(x)
    std::int64_t sink_mass = 0;

    /// Mass emitted from x during stabilization.
    std::int64_t odometer(std::uint32_t local) const { return 4 * topples[local]; }
};

/// Worklist stabilization with absorbing exterior. A vertex with >= 4 chips
/// topples (batched: floor(h/4) topplings at once); chips on edges leaving
/// the domain vanish into the sink. The abelian property makes (final, T)
/// policy-independent; the policy parameter exists so tests can assert it.
ToppleResult stabilize(const Domain& domain, Sandpile sigma, TopplePolicy policy,
                       std::uint64_t topple_cap, std::uint64_t policy_seed = 0);

/// Exact integer check of final = sigma - 4T + sum of neighbour T over the
/// domain. Returns false (and the first violating vertex) on mismatch.
bool laplacian_check(const Domain& domain, const Sandpile& sigma, const ToppleResult& result,
                     LatticeCoord* first_violation = nullptr);

struct NestedRunResult {
    /// Cumulative odometer at the origin after each stage: u_n(o).
    std::vector<std::int64_t> origin_odometer;
    /// Heights over the ambient graph after the last stage.
    std::vector<std::int64_t> heights;
    /// Cumulative topple counts over the ambient graph.
    std::vector<std::int64_t> topples;
    std::int64_t sink_mass = 0;
};

/// Toppling in infinite volume at desk scale: stabilize one fixed height
/// realization over a nested domain family D_1 c D_2 c ..., carrying the
/// configuration forward. The cumulative emitted mass from o after stage n
/// equals the odometer of stabilizing directly in D_n.
NestedRunResult infinite_volume_run(const PrefractalGraph& ambient,
                                    std::vector<std::int64_t> heights,
                                    std::span<const Domain> nested,
                                    std::uint64_t topple_cap);

struct ExplosionTrial {
    std::int64_t total_chips = 0;  // N_n
    std::int64_t u_origin = 0;     // 4 * T(o)
    std::int64_t t_origin = 0;
    std::int64_t sink_mass = 0;
    std::int64_t final_total = 0;
};

/// One explosion-experiment trial: sample i.i.d. heights on the domain,
/// stabilize, report the origin odometer and mass accounting.
ExplosionTrial run_explosion_trial(const Domain& domain, const HeightLaw& law,
                                   std::uint64_t seed, std::uint64_t topple_cap);

/// Mean-vs-3 classification for the explosion experiment: returns delta >= 0
/// or throws config_error when the law mean is below 3 (outside the
/// experiment's scope).
double explosion_delta(const HeightLaw& law);

}  // namespace gasket
