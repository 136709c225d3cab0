#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gasket/divisible.hpp"
#include "gasket/graph.hpp"
#include "gasket/rotor.hpp"
#include "gasket/sandpile.hpp"
#include "gasket/stats.hpp"

namespace gasket {

enum class ExperimentKind {
    ReflectingFrequency,
    LemmaNine,
    ReturnTimes,
    AbelianExplosion,
    DivisibleExplosion,
    GreenRatio,
};

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

/// Full description of a Monte Carlo experiment. Identical specs (including
/// the master seed) reproduce identical outputs regardless of worker count.
struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::ReflectingFrequency;
    int level_min = 1;
    int level_max = 1;
    std::uint64_t trials = 1;
    std::uint64_t master_seed = 0;

    std::optional<RotorLaw> rotor_law;    // walk experiments; default uniform
    std::optional<HeightLaw> height_law;  // abelian explosion
    std::optional<MassLaw> mass_law;      // divisible explosion

    std::uint64_t step_cap = 100'000'000;
    std::uint64_t topple_cap = 1'000'000'000'000ULL;
    std::uint64_t sweep_cap = 10'000'000;
    double epsilon = 1e-9;
    int max_walk_level = 10;  // lazy-embedding bound for return-time walks

    LatticeCoord green_source{0, 0};
    LatticeCoord green_target{0, 0};

    void validate() const;
    nlohmann::json to_json() const;
    static ExperimentSpec from_json(const nlohmann::json& j);

    /// The derived seed for one (trial, level) cell. ReflectingFrequency
    /// shares one seed (hence one rotor configuration) across the levels of
    /// a trial so that the A_n indicators can be tested for independence on
    /// a common configuration, exactly as the theorem states them.
    std::uint64_t trial_seed(std::uint64_t trial, int level) const;
};

struct LevelSummary {
    int level = 0;
    std::uint64_t trials = 0;
    std::uint64_t failed = 0;
    std::string metric;       // the column summarized below
    double mean = 0.0;
    double stderr_of_mean = 0.0;
    double ci_low = 0.0;      // exact binomial (Clopper-Pearson) for 0/1
    double ci_high = 1.0;     // metrics, normal approximation otherwise
    bool exact_ci = false;
    std::map<std::string, double> extras;
};

inline constexpr double kSummaryConfidence = 0.99;

/// Results of one experiment: a per-(trial, level) table of named values
/// plus per-level summaries. Values are stored trial-major; the CSV is
/// emitted sorted by (level, trial).
struct ExperimentResult {
    ExperimentSpec spec;
    std::vector<int> levels;
    std::vector<std::string> columns;
    std::uint64_t trials = 0;
    std::vector<double> values;  // [trial][level][column]
    std::vector<std::vector<std::string>> errors;  // per trial, per level ("" = ok)
    std::vector<LevelSummary> summaries;

    double value(std::uint64_t trial, std::size_t level_idx, std::size_t column) const {
        return values[(trial * levels.size() + level_idx) * columns.size() + column];
    }
    bool failed(std::uint64_t trial, std::size_t level_idx) const {
        return !errors[trial].empty() && !errors[trial][level_idx].empty();
    }

    std::string records_csv() const;
    nlohmann::json summary_json() const;
};

/// Run every trial of the spec, farming (independent) trials out to
/// `workers` threads. Output is deterministic in the spec alone: per-trial
/// seeds are derived from the master seed and results land in preallocated
/// slots, so worker count and scheduling cannot reorder anything. A failed
/// trial is recorded in its slot, not fatal.
ExperimentResult run(const ExperimentSpec& spec, int workers = 1);

/// Empirical support for recurrence: i.i.d. rotors sampled lazily as the
/// walk expands, one run_until_return per trial with lazy re-embedding up
/// to max_level.
ExperimentResult return_time_study(const RotorLaw& law, std::uint64_t trials,
                                   std::uint64_t step_cap, int max_level,
                                   std::uint64_t master_seed, int workers = 1);

struct GreenRatioEstimate {
    int level = 0;
    std::uint64_t trials = 0;
    double srw_mean = 0.0, srw_stderr = 0.0;
    double urw_mean = 0.0, urw_stderr = 0.0;
    double ratio = 0.0, ratio_stderr = 0.0;
};

/// Truncated Green estimates: mean visits to y of a walk from x before the
/// first exit from S_n plus its corners, for the simple random walk and the
/// uniform rotor walk (fresh rotors each trial).
GreenRatioEstimate green_ratio(LatticeCoord x, LatticeCoord y, int level,
                               std::uint64_t trials, std::uint64_t master_seed,
                               int workers = 1);

struct CltResult {
    std::vector<double> standardized;
    double mean = 0.0;
    double variance = 0.0;
    double ks_distance = 0.0;
    std::size_t vertex_count = 0;
    bool small_sample = false;
};

/// Standardized total-chip statistic (N_n - mu |V_n|) / (sigma0 sqrt(|V_n|))
/// over SG_n^+, sampled `samples` times.
CltResult clt_statistic(const HeightLaw& law, int level, std::size_t samples,
                        std::uint64_t seed);

/// Shared thread-pool helper: calls fn(0..count-1), each index exactly once.
/// Serial when workers <= 1.
void parallel_for(std::uint64_t count, int workers,
                  const std::function<void(std::uint64_t)>& fn);

int default_worker_count();

}  // namespace gasket
