#include "gasket/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "gasket/io.hpp"

namespace gasket {

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::ReflectingFrequency: return "reflecting_frequency";
        case ExperimentKind::LemmaNine: return "lemma_nine";
        case ExperimentKind::ReturnTimes: return "return_times";
        case ExperimentKind::AbelianExplosion: return "abelian_explosion";
        case ExperimentKind::DivisibleExplosion: return "divisible_explosion";
        case ExperimentKind::GreenRatio: return "green_ratio";
    }
    return "?";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
    for (const ExperimentKind kind :
         {ExperimentKind::ReflectingFrequency, ExperimentKind::LemmaNine,
          ExperimentKind::ReturnTimes, ExperimentKind::AbelianExplosion,
          ExperimentKind::DivisibleExplosion, ExperimentKind::GreenRatio}) {
        if (to_string(kind) == name) return kind;
    }
    throw config_error("unknown experiment kind: " + name);
}

namespace {

nlohmann::json rotor_law_json(const RotorLaw& law) {
    return {law.probability(0), law.probability(1), law.probability(2), law.probability(3)};
}

RotorLaw rotor_law_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 4) {
        throw config_error("rotor law must be an array of 4 probabilities");
    }
    return RotorLaw({j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
                     j[3].get<double>()});
}

template <typename Law>
nlohmann::json support_law_json(const Law& law) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [value, p] : law.support()) out.push_back({value, p});
    return out;
}

HeightLaw height_law_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) {
        throw config_error("height law must be a non-empty array of [value, prob] pairs");
    }
    std::vector<std::pair<std::int64_t, double>> support;
    for (const auto& entry : j) {
        if (!entry.is_array() || entry.size() != 2) {
            throw config_error("height law entries must be [value, prob] pairs");
        }
        support.emplace_back(entry[0].get<std::int64_t>(), entry[1].get<double>());
    }
    return HeightLaw(std::move(support));
}

MassLaw mass_law_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) {
        throw config_error("mass law must be a non-empty array of [value, prob] pairs");
    }
    std::vector<std::pair<double, double>> support;
    for (const auto& entry : j) {
        if (!entry.is_array() || entry.size() != 2) {
            throw config_error("mass law entries must be [value, prob] pairs");
        }
        support.emplace_back(entry[0].get<double>(), entry[1].get<double>());
    }
    return MassLaw(std::move(support));
}

}  // namespace

void ExperimentSpec::validate() const {
    if (trials < 1) throw config_error("trials must be >= 1");
    if (level_min < 1) throw config_error("level_min must be >= 1");
    if (level_max < level_min) throw config_error("level_max must be >= level_min");
    if (step_cap == 0 || topple_cap == 0 || sweep_cap == 0) {
        throw config_error("caps must be positive");
    }
    if (!(epsilon > 0.0)) throw config_error("epsilon must be > 0");
    switch (kind) {
        case ExperimentKind::AbelianExplosion:
            if (!height_law) throw config_error("abelian explosion needs a height law");
            explosion_delta(*height_law);
            break;
        case ExperimentKind::DivisibleExplosion:
            if (!mass_law) throw config_error("divisible explosion needs a mass law");
            validate_divisible_law(*mass_law);
            break;
        case ExperimentKind::ReturnTimes:
            if (max_walk_level < level_min) {
                throw config_error("max_walk_level must be >= the starting level");
            }
            break;
        case ExperimentKind::GreenRatio: {
            const std::vector<LatticeCoord> s = cut_set(level_min);
            if (!std::binary_search(s.begin(), s.end(), green_source)) {
                throw config_error("green-ratio source must lie in the smallest cut set");
            }
            break;
        }
        default:
            break;
    }
}

nlohmann::json ExperimentSpec::to_json() const {
    nlohmann::json j;
    j["kind"] = gasket::to_string(kind);
    j["level_min"] = level_min;
    j["level_max"] = level_max;
    j["trials"] = trials;
    j["master_seed"] = master_seed;
    if (rotor_law) j["rotor_law"] = rotor_law_json(*rotor_law);
    if (height_law) j["height_law"] = support_law_json(*height_law);
    if (mass_law) j["mass_law"] = support_law_json(*mass_law);
    j["step_cap"] = step_cap;
    j["topple_cap"] = topple_cap;
    j["sweep_cap"] = sweep_cap;
    j["epsilon"] = epsilon;
    j["max_walk_level"] = max_walk_level;
    j["green_source"] = {green_source.a, green_source.b};
    j["green_target"] = {green_target.a, green_target.b};
    return j;
}

ExperimentSpec ExperimentSpec::from_json(const nlohmann::json& j) {
    ExperimentSpec spec;
    spec.kind = experiment_kind_from_string(j.at("kind").get<std::string>());
    spec.level_min = j.value("level_min", 1);
    spec.level_max = j.value("level_max", spec.level_min);
    spec.trials = j.value("trials", std::uint64_t{1});
    spec.master_seed = j.value("master_seed", std::uint64_t{0});
    if (j.contains("rotor_law")) spec.rotor_law = rotor_law_from_json(j.at("rotor_law"));
    if (j.contains("height_law")) spec.height_law = height_law_from_json(j.at("height_law"));
    if (j.contains("mass_law")) spec.mass_law = mass_law_from_json(j.at("mass_law"));
    spec.step_cap = j.value("step_cap", spec.step_cap);
    spec.topple_cap = j.value("topple_cap", spec.topple_cap);
    spec.sweep_cap = j.value("sweep_cap", spec.sweep_cap);
    spec.epsilon = j.value("epsilon", spec.epsilon);
    spec.max_walk_level = j.value("max_walk_level", spec.max_walk_level);
    if (j.contains("green_source")) {
        spec.green_source = {j.at("green_source")[0].get<std::int32_t>(),
                             j.at("green_source")[1].get<std::int32_t>()};
    }
    if (j.contains("green_target")) {
        spec.green_target = {j.at("green_target")[0].get<std::int32_t>(),
                             j.at("green_target")[1].get<std::int32_t>()};
    }
    return spec;
}

std::uint64_t ExperimentSpec::trial_seed(std::uint64_t trial, int level) const {
    if (kind == ExperimentKind::ReflectingFrequency) {
        // one rotor configuration per trial, shared by all levels, so the
        // A_n indicators are read off a single i.i.d. configuration
        return derive_seed(master_seed, trial);
    }
    return derive_seed(master_seed, trial, static_cast<std::uint64_t>(level));
}

int default_worker_count() {
    if (const char* env = std::getenv("GASKETSIM_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::uint64_t count, int workers,
                  const std::function<void(std::uint64_t)>& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::uint64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto body = [&]() {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int spawn = static_cast<int>(
        std::min<std::uint64_t>(count, static_cast<std::uint64_t>(workers)));
    pool.reserve(static_cast<std::size_t>(spawn));
    for (int w = 0; w < spawn; ++w) pool.emplace_back(body);
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

namespace {

std::vector<std::string> columns_for(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::ReflectingFrequency:
            return {"reflecting"};
        case ExperimentKind::LemmaNine:
            return {"returned_first", "steps"};
        case ExperimentKind::ReturnTimes:
            return {"returned", "steps", "frontier"};
        case ExperimentKind::AbelianExplosion:
            return {"n_chips", "u_o", "t_o", "sink_mass", "final_total", "indicator"};
        case ExperimentKind::DivisibleExplosion:
            return {"total_mass", "u_o", "sink_mass", "final_total", "indicator",
                    "converged", "sweeps"};
        case ExperimentKind::GreenRatio:
            return {"srw_visits", "urw_visits"};
    }
    return {};
}

std::string metric_for(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::ReflectingFrequency: return "reflecting";
        case ExperimentKind::LemmaNine: return "returned_first";
        case ExperimentKind::ReturnTimes: return "returned";
        case ExperimentKind::AbelianExplosion: return "indicator";
        case ExperimentKind::DivisibleExplosion: return "indicator";
        case ExperimentKind::GreenRatio: return "srw_visits";
    }
    return "";
}

// Precomputed immutable per-level machinery, shared read-only by workers.
struct LevelContext {
    int level = 0;
    std::unique_ptr<ReflectingCheck> reflecting;
    RotorConfig forced_corners;
    std::unique_ptr<CoordSet> region;  // S_n plus its corners = V(SG_n)
    std::unique_ptr<Domain> domain;    // SG_n^+ with sink
    double indicator_threshold = 0.0;
    bool indicator_strict = false;     // compare with '>' instead of '>='
};

struct RunContexts {
    std::shared_ptr<const PrefractalGraph> ambient;
    std::vector<PrefractalGraph> walk_ladder;  // ReturnTimes embedding levels
    std::vector<LevelContext> per_level;
};

RunContexts build_contexts(const ExperimentSpec& spec) {
    RunContexts ctx;
    const auto make_levels = [&]() {
        for (int n = spec.level_min; n <= spec.level_max; ++n) {
            LevelContext lc;
            lc.level = n;
            ctx.per_level.push_back(std::move(lc));
        }
    };
    switch (spec.kind) {
        case ExperimentKind::ReflectingFrequency: {
            ctx.ambient = std::make_shared<PrefractalGraph>(
                PrefractalGraph::build(spec.level_max + 1, Half::Both));
            make_levels();
            for (LevelContext& lc : ctx.per_level) {
                lc.reflecting =
                    std::make_unique<ReflectingCheck>(*ctx.ambient, cut_set(lc.level));
            }
            break;
        }
        case ExperimentKind::LemmaNine: {
            ctx.ambient = std::make_shared<PrefractalGraph>(
                PrefractalGraph::build(spec.level_max + 1, Half::Both));
            make_levels();
            for (LevelContext& lc : ctx.per_level) {
                lc.forced_corners = reflecting_corner_rotors(*ctx.ambient, lc.level);
                const PrefractalGraph shape = PrefractalGraph::build(lc.level, Half::Both);
                lc.region = std::make_unique<CoordSet>(
                    std::span<const LatticeCoord>(shape.vertices()));
            }
            break;
        }
        case ExperimentKind::ReturnTimes: {
            for (int n = spec.level_min; n <= spec.max_walk_level; ++n) {
                ctx.walk_ladder.push_back(PrefractalGraph::build(n, Half::Both));
            }
            LevelContext lc;
            lc.level = spec.level_min;
            ctx.per_level.push_back(std::move(lc));
            break;
        }
        case ExperimentKind::AbelianExplosion:
        case ExperimentKind::DivisibleExplosion: {
            ctx.ambient = std::make_shared<PrefractalGraph>(
                PrefractalGraph::build(spec.level_max + 1, Half::Both));
            make_levels();
            for (LevelContext& lc : ctx.per_level) {
                lc.domain = std::make_unique<Domain>(
                    Domain::prefractal(*ctx.ambient, lc.level, Half::Plus));
                const auto size = static_cast<double>(lc.domain->size());
                if (spec.kind == ExperimentKind::AbelianExplosion) {
                    const double delta = explosion_delta(*spec.height_law);
                    if (delta > 0.0) {
                        lc.indicator_threshold = delta * size / 3.0;
                        lc.indicator_strict = false;
                    } else {
                        lc.indicator_threshold =
                            spec.height_law->sigma0() * std::sqrt(size) / 3.0;
                        lc.indicator_strict = true;
                    }
                } else {
                    lc.indicator_threshold =
                        spec.mass_law->sigma0() * std::sqrt(size) / 3.0;
                    lc.indicator_strict = true;
                }
            }
            break;
        }
        case ExperimentKind::GreenRatio: {
            ctx.ambient = std::make_shared<PrefractalGraph>(
                PrefractalGraph::build(spec.level_max + 1, Half::Both));
            make_levels();
            for (LevelContext& lc : ctx.per_level) {
                const PrefractalGraph shape = PrefractalGraph::build(lc.level, Half::Both);
                lc.region = std::make_unique<CoordSet>(
                    std::span<const LatticeCoord>(shape.vertices()));
            }
            break;
        }
    }
    return ctx;
}

double count_green_visits_srw(const PrefractalGraph& ambient, const CoordSet& region,
                              LatticeCoord x, LatticeCoord y, Rng& rng,
                              std::uint64_t step_cap) {
    LatticeCoord pos = x;
    double visits = (pos == y) ? 1.0 : 0.0;
    for (std::uint64_t t = 0; t < step_cap; ++t) {
        const std::uint32_t i = ambient.index_of(pos);
        const auto nbrs = ambient.neighbors(i);
        pos = ambient.coord_of(nbrs[rng.next_below(nbrs.size())]);
        if (!region.contains(pos)) return visits;
        if (pos == y) visits += 1.0;
    }
    throw std::runtime_error("srw exceeded the step cap before exiting");
}

double count_green_visits_urw(const PrefractalGraph& ambient, const CoordSet& region,
                              LatticeCoord x, LatticeCoord y, const RotorSampler& sampler,
                              std::uint64_t step_cap) {
    WalkState walk;
    walk.position = x;
    double visits = (x == y) ? 1.0 : 0.0;
    for (std::uint64_t t = 0; t < step_cap; ++t) {
        step(walk, ambient, &sampler);
        if (!region.contains(walk.position)) return visits;
        if (walk.position == y) visits += 1.0;
    }
    throw std::runtime_error("urw exceeded the step cap before exiting");
}

void run_trial(const ExperimentSpec& spec, const RunContexts& ctx, std::uint64_t trial,
               ExperimentResult& out) {
    const std::size_t n_levels = out.levels.size();
    const std::size_t n_cols = out.columns.size();
    const RotorLaw rotor_law = spec.rotor_law.value_or(RotorLaw::uniform());

    for (std::size_t li = 0; li < n_levels; ++li) {
        double* slot = &out.values[(trial * n_levels + li) * n_cols];
        const std::uint64_t seed = spec.trial_seed(trial, out.levels[li]);
        try {
            switch (spec.kind) {
                case ExperimentKind::ReflectingFrequency: {
                    const RotorSampler sampler(rotor_law, seed);
                    slot[0] = ctx.per_level[li].reflecting->check(sampler) ? 1.0 : 0.0;
                    break;
                }
                case ExperimentKind::LemmaNine: {
                    const RotorSampler sampler(rotor_law, seed);
                    WalkState walk;
                    walk.position = {0, 0};
                    walk.rotors = ctx.per_level[li].forced_corners;
                    RunOptions options;
                    options.sampler = &sampler;
                    const RunResult res =
                        run_until_exit(walk, *ctx.ambient, *ctx.per_level[li].region,
                                       spec.step_cap, options);
                    slot[0] = res.status == RunStatus::Returned ? 1.0 : 0.0;
                    slot[1] = static_cast<double>(res.time);
                    break;
                }
                case ExperimentKind::ReturnTimes: {
                    const RotorSampler sampler(rotor_law, seed);
                    WalkState walk;
                    walk.position = {0, 0};
                    RunOptions options;
                    options.sampler = &sampler;
                    std::uint64_t steps = 0;
                    std::size_t rung = 0;
                    double returned = 0.0, frontier = 0.0;
                    while (true) {
                        const std::uint64_t remaining = spec.step_cap - steps;
                        const RunResult res = run_until_visit(
                            walk, ctx.walk_ladder[rung], {0, 0}, remaining, options);
                        steps += res.time;
                        if (res.status == RunStatus::Returned) {
                            returned = 1.0;
                            break;
                        }
                        if (res.status == RunStatus::FrontierHit &&
                            rung + 1 < ctx.walk_ladder.size()) {
                            ++rung;
                            continue;
                        }
                        frontier = res.status == RunStatus::FrontierHit ? 1.0 : 0.0;
                        break;
                    }
                    slot[0] = returned;
                    slot[1] = static_cast<double>(steps);
                    slot[2] = frontier;
                    break;
                }
                case ExperimentKind::AbelianExplosion: {
                    const LevelContext& lc = ctx.per_level[li];
                    const ExplosionTrial t =
                        run_explosion_trial(*lc.domain, *spec.height_law, seed,
                                            spec.topple_cap);
                    const auto u = static_cast<double>(t.u_origin);
                    slot[0] = static_cast<double>(t.total_chips);
                    slot[1] = u;
                    slot[2] = static_cast<double>(t.t_origin);
                    slot[3] = static_cast<double>(t.sink_mass);
                    slot[4] = static_cast<double>(t.final_total);
                    slot[5] = (lc.indicator_strict ? u > lc.indicator_threshold
                                                   : u >= lc.indicator_threshold)
                                  ? 1.0
                                  : 0.0;
                    break;
                }
                case ExperimentKind::DivisibleExplosion: {
                    const LevelContext& lc = ctx.per_level[li];
                    const DivisibleTrial t = run_divisible_trial(
                        *lc.domain, *spec.mass_law, seed, spec.epsilon, spec.sweep_cap);
                    slot[0] = t.total_mass;
                    slot[1] = t.u_origin;
                    slot[2] = t.sink_mass;
                    slot[3] = t.final_total;
                    slot[4] = t.u_origin > lc.indicator_threshold ? 1.0 : 0.0;
                    slot[5] = t.converged ? 1.0 : 0.0;
                    slot[6] = static_cast<double>(t.sweeps);
                    break;
                }
                case ExperimentKind::GreenRatio: {
                    const LevelContext& lc = ctx.per_level[li];
                    Rng srw_rng(derive_seed(seed, 1));
                    slot[0] = count_green_visits_srw(*ctx.ambient, *lc.region,
                                                     spec.green_source, spec.green_target,
                                                     srw_rng, spec.step_cap);
                    const RotorSampler sampler(rotor_law, derive_seed(seed, 2));
                    slot[1] = count_green_visits_urw(*ctx.ambient, *lc.region,
                                                     spec.green_source, spec.green_target,
                                                     sampler, spec.step_cap);
                    break;
                }
            }
        } catch (const std::exception& e) {
            if (out.errors[trial].empty()) out.errors[trial].resize(n_levels);
            out.errors[trial][li] = e.what();
        }
    }
}

}  // namespace

ExperimentResult run(const ExperimentSpec& spec, int workers) {
    spec.validate();
    ExperimentResult out;
    out.spec = spec;
    out.columns = columns_for(spec.kind);
    out.trials = spec.trials;
    if (spec.kind == ExperimentKind::ReturnTimes) {
        out.levels = {spec.level_min};
    } else {
        for (int n = spec.level_min; n <= spec.level_max; ++n) out.levels.push_back(n);
    }

    const RunContexts ctx = build_contexts(spec);
    out.values.assign(out.trials * out.levels.size() * out.columns.size(), 0.0);
    out.errors.assign(out.trials, {});

    parallel_for(out.trials, workers,
                 [&](std::uint64_t trial) { run_trial(spec, ctx, trial, out); });

    // summaries: serial, in level order
    const std::string metric = metric_for(spec.kind);
    const std::size_t metric_col =
        static_cast<std::size_t>(std::find(out.columns.begin(), out.columns.end(), metric) -
                                 out.columns.begin());
    const bool binomial = spec.kind != ExperimentKind::GreenRatio;
    for (std::size_t li = 0; li < out.levels.size(); ++li) {
        LevelSummary s;
        s.level = out.levels[li];
        s.metric = metric;
        std::vector<double> metric_values;
        std::vector<double> u_values;
        std::vector<double> urw_values;
        std::vector<double> steps_values;
        std::uint64_t converged = 0;
        for (std::uint64_t t = 0; t < out.trials; ++t) {
            if (out.failed(t, li)) {
                ++s.failed;
                continue;
            }
            metric_values.push_back(out.value(t, li, metric_col));
            switch (spec.kind) {
                case ExperimentKind::AbelianExplosion:
                    u_values.push_back(out.value(t, li, 1));
                    break;
                case ExperimentKind::DivisibleExplosion:
                    u_values.push_back(out.value(t, li, 1));
                    converged += out.value(t, li, 5) > 0.5 ? 1 : 0;
                    break;
                case ExperimentKind::GreenRatio:
                    urw_values.push_back(out.value(t, li, 1));
                    break;
                case ExperimentKind::LemmaNine:
                case ExperimentKind::ReturnTimes:
                    steps_values.push_back(out.value(t, li, 1));
                    break;
                default:
                    break;
            }
        }
        s.trials = metric_values.size();
        if (!metric_values.empty()) {
            const SampleStats stats =
                sample_stats(std::span<const double>(metric_values));
            s.mean = stats.mean;
            s.stderr_of_mean = stats.stderr_of_mean;
            if (binomial) {
                std::uint64_t k = 0;
                for (const double v : metric_values) k += v > 0.5 ? 1 : 0;
                const BinomialCi ci = clopper_pearson(k, s.trials, kSummaryConfidence);
                s.ci_low = ci.low;
                s.ci_high = ci.high;
                s.exact_ci = true;
            } else {
                s.ci_low = s.mean - 2.5758293035489004 * s.stderr_of_mean;
                s.ci_high = s.mean + 2.5758293035489004 * s.stderr_of_mean;
                s.exact_ci = false;
            }
        }
        if (!u_values.empty()) {
            s.extras["median_u"] = median(u_values);
            s.extras["mean_u"] = sample_stats(std::span<const double>(u_values)).mean;
        }
        if (spec.kind == ExperimentKind::DivisibleExplosion) {
            s.extras["converged"] = static_cast<double>(converged);
        }
        if (!urw_values.empty()) {
            const SampleStats urw = sample_stats(std::span<const double>(urw_values));
            s.extras["urw_mean"] = urw.mean;
            s.extras["urw_stderr"] = urw.stderr_of_mean;
            if (s.mean != 0.0 && urw.mean != 0.0) {
                const double ratio = s.mean / urw.mean;
                const double rel_a = s.stderr_of_mean / s.mean;
                const double rel_b = urw.stderr_of_mean / urw.mean;
                s.extras["ratio"] = ratio;
                s.extras["ratio_stderr"] =
                    std::abs(ratio) * std::sqrt(rel_a * rel_a + rel_b * rel_b);
            }
        }
        if (!steps_values.empty()) {
            s.extras["mean_steps"] = sample_stats(std::span<const double>(steps_values)).mean;
            s.extras["median_steps"] = median(steps_values);
            s.extras["max_steps"] =
                *std::max_element(steps_values.begin(), steps_values.end());
        }
        out.summaries.push_back(std::move(s));
    }
    return out;
}

std::string ExperimentResult::records_csv() const {
    std::ostringstream out;
    out << "trial,level,seed";
    for (const std::string& c : columns) out << ',' << c;
    out << ",error\n";
    for (std::size_t li = 0; li < levels.size(); ++li) {
        for (std::uint64_t t = 0; t < trials; ++t) {
            out << t << ',' << levels[li] << ',' << spec.trial_seed(t, levels[li]);
            for (std::size_t c = 0; c < columns.size(); ++c) {
                out << ',' << format_double(value(t, li, c));
            }
            out << ',';
            if (failed(t, li)) {
                std::string msg = errors[t][li];
                for (char& ch : msg) {
                    if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
                }
                out << msg;
            }
            out << '\n';
        }
    }
    return out.str();
}

nlohmann::json ExperimentResult::summary_json() const {
    nlohmann::json j;
    j["spec"] = spec.to_json();
    j["master_seed"] = spec.master_seed;
    j["confidence"] = kSummaryConfidence;
    j["columns"] = columns;
    nlohmann::json levels_json = nlohmann::json::array();
    for (const LevelSummary& s : summaries) {
        nlohmann::json entry;
        entry["level"] = s.level;
        entry["trials"] = s.trials;
        entry["failed"] = s.failed;
        entry["metric"] = s.metric;
        entry["mean"] = s.mean;
        entry["stderr"] = s.stderr_of_mean;
        entry["ci_low"] = s.ci_low;
        entry["ci_high"] = s.ci_high;
        entry["exact_ci"] = s.exact_ci;
        if (!s.extras.empty()) entry["extras"] = s.extras;
        levels_json.push_back(std::move(entry));
    }
    j["levels"] = std::move(levels_json);
    return j;
}

ExperimentResult return_time_study(const RotorLaw& law, std::uint64_t trials,
                                   std::uint64_t step_cap, int max_level,
                                   std::uint64_t master_seed, int workers) {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::ReturnTimes;
    spec.level_min = spec.level_max = std::min(4, max_level);
    spec.trials = trials;
    spec.master_seed = master_seed;
    spec.rotor_law = law;
    spec.step_cap = step_cap;
    spec.max_walk_level = max_level;
    return run(spec, workers);
}

GreenRatioEstimate green_ratio(LatticeCoord x, LatticeCoord y, int level,
                               std::uint64_t trials, std::uint64_t master_seed,
                               int workers) {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::GreenRatio;
    spec.level_min = spec.level_max = level;
    spec.trials = trials;
    spec.master_seed = master_seed;
    spec.green_source = x;
    spec.green_target = y;
    const ExperimentResult result = run(spec, workers);
    const LevelSummary& s = result.summaries.at(0);
    GreenRatioEstimate est;
    est.level = level;
    est.trials = s.trials;
    est.srw_mean = s.mean;
    est.srw_stderr = s.stderr_of_mean;
    est.urw_mean = s.extras.count("urw_mean") ? s.extras.at("urw_mean") : 0.0;
    est.urw_stderr = s.extras.count("urw_stderr") ? s.extras.at("urw_stderr") : 0.0;
    est.ratio = s.extras.count("ratio") ? s.extras.at("ratio") : 0.0;
    est.ratio_stderr = s.extras.count("ratio_stderr") ? s.extras.at("ratio_stderr") : 0.0;
    return est;
}

CltResult clt_statistic(const HeightLaw& law, int level, std::size_t samples,
                        std::uint64_t seed) {
    if (!(law.sigma0() > 0.0)) {
        throw config_error("clt statistic requires a law with positive variance");
    }
    if (level < 0) throw config_error("level must be >= 0");
    if (samples < 2) throw config_error("need at least 2 samples");
    std::uint64_t pow3 = 1;
    for (int i = 0; i <= level; ++i) pow3 *= 3;
    const std::uint64_t vertex_count = (pow3 + 3) / 2;

    CltResult result;
    result.vertex_count = vertex_count;
    result.small_sample = vertex_count < 30;
    result.standardized.resize(samples);
    const double mu = law.mean() * static_cast<double>(vertex_count);
    const double scale = law.sigma0() * std::sqrt(static_cast<double>(vertex_count));
    for (std::size_t i = 0; i < samples; ++i) {
        Rng rng(derive_seed(seed, i));
        std::int64_t total = 0;
        for (std::uint64_t v = 0; v < vertex_count; ++v) total += law.sample(rng);
        result.standardized[i] = (static_cast<double>(total) - mu) / scale;
    }
    const SampleStats stats = sample_stats(std::span<const double>(result.standardized));
    result.mean = stats.mean;
    result.variance = stats.variance;
    result.ks_distance = ks_distance_to_normal(result.standardized);
    return result;
}

}  // namespace gasket
