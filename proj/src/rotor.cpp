#include "gasket/rotor.hpp"

#include <cmath>
#include <string>

namespace gasket {

namespace {

std::string coord_str(LatticeCoord v) {
    return "(" + std::to_string(v.a) + "," + std::to_string(v.b) + ")";
}

}  // namespace

RotorLaw::RotorLaw(const std::array<double, 4>& probabilities) : p_(probabilities) {
    double sum = 0.0;
    for (const double p : p_) {
        if (!(p > 0.0)) {
            throw config_error("rotor law needs strictly positive probabilities");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw config_error("rotor law probabilities must sum to 1");
    }
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) {
        acc += p_[static_cast<std::size_t>(i)];
        cumulative_[static_cast<std::size_t>(i)] = acc;
    }
}

int RotorLaw::sample(Rng& rng) const {
    const double u = rng.next_double();
    for (int i = 0; i < 3; ++i) {
        if (u < cumulative_[static_cast<std::size_t>(i)]) return i;
    }
    return 3;
}

RotorConfig sample_config(const RotorLaw& law, std::span<const LatticeCoord> vertices,
                          std::uint64_t seed) {
    const RotorSampler sampler(law, seed);
    RotorConfig config;
    config.reserve(vertices.size());
    for (const LatticeCoord v : vertices) {
        config.emplace(v, static_cast<std::uint8_t>(sampler.initial_rotor(v)));
    }
    return config;
}

namespace {

int rotor_at(WalkState& walk, LatticeCoord v, const RotorSampler* sampler) {
    const auto it = walk.rotors.find(v);
    if (it != walk.rotors.end()) return it->second;
    if (sampler == nullptr) {
        throw rotor_missing_error("no rotor at " + coord_str(v));
    }
    const int r = sampler->initial_rotor(v);
    walk.rotors.emplace(v, static_cast<std::uint8_t>(r));
    return r;
}

// Increment-then-move on the full degree-4 neighbourhood; returns the new
// position. The caller has already verified the degree.
LatticeCoord advance(WalkState& walk, const PrefractalGraph& ambient,
                     std::uint32_t position_index, const RotorSampler* sampler) {
    const LatticeCoord at = walk.position;
    const auto nbrs = ambient.neighbors(position_index);
    const int d = static_cast<int>(nbrs.size());
    const int next = (rotor_at(walk, at, sampler) + 1) % d;
    walk.rotors[at] = static_cast<std::uint8_t>(next);
    const LatticeCoord target = ambient.coord_of(nbrs[static_cast<std::size_t>(next)]);
    walk.position = target;
    walk.time += 1;
    walk.visit_counts[target] += 1;
    return target;
}

}  // namespace

void step(WalkState& walk, const PrefractalGraph& ambient, const RotorSampler* sampler) {
    const std::uint32_t i = ambient.index_of(walk.position);
    if (ambient.degree(i) < 4) {
        throw frontier_error("cannot step from frontier vertex " + coord_str(walk.position) +
                             "; embed in a larger level");
    }
    advance(walk, ambient, i, sampler);
}

namespace {

enum class StopRule { Return, ReturnOrExit };

RunResult run_walk(WalkState& walk, const PrefractalGraph& ambient, LatticeCoord origin,
                   const CoordSet* region, std::uint64_t step_cap, StopRule rule,
                   const RunOptions& options) {
    RunResult result;
    if (options.record_trace) result.trace.push_back(walk.position);
    for (std::uint64_t t = 1; t <= step_cap; ++t) {
        const std::uint32_t i = ambient.index_of(walk.position);
        if (ambient.degree(i) < 4) {
            result.status = RunStatus::FrontierHit;
            result.time = t - 1;
            return result;
        }
        const LatticeCoord now = advance(walk, ambient, i, options.sampler);
        if (options.record_trace) result.trace.push_back(now);
        if (now == origin) {
            result.status = RunStatus::Returned;
            result.time = t;
            return result;
        }
        if (rule == StopRule::ReturnOrExit && !region->contains(now)) {
            result.status = RunStatus::Exited;
            result.time = t;
            result.exit_vertex = now;
            return result;
        }
    }
    result.status = RunStatus::CapExceeded;
    result.time = step_cap;
    return result;
}

}  // namespace

RunResult run_until_return(WalkState& walk, const PrefractalGraph& ambient,
                           LatticeCoord origin, std::uint64_t step_cap,
                           const RunOptions& options) {
    if (!(walk.position == origin)) {
        throw config_error("run_until_return requires the walk to start at the origin");
    }
    return run_walk(walk, ambient, origin, nullptr, step_cap, StopRule::Return, options);
}

RunResult run_until_visit(WalkState& walk, const PrefractalGraph& ambient,
                          LatticeCoord target, std::uint64_t step_cap,
                          const RunOptions& options) {
    return run_walk(walk, ambient, target, nullptr, step_cap, StopRule::Return, options);
}

RunResult run_until_exit(WalkState& walk, const PrefractalGraph& ambient,
                         const CoordSet& region, std::uint64_t step_cap,
                         const RunOptions& options) {
    if (!region.contains(walk.position)) {
        throw config_error("run_until_exit requires the walk to start inside the region");
    }
    return run_walk(walk, ambient, walk.position, &region, step_cap, StopRule::ReturnOrExit,
                    options);
}

ReflectingCheck::ReflectingCheck(const PrefractalGraph& ambient,
                                 std::span<const LatticeCoord> s) {
    const CoordSet members(s);
    boundary_ = outer_boundary(ambient, s);
    in_s_.reserve(boundary_.size());
    for (const LatticeCoord y : boundary_) {
        const std::uint32_t i = ambient.index_of(y);
        std::vector<bool> flags;
        flags.reserve(ambient.neighbors(i).size());
        for (const std::uint32_t k : ambient.neighbors(i)) {
            flags.push_back(members.contains(ambient.coord_of(k)));
        }
        in_s_.push_back(std::move(flags));
    }
}

bool ReflectingCheck::rotor_ok(std::size_t boundary_slot, int rotor) const {
    const std::vector<bool>& flags = in_s_[boundary_slot];
    const int d = static_cast<int>(flags.size());
    int remaining = 0;
    for (const bool f : flags) remaining += f ? 1 : 0;
    for (int j = 1; j <= d && remaining > 0; ++j) {
        if (!flags[static_cast<std::size_t>((rotor + j) % d)]) return false;
        --remaining;
    }
    return true;
}

bool ReflectingCheck::check(const RotorConfig& rotors) const {
    for (std::size_t slot = 0; slot < boundary_.size(); ++slot) {
        const auto it = rotors.find(boundary_[slot]);
        if (it == rotors.end()) {
            throw rotor_missing_error("no rotor at boundary vertex " +
                                      coord_str(boundary_[slot]));
        }
        if (it->second >= in_s_[slot].size()) {
            throw config_error("rotor index out of range at " + coord_str(boundary_[slot]));
        }
        if (!rotor_ok(slot, it->second)) return false;
    }
    return true;
}

bool ReflectingCheck::check(const RotorSampler& sampler) const {
    for (std::size_t slot = 0; slot < boundary_.size(); ++slot) {
        if (!rotor_ok(slot, sampler.initial_rotor(boundary_[slot]))) return false;
    }
    return true;
}

std::vector<std::vector<int>> ReflectingCheck::reflecting_indices() const {
    std::vector<std::vector<int>> out(boundary_.size());
    for (std::size_t slot = 0; slot < boundary_.size(); ++slot) {
        for (int r = 0; r < static_cast<int>(in_s_[slot].size()); ++r) {
            if (rotor_ok(slot, r)) out[slot].push_back(r);
        }
    }
    return out;
}

bool is_reflecting(const PrefractalGraph& ambient, std::span<const LatticeCoord> s,
                   const RotorConfig& rotors) {
    return ReflectingCheck(ambient, s).check(rotors);
}

bool is_reflecting(const PrefractalGraph& ambient, std::span<const LatticeCoord> s,
                   const RotorSampler& sampler) {
    return ReflectingCheck(ambient, s).check(sampler);
}

namespace {

template <typename Rotors>
std::optional<int> smallest_reflecting_impl(const PrefractalGraph& ambient,
                                            const Rotors& rotors, int n_max) {
    for (int n = 1; n <= n_max; ++n) {
        const std::vector<LatticeCoord> s = cut_set(n);
        if (ReflectingCheck(ambient, s).check(rotors)) return n;
    }
    return std::nullopt;
}

}  // namespace

std::optional<int> smallest_reflecting_level(const PrefractalGraph& ambient,
                                             const RotorSampler& sampler, int n_max) {
    return smallest_reflecting_impl(ambient, sampler, n_max);
}

std::optional<int> smallest_reflecting_level(const PrefractalGraph& ambient,
                                             const RotorConfig& rotors, int n_max) {
    return smallest_reflecting_impl(ambient, rotors, n_max);
}

RotorConfig reflecting_corner_rotors(const PrefractalGraph& ambient, int level) {
    const std::vector<LatticeCoord> s = cut_set(level);
    const ReflectingCheck check(ambient, s);
    const auto indices = check.reflecting_indices();
    RotorConfig out;
    for (std::size_t slot = 0; slot < check.boundary().size(); ++slot) {
        if (indices[slot].size() != 1) {
            throw std::logic_error("corner without a unique reflecting rotor state");
        }
        out.emplace(check.boundary()[slot], static_cast<std::uint8_t>(indices[slot][0]));
    }
    return out;
}

}  // namespace gasket
