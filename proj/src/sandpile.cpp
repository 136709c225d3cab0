#include "gasket/sandpile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace gasket {

HeightLaw::HeightLaw(std::vector<std::pair<std::int64_t, double>> support)
    : support_(std::move(support)) {
    if (support_.empty()) throw config_error("height law needs a non-empty support");
    double sum = 0.0;
    for (const auto& [value, p] : support_) {
        if (value < 0) throw config_error("height law values must be >= 0");
        if (!(p > 0.0)) throw config_error("height law probabilities must be > 0");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw config_error("height law probabilities must sum to 1");
    }
    std::sort(support_.begin(), support_.end());
    for (std::size_t i = 1; i < support_.size(); ++i) {
        if (support_[i].first == support_[i - 1].first) {
            throw config_error("height law support values must be distinct");
        }
    }
    cumulative_.reserve(support_.size());
    double acc = 0.0;
    for (const auto& [value, p] : support_) {
        acc += p;
        cumulative_.push_back(acc);
        mean_ += static_cast<double>(value) * p;
    }
    for (const auto& [value, p] : support_) {
        const double d = static_cast<double>(value) - mean_;
        variance_ += d * d * p;
    }
}

double HeightLaw::sigma0() const { return std::sqrt(variance_); }

std::int64_t HeightLaw::sample(Rng& rng) const {
    const double u = rng.next_double();
    for (std::size_t i = 0; i + 1 < cumulative_.size(); ++i) {
        if (u < cumulative_[i]) return support_[i].first;
    }
    return support_.back().first;
}

Sandpile sample_iid(const HeightLaw& law, std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    Sandpile heights(count);
    for (auto& h : heights) h = law.sample(rng);
    return heights;
}

Domain Domain::prefractal(const PrefractalGraph& ambient, int level, Half half) {
    const PrefractalGraph shape = PrefractalGraph::build(level, half);
    return from_members(ambient, shape.vertices());
}

Domain Domain::from_members(const PrefractalGraph& ambient,
                            std::span<const LatticeCoord> members) {
    Domain d;
    d.ambient_ = &ambient;
    d.members_.reserve(members.size());
    for (const LatticeCoord v : members) {
        const std::uint32_t i = ambient.index_of(v);
        if (ambient.degree(i) != 4) {
            throw config_error("domain vertex (" + std::to_string(v.a) + "," +
                               std::to_string(v.b) +
                               ") lacks its full ambient neighbourhood; embed the domain "
                               "in a larger graph");
        }
        d.members_.push_back(i);
    }
    std::sort(d.members_.begin(), d.members_.end());
    d.local_index_.assign(ambient.vertex_count(), -1);
    for (std::uint32_t local = 0; local < d.members_.size(); ++local) {
        if (d.local_index_[d.members_[local]] != -1) {
            throw config_error("duplicate domain member");
        }
        d.local_index_[d.members_[local]] = static_cast<std::int32_t>(local);
    }
    d.nbr_offsets_.reserve(d.members_.size() + 1);
    d.nbr_offsets_.push_back(0);
    for (const std::uint32_t ambient_index : d.members_) {
        for (const std::uint32_t k : ambient.neighbors(ambient_index)) {
            if (d.local_index_[k] != -1) {
                d.nbr_.push_back(static_cast<std::uint32_t>(d.local_index_[k]));
            }
        }
        d.nbr_offsets_.push_back(static_cast<std::uint32_t>(d.nbr_.size()));
    }
    return d;
}

std::optional<std::uint32_t> Domain::local_of(LatticeCoord v) const {
    if (!ambient_->contains(v)) return std::nullopt;
    const std::int32_t local = local_index_[ambient_->index_of(v)];
    if (local < 0) return std::nullopt;
    return static_cast<std::uint32_t>(local);
}

namespace {

// Worklist with a policy-controlled pop. Each vertex appears at most once.
class Worklist {
  public:
    Worklist(TopplePolicy policy, std::size_t capacity, std::uint64_t seed)
        : policy_(policy), rng_(seed) {
        queued_.assign(capacity, 0);
        items_.reserve(64);
    }

    void push(std::uint32_t v) {
        if (queued_[v]) return;
        queued_[v] = 1;
        items_.push_back(v);
    }

    bool empty() const { return head_ == items_.size(); }

    std::uint32_t pop() {
        std::uint32_t v = 0;
        switch (policy_) {
            case TopplePolicy::Fifo:
                v = items_[head_++];
                if (head_ > 4096 && head_ * 2 > items_.size()) {
                    items_.erase(items_.begin(),
                                 items_.begin() + static_cast<std::ptrdiff_t>(head_));
                    head_ = 0;
                }
                break;
            case TopplePolicy::Lifo:
                v = items_.back();
                items_.pop_back();
                break;
            case TopplePolicy::RandomOrder: {
                const std::size_t live = items_.size() - head_;
                const std::size_t pick = head_ + rng_.next_below(live);
                v = items_[pick];
                items_[pick] = items_.back();
                items_.pop_back();
                break;
            }
        }
        if (head_ > 0 && head_ == items_.size()) {
            items_.clear();
            head_ = 0;
        }
        queued_[v] = 0;
        return v;
    }

  private:
    TopplePolicy policy_;
    Rng rng_;
    std::vector<std::uint8_t> queued_;
    std::vector<std::uint32_t> items_;
    std::size_t head_ = 0;
};

}  // namespace

ToppleResult stabilize(const Domain& domain, Sandpile sigma, TopplePolicy policy,
                       std::uint64_t topple_cap, std::uint64_t policy_seed) {
    const std::size_t n = domain.size();
    if (sigma.size() != n) throw config_error("sandpile size does not match the domain");
    for (const std::int64_t h : sigma) {
        if (h < 0) throw config_error("sandpile heights must be >= 0");
    }
    ToppleResult result;
    result.topples.assign(n, 0);
    Worklist work(policy, n, policy_seed);
    for (std::uint32_t v = 0; v < n; ++v) {
        if (sigma[v] >= 4) work.push(v);
    }
    std::uint64_t performed = 0;
    while (!work.empty()) {
        const std::uint32_t v = work.pop();
        if (sigma[v] < 4) continue;
        const std::int64_t k = sigma[v] / 4;
        performed += static_cast<std::uint64_t>(k);
        if (performed > topple_cap) {
            throw topple_cap_error("topple cap exceeded (" + std::to_string(topple_cap) + ")");
        }
        sigma[v] -= 4 * k;
        result.topples[v] += k;
        for (const std::uint32_t w : domain.in_domain_neighbors(v)) {
            sigma[w] += k;
            if (sigma[w] >= 4) work.push(w);
        }
        result.sink_mass += k * domain.sink_edges(v);
    }
    result.final = std::move(sigma);
    return result;
}

bool laplacian_check(const Domain& domain, const Sandpile& sigma, const ToppleResult& result,
                     LatticeCoord* first_violation) {
    for (std::uint32_t v = 0; v < domain.size(); ++v) {
        std::int64_t rhs = sigma[v] - 4 * result.topples[v];
        for (const std::uint32_t w : domain.in_domain_neighbors(v)) {
            rhs += result.topples[w];
        }
        if (result.final[v] != rhs) {
            if (first_violation != nullptr) *first_violation = domain.coord(v);
            return false;
        }
    }
    return true;
}

NestedRunResult infinite_volume_run(const PrefractalGraph& ambient,
                                    std::vector<std::int64_t> heights,
                                    std::span<const Domain> nested,
                                    std::uint64_t topple_cap) {
    if (heights.size() != ambient.vertex_count()) {
        throw config_error("heights must cover the ambient graph");
    }
    if (nested.empty()) throw config_error("need at least one domain");
    const std::uint32_t origin = ambient.index_of({0, 0});

    NestedRunResult out;
    out.topples.assign(ambient.vertex_count(), 0);
    for (std::size_t stage = 0; stage < nested.size(); ++stage) {
        const Domain& d = nested[stage];
        if (&d.ambient() != &ambient) throw config_error("domain/ambient mismatch");
        if (stage > 0) {
            // nesting check: previous members must all be members here
            const Domain& prev = nested[stage - 1];
            for (std::uint32_t local = 0; local < prev.size(); ++local) {
                if (d.local_of_ambient(prev.ambient_index(local)) < 0) {
                    throw config_error("domain family is not nested");
                }
            }
        }
        Sandpile sigma(d.size());
        for (std::uint32_t local = 0; local < d.size(); ++local) {
            sigma[local] = heights[d.ambient_index(local)];
        }
        const ToppleResult r = stabilize(d, std::move(sigma), TopplePolicy::Fifo, topple_cap);
        for (std::uint32_t local = 0; local < d.size(); ++local) {
            heights[d.ambient_index(local)] = r.final[local];
            out.topples[d.ambient_index(local)] += r.topples[local];
        }
        out.sink_mass += r.sink_mass;
        out.origin_odometer.push_back(4 * out.topples[origin]);
    }
    out.heights = std::move(heights);
    return out;
}

ExplosionTrial run_explosion_trial(const Domain& domain, const HeightLaw& law,
                                   std::uint64_t seed, std::uint64_t topple_cap) {
    const Sandpile sigma = sample_iid(law, domain.size(), seed);
    ExplosionTrial trial;
    trial.total_chips = std::accumulate(sigma.begin(), sigma.end(), std::int64_t{0});
    const auto origin = domain.local_of({0, 0});
    if (!origin) throw config_error("explosion domain must contain the origin");
    const ToppleResult r = stabilize(domain, sigma, TopplePolicy::Fifo, topple_cap);
    trial.t_origin = r.topples[*origin];
    trial.u_origin = r.odometer(*origin);
    trial.sink_mass = r.sink_mass;
    trial.final_total = std::accumulate(r.final.begin(), r.final.end(), std::int64_t{0});
    return trial;
}

double explosion_delta(const HeightLaw& law) {
    const double delta = law.mean() - 3.0;
    if (delta < -1e-9) {
        throw config_error("explosion experiment requires E[height] >= 3");
    }
    return std::max(delta, 0.0);
}

}  // namespace gasket
