#include "gasket/divisible.hpp"

#include <algorithm>
#include <cmath>

namespace gasket {

MassLaw::MassLaw(std::vector<std::pair<double, double>> support)
    : support_(std::move(support)) {
    if (support_.empty()) throw config_error("mass law needs a non-empty support");
    double sum = 0.0;
    for (const auto& [value, p] : support_) {
        if (!(value >= 0.0) || !std::isfinite(value)) {
            throw config_error("mass law values must be finite and >= 0");
        }
        if (!(p > 0.0)) throw config_error("mass law probabilities must be > 0");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw config_error("mass law probabilities must sum to 1");
    }
    std::sort(support_.begin(), support_.end());
    cumulative_.reserve(support_.size());
    double acc = 0.0;
    for (const auto& [value, p] : support_) {
        acc += p;
        cumulative_.push_back(acc);
        mean_ += value * p;
    }
    for (const auto& [value, p] : support_) {
        const double d = value - mean_;
        variance_ += d * d * p;
    }
}

double MassLaw::sigma0() const { return std::sqrt(variance_); }

double MassLaw::sample(Rng& rng) const {
    const double u = rng.next_double();
    for (std::size_t i = 0; i + 1 < cumulative_.size(); ++i) {
        if (u < cumulative_[i]) return support_[i].first;
    }
    return support_.back().first;
}

DivisibleConfig sample_iid_mass(const MassLaw& law, std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    DivisibleConfig masses(count);
    for (auto& m : masses) m = law.sample(rng);
    return masses;
}

DivisibleResult stabilize_divisible(const Domain& domain, DivisibleConfig sigma,
                                    double epsilon, std::uint64_t sweep_cap,
                                    double threshold) {
    const std::size_t n = domain.size();
    if (sigma.size() != n) throw config_error("mass config size does not match the domain");
    if (!(epsilon > 0.0)) throw config_error("epsilon must be > 0");
    if (!(threshold > 0.0)) throw config_error("threshold must be > 0");
    for (const double m : sigma) {
        if (!(m >= 0.0) || !std::isfinite(m)) {
            throw config_error("masses must be finite and >= 0");
        }
    }

    DivisibleResult result;
    result.odometer.assign(n, 0.0);
    const double unstable_above = threshold + epsilon;

    std::vector<std::uint32_t> frontier;
    std::vector<std::uint32_t> next;
    std::vector<std::uint8_t> in_next(n, 0);
    for (std::uint32_t v = 0; v < n; ++v) {
        if (sigma[v] > unstable_above) frontier.push_back(v);
    }

    while (!frontier.empty() && result.sweeps < sweep_cap) {
        ++result.sweeps;
        next.clear();
        for (const std::uint32_t v : frontier) {
            // mass may have grown since it was queued; emit the full excess
            const double excess = sigma[v] - threshold;
            if (excess <= epsilon) continue;
            sigma[v] = threshold;
            result.odometer[v] += excess;
            const double share = excess * 0.25;
            for (const std::uint32_t w : domain.in_domain_neighbors(v)) {
                sigma[w] += share;
                if (sigma[w] > unstable_above && !in_next[w]) {
                    in_next[w] = 1;
                    next.push_back(w);
                }
            }
            result.sink_mass += share * domain.sink_edges(v);
        }
        for (const std::uint32_t w : next) in_next[w] = 0;
        frontier.swap(next);
    }

    result.converged = frontier.empty();
    result.final_mass = std::move(sigma);
    return result;
}

DivisibleTrial run_divisible_trial(const Domain& domain, const MassLaw& law,
                                   std::uint64_t seed, double epsilon,
                                   std::uint64_t sweep_cap) {
    const DivisibleConfig sigma = sample_iid_mass(law, domain.size(), seed);
    DivisibleTrial trial;
    for (const double m : sigma) trial.total_mass += m;
    const auto origin = domain.local_of({0, 0});
    if (!origin) throw config_error("divisible explosion domain must contain the origin");
    const DivisibleResult r = stabilize_divisible(domain, sigma, epsilon, sweep_cap);
    trial.u_origin = r.odometer[*origin];
    trial.sink_mass = r.sink_mass;
    for (const double m : r.final_mass) trial.final_total += m;
    trial.converged = r.converged;
    trial.sweeps = r.sweeps;
    return trial;
}

void validate_divisible_law(const MassLaw& law) {
    if (std::abs(law.mean() - 1.0) > 1e-9) {
        throw config_error("divisible explosion experiment requires E[mass] = 1");
    }
    if (!(law.variance() > 0.0)) {
        throw config_error("divisible explosion experiment requires Var[mass] > 0");
    }
}

}  // namespace gasket
