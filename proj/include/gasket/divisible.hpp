#pragma once

#include <cstdint>
#include <vector>

#include "gasket/sandpile.hpp"

namespace gasket {

/// Finite-support law for real-valued initial masses.
class MassLaw {
  public:
    explicit MassLaw(std::vector<std::pair<double, double>> support);

    const std::vector<std::pair<double, double>>& support() const { return support_; }
    double mean() const { return mean_; }
    double variance() const { return variance_; }
    double sigma0() const;

    double sample(Rng& rng) const;

  private:
    std::vector<std::pair<double, double>> support_;
    std::vector<double> cumulative_;
    double mean_ = 0.0;
    double variance_ = 0.0;
};

/// Real-valued masses over a domain, indexed by domain-local vertex id.
using DivisibleConfig = std::vector<double>;

DivisibleConfig sample_iid_mass(const MassLaw& law, std::size_t count, std::uint64_t seed);

struct DivisibleResult {
    DivisibleConfig final_mass;
    std::vector<double> odometer;  // mass emitted per vertex
    double sink_mass = 0.0;
    bool converged = false;
    std::uint64_t sweeps = 0;
};

/// Divisible-sandpile relaxation: a vertex with mass > threshold + epsilon
/// keeps the threshold and splits the excess into four equal shares along
/// its ambient edges (shares on edges leaving the domain go to the sink).
/// Sweeps process the current frontier of unstable vertices; the run stops
/// when no vertex exceeds threshold + epsilon (converged) or at sweep_cap
/// (converged = false, partial state reported — the expected outcome in
/// explosion regimes).
DivisibleResult stabilize_divisible(const Domain& domain, DivisibleConfig sigma,
                                    double epsilon, std::uint64_t sweep_cap,
                                    double threshold = 1.0);

struct DivisibleTrial {
    double total_mass = 0.0;  // N_n
    double u_origin = 0.0;
    double sink_mass = 0.0;
    double final_total = 0.0;
    bool converged = false;
    std::uint64_t sweeps = 0;
};

DivisibleTrial run_divisible_trial(const Domain& domain, const MassLaw& law,
                                   std::uint64_t seed, double epsilon,
                                   std::uint64_t sweep_cap);

/// The divisible explosion experiment needs mean exactly 1 and positive
/// finite variance; anything else is rejected.
void validate_divisible_law(const MassLaw& law);

}  // namespace gasket
