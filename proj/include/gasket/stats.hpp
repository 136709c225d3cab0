#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace gasket {

struct SampleStats {
    std::uint64_t count = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased (n-1) when count > 1
    double stderr_of_mean = 0.0;
};

SampleStats sample_stats(std::span<const double> values);

double median(std::vector<double> values);

struct BinomialCi {
    double low = 0.0;
    double high = 1.0;
};

/// Exact (Clopper-Pearson) two-sided binomial interval for k successes in n
/// trials at the given confidence.
BinomialCi clopper_pearson(std::uint64_t successes, std::uint64_t trials,
                           double confidence);

double normal_cdf(double x);

/// Kolmogorov-Smirnov distance between the empirical distribution of the
/// sample and the standard normal.
double ks_distance_to_normal(std::vector<double> values);

}  // namespace gasket
