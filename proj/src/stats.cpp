#include "gasket/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/beta.hpp>

namespace gasket {

SampleStats sample_stats(std::span<const double> values) {
    SampleStats s;
    s.count = values.size();
    if (s.count == 0) return s;
    double sum = 0.0;
    for (const double v : values) sum += v;
    s.mean = sum / static_cast<double>(s.count);
    if (s.count > 1) {
        double ss = 0.0;
        for (const double v : values) {
            const double d = v - s.mean;
            ss += d * d;
        }
        s.variance = ss / static_cast<double>(s.count - 1);
        s.stderr_of_mean = std::sqrt(s.variance / static_cast<double>(s.count));
    }
    return s;
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of empty sample");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    double hi = values[mid];
    if (values.size() % 2 == 1) return hi;
    std::nth_element(values.begin(), values.begin() + mid - 1, values.begin() + mid);
    return 0.5 * (values[mid - 1] + hi);
}

BinomialCi clopper_pearson(std::uint64_t successes, std::uint64_t trials,
                           double confidence) {
    if (trials == 0 || successes > trials || confidence <= 0.0 || confidence >= 1.0) {
        throw std::invalid_argument("clopper_pearson: bad arguments");
    }
    const double alpha = 1.0 - confidence;
    const auto k = static_cast<double>(successes);
    const auto n = static_cast<double>(trials);
    BinomialCi ci;
    if (successes == 0) {
        ci.low = 0.0;
    } else {
        boost::math::beta_distribution<double> lo(k, n - k + 1.0);
        ci.low = boost::math::quantile(lo, alpha / 2.0);
    }
    if (successes == trials) {
        ci.high = 1.0;
    } else {
        boost::math::beta_distribution<double> hi(k + 1.0, n - k);
        ci.high = boost::math::quantile(hi, 1.0 - alpha / 2.0);
    }
    return ci;
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double ks_distance_to_normal(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("ks distance of empty sample");
    std::sort(values.begin(), values.end());
    const auto n = static_cast<double>(values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double cdf = normal_cdf(values[i]);
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - cdf));
        d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
    }
    return d;
}

}  // namespace gasket
