#ifndef GOU_STATS_HPP
#define GOU_STATS_HPP

#include <cstdint>
#include <vector>

namespace gou {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Wilson 95% score interval for a binomial proportion. Cells with zero
/// successes report the rule-of-three bound [0, 3/n] instead.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials);

struct Ks2Result {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
Ks2Result ks_two_sample(std::vector<double> a, std::vector<double> b);

struct WlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
};

/// Weighted least squares of y on x with known per-point variances
/// (weights = 1/variance).
WlsFit weighted_least_squares(const std::vector<double>& x,
                              const std::vector<double>& y,
                              const std::vector<double>& weight);

double median(std::vector<double> values);
double mean(const std::vector<double>& values);
double sample_variance(const std::vector<double>& values);

} // namespace gou

#endif
