#include "gou/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gou {

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0) throw std::invalid_argument("wilson_interval: no trials");
    const double n = static_cast<double>(trials);
    if (successes == 0) return {0.0, std::min(1.0, 3.0 / n)};
    const double p = static_cast<double>(successes) / n;
    const double zq = 1.959963984540054;  // 97.5% normal quantile
    const double z2 = zq * zq;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half =
        zq * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

Ks2Result ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na -
                                  static_cast<double>(j) / nb));
    }
    const double lam = std::sqrt(na * nb / (na + nb)) * d;
    // Kolmogorov asymptotic tail: Q(lam) = 2 sum (-1)^{k-1} exp(-2 k^2 lam^2).
    // The series only converges usefully for lam away from 0; below that the
    // tail probability is 1 to double precision anyway.
    if (lam < 0.3) return {d, 1.0};
    double p = 0.0;
    bool converged = false;
    for (int k = 1; k <= 200; ++k) {
        const double term = 2.0 * ((k % 2) ? 1.0 : -1.0) *
                            std::exp(-2.0 * k * k * lam * lam);
        p += term;
        if (std::fabs(term) < 1e-12) {
            converged = true;
            break;
        }
    }
    if (!converged) return {d, 1.0};
    return {d, std::min(1.0, std::max(0.0, p))};
}

WlsFit weighted_least_squares(const std::vector<double>& x,
                              const std::vector<double>& y,
                              const std::vector<double>& weight) {
    if (x.size() != y.size() || x.size() != weight.size() || x.size() < 2)
        throw std::invalid_argument("weighted_least_squares: bad inputs");
    double sw = 0.0, swx = 0.0, swy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += weight[i];
        swx += weight[i] * x[i];
        swy += weight[i] * y[i];
    }
    const double xbar = swx / sw, ybar = swy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += weight[i] * (x[i] - xbar) * (x[i] - xbar);
        sxy += weight[i] * (x[i] - xbar) * (y[i] - ybar);
    }
    if (!(sxx > 0.0))
        throw std::invalid_argument("weighted_least_squares: degenerate x");
    WlsFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;
    fit.slope_se = std::sqrt(1.0 / sxx);
    return fit;
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median: empty");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return (n % 2) ? values[n / 2]
                   : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double mean(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("mean: empty");
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

double sample_variance(const std::vector<double>& values) {
    if (values.size() < 2) throw std::invalid_argument("sample_variance: need 2");
    const double m = mean(values);
    double s = 0.0;
    for (double v : values) s += (v - m) * (v - m);
    return s / static_cast<double>(values.size() - 1);
}

} // namespace gou
