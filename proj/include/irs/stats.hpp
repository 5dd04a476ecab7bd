#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace irs::stats {

[[nodiscard]] double mean(std::span<const double> x);

/// Unbiased sample variance (divisor size - 1); 0 for fewer than two values.
[[nodiscard]] double variance(std::span<const double> x);

/// Sample covariance of two equally long sequences (divisor size - 1).
[[nodiscard]] double covariance(std::span<const double> x, std::span<const double> y);

/// Jackknife standard error of the unbiased sample variance.
[[nodiscard]] double jackknife_variance_se(std::span<const double> x);

[[nodiscard]] double normal_cdf(double x);
[[nodiscard]] double normal_quantile(double p);

/// P(K > x) for the Kolmogorov distribution, K = lim sqrt(n) D_n.
[[nodiscard]] double kolmogorov_survival(double x);

struct KsResult {
    double statistic;  // sup |F_n - F|
    double p_value;
};

/// One-sample Kolmogorov-Smirnov test against N(0, 1). The p-value uses the
/// asymptotic distribution with Stephens' small-sample correction.
[[nodiscard]] KsResult ks_test_normal(std::span<const double> x);

/// Two-sample Kolmogorov-Smirnov test.
[[nodiscard]] KsResult ks_test_two_sample(std::span<const double> x, std::span<const double> y);

struct Histogram {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<std::size_t> counts;
};

/// Equal-width bins over [min(x), max(x)]; a constant sample puts
/// everything in the first bin.
[[nodiscard]] Histogram histogram(std::span<const double> x, std::size_t bins);

/// Least-squares slope of y on x.
[[nodiscard]] double ols_slope(std::span<const double> x, std::span<const double> y);

}  // namespace irs::stats
