#include "irs/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace irs::stats {

double mean(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("mean of empty sample");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size() - 1);
}

double covariance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("covariance: length mismatch");
    if (x.size() < 2) return 0.0;
    const double mx = mean(x), my = mean(y);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
    return s / static_cast<double>(x.size() - 1);
}

double jackknife_variance_se(std::span<const double> x) {
    const std::size_t m = x.size();
    if (m < 3) return 0.0;
    // Centre first so the leave-one-out sums do not cancel catastrophically.
    const double centre = mean(x);
    double s1 = 0.0, s2 = 0.0;
    for (double v : x) {
        s1 += v - centre;
        s2 += (v - centre) * (v - centre);
    }
    const auto md = static_cast<double>(m);
    std::vector<double> loo(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double d = x[i] - centre;
        const double t1 = s1 - d, t2 = s2 - d * d;
        loo[i] = (t2 - t1 * t1 / (md - 1.0)) / (md - 2.0);
    }
    const double loo_mean = mean(loo);
    double ss = 0.0;
    for (double v : loo) ss += (v - loo_mean) * (v - loo_mean);
    return std::sqrt((md - 1.0) / md * ss);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p must lie in (0, 1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double kolmogorov_survival(double x) {
    if (x <= 0.0) return 1.0;
    if (x < 0.3) {
        // Small-x form: P(K <= x) = sqrt(2 pi)/x sum exp(-(2k-1)^2 pi^2 / (8 x^2)).
        const double pi2 = std::numbers::pi * std::numbers::pi;
        double cdf = 0.0;
        for (int k = 1; k <= 20; ++k) {
            const double odd = 2.0 * k - 1.0;
            cdf += std::exp(-odd * odd * pi2 / (8.0 * x * x));
        }
        return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / x * cdf, 0.0, 1.0);
    }
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += (k % 2 ? 1.0 : -1.0) * term;
        if (term < 1e-17) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test_normal(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("ks_test_normal: empty sample");
    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = normal_cdf(sorted[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    const double root = std::sqrt(n);
    return {d, kolmogorov_survival((root + 0.12 + 0.11 / root) * d)};
}

KsResult ks_test_two_sample(std::span<const double> x, std::span<const double> y) {
    if (x.empty() || y.empty()) throw std::invalid_argument("ks_test_two_sample: empty sample");
    std::vector<double> a(x.begin(), x.end()), b(y.begin(), y.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const auto na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double en = std::sqrt(na * nb / (na + nb));
    return {d, kolmogorov_survival((en + 0.12 + 0.11 / en) * d)};
}

Histogram histogram(std::span<const double> x, std::size_t bins) {
    if (bins == 0) throw std::invalid_argument("histogram: need at least one bin");
    Histogram h;
    h.counts.assign(bins, 0);
    if (x.empty()) return h;
    const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
    h.lo = *mn;
    h.hi = *mx;
    const double width = (h.hi - h.lo) / static_cast<double>(bins);
    for (double v : x) {
        std::size_t b = width > 0.0 ? static_cast<std::size_t>((v - h.lo) / width) : 0;
        h.counts[std::min(b, bins - 1)] += 1;
    }
    return h;
}

double ols_slope(std::span<const double> x, std::span<const double> y) {
    const double vx = variance(x);
    if (vx == 0.0) throw std::invalid_argument("ols_slope: x has zero variance");
    return covariance(x, y) / vx;
}

}  // namespace irs::stats
