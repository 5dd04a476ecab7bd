#include "irs/theory.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "irs/irs_core.hpp"
#include "irs/parallel.hpp"
#include "irs/rng.hpp"
#include "irs/stats.hpp"
#include "irs/synthesis.hpp"

namespace irs {

namespace {

// sum_{l1,l2} a_{l1} a_{l2} |shift + l2 - l1|^{2H}, with 0^{2H} = 0.
double shifted_double_sum(const Filter& f, long shift, double hurst) {
    const auto a = f.coeffs();
    const double two_h = 2.0 * hurst;
    long double sum = 0.0L;
    for (std::size_t l1 = 0; l1 < a.size(); ++l1)
        for (std::size_t l2 = 0; l2 < a.size(); ++l2) {
            const long d = shift + static_cast<long>(l2) - static_cast<long>(l1);
            if (d == 0) continue;
            sum += static_cast<long double>(a[l1]) * a[l2] * std::pow(static_cast<long double>(std::labs(d)), two_h);
        }
    return static_cast<double>(sum);
}

void check_hurst(double hurst) {
    if (!(hurst > 0.0 && hurst < 1.0)) throw std::domain_error("Hurst index must lie in (0, 1)");
}

bool matches(const Filter& f, std::initializer_list<double> taps) {
    if (f.coeffs().size() != taps.size()) return false;
    const bool same = std::equal(taps.begin(), taps.end(), f.coeffs().begin());
    const bool negated = std::equal(taps.begin(), taps.end(), f.coeffs().begin(),
                                    [](double t, double c) { return -t == c; });
    return same || negated;
}

}  // namespace

double lambda0(double r) {
    if (!(r > -1.0 && r < 1.0)) throw std::domain_error("lambda0: correlation must lie in (-1, 1)");
    using std::numbers::pi;
    return std::acos(-r) / pi + std::sqrt((1.0 + r) / (1.0 - r)) * std::log(2.0 / (1.0 + r)) / pi;
}

double rho_a_closed(const Filter& f, double hurst) {
    check_hurst(hurst);
    if (matches(f, {1.0, -1.0})) return std::pow(2.0, 2.0 * hurst - 1.0) - 1.0;
    if (matches(f, {1.0, -2.0, 1.0}))
        return (-std::pow(3.0, 2.0 * hurst) + std::pow(2.0, 2.0 * hurst + 2.0) - 7.0) /
               (8.0 - std::pow(2.0, 2.0 * hurst + 1.0));
    throw UnsupportedFilter("closed-form rho_a exists only for (1,-1) and (1,-2,1); use rho_a_general");
}

double rho_a_general(const Filter& f, double hurst) {
    check_hurst(hurst);
    const double denom = shifted_double_sum(f, 0, hurst);
    if (denom == 0.0) throw DegenerateDenominator("rho_a: sum a a |l2 - l1|^{2H} vanishes");
    return shifted_double_sum(f, 1, hurst) / denom;
}

double lambda_a(const Filter& f, double hurst) { return lambda0(rho_a_general(f, hurst)); }

double c_a(const Filter& f, long j, double hurst) {
    check_hurst(hurst);
    return shifted_double_sum(f, j, hurst);
}

double r_a_n(const Filter& f, long j, double hurst, std::size_t n) {
    return -c_a(f, j, hurst) / (2.0 * std::pow(static_cast<double>(n), 2.0 * hurst));
}

double normalized_autocov(const Filter& f, long j, double hurst) { return c_a(f, j, hurst) / c_a(f, 0, hurst); }

double generalized_binomial(double x, int m) {
    if (m < 0) throw std::invalid_argument("generalized_binomial: m must be >= 0");
    double value = 1.0;
    for (int k = 0; k < m; ++k) value *= (x - k) / static_cast<double>(k + 1);
    return value;
}

double c_a_leading_term(const Filter& f, long j, double hurst) {
    check_hurst(hurst);
    const int p = f.order();
    const double sign = (p % 2 == 0) ? 1.0 : -1.0;
    const double central = generalized_binomial(2.0 * p, p);  // C(2p, p)
    const double mp = f.moment(p);
    return sign * central * generalized_binomial(2.0 * hurst, 2 * p) * mp * mp *
           std::pow(static_cast<double>(j), 2.0 * hurst - 2.0 * p);
}

bool clt_condition_holds(const Filter& f, double hurst) { return hurst < static_cast<double>(f.order()) - 0.25; }

LinkFunction::LinkFunction(Filter f, std::size_t points) : filter_(std::move(f)) {
    if (points < 2) throw std::invalid_argument("LinkFunction: need at least two grid points");
    grid_.resize(points);
    values_.resize(points);
    for (std::size_t i = 0; i < points; ++i) {
        grid_[i] = kMinHurst + (kMaxHurst - kMinHurst) * static_cast<double>(i) / static_cast<double>(points - 1);
        values_[i] = lambda_a(filter_, grid_[i]);
        if (i > 0 && !(values_[i] > values_[i - 1]))
            throw std::domain_error("Lambda_a is not strictly increasing for filter " + filter_.spec());
    }
}

LinkFunction::Inverse LinkFunction::inverse(double y) const {
    if (!(y > values_.front())) return {kMinHurst, true};
    if (!(y < values_.back())) return {kMaxHurst, true};
    const auto it = std::upper_bound(values_.begin(), values_.end(), y);
    const auto i = static_cast<std::size_t>(it - values_.begin());
    double lo = grid_[i - 1], hi = grid_[i];
    // Bracket is already < 5e-4 wide; 60 halvings reach double resolution.
    for (int iter = 0; iter < 60 && hi - lo > 1e-15; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double v = (*this)(mid);
        if (v == y) return {mid, false};
        (v < y ? lo : hi) = mid;
    }
    return {0.5 * (lo + hi), false};
}

double LinkFunction::derivative(double hurst) const {
    constexpr double step = 1e-4;
    const double lo = std::max(hurst - step, 0.5 * kMinHurst);
    const double hi = std::min(hurst + step, 0.5 * (1.0 + kMaxHurst));
    return ((*this)(hi) - (*this)(lo)) / (hi - lo);
}

const LinkFunction& link_function(const Filter& f) {
    static std::mutex mutex;
    static std::map<std::vector<double>, std::unique_ptr<LinkFunction>> cache;
    std::vector<double> key(f.coeffs().begin(), f.coeffs().end());
    std::lock_guard lock(mutex);
    auto& slot = cache[key];
    if (!slot) slot = std::make_unique<LinkFunction>(f);
    return *slot;
}

LinkFunction::Inverse lambda_a_inverse(const Filter& f, double y) { return link_function(f).inverse(y); }

VarianceEstimate sigma2_mc(const Filter& f, double hurst, std::size_t n, std::size_t replicates,
                           std::uint64_t seed, std::size_t workers) {
    if (replicates < 100) throw std::invalid_argument("sigma2_mc: need at least 100 replicates");
    const FbmSynthesizer synth(hurst, n);
    std::vector<double> values(replicates);
    parallel_for(replicates, workers, [&](std::size_t r) {
        values[r] = irs(increments(synth.sample(derive_seed(seed, r)), f));
    });
    VarianceEstimate est;
    const auto nd = static_cast<double>(n);
    est.sigma2 = nd * stats::variance(values);
    est.std_error = nd * stats::jackknife_variance_se(values);
    est.hurst = hurst;
    est.n = n;
    est.replicates = replicates;
    est.clt_condition_violated = !clt_condition_holds(f, hurst);
    est.mean_irs = stats::mean(values);
    return est;
}

}  // namespace irs
