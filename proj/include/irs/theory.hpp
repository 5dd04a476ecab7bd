#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "irs/filters.hpp"

namespace irs {

class UnsupportedFilter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DegenerateDenominator : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Expected psi(X, Y) for a standard bivariate Gaussian pair with
/// correlation r:
///   arccos(-r) / pi + sqrt((1 + r) / (1 - r)) log(2 / (1 + r)) / pi.
/// Throws std::domain_error unless -1 < r < 1.
[[nodiscard]] double lambda0(double r);

/// Closed-form correlation of two consecutive increments of fBm for the
/// binomial filters of order 1 and 2 (either global sign).
[[nodiscard]] double rho_a_closed(const Filter& f, double hurst);

/// sum a a |1 + l2 - l1|^{2H} / sum a a |l2 - l1|^{2H}, any filter.
[[nodiscard]] double rho_a_general(const Filter& f, double hurst);

/// IRS limit for fBm: lambda0(rho_a_general(f, H)).
[[nodiscard]] double lambda_a(const Filter& f, double hurst);

/// C_a(j) = sum_{l1,l2} a_{l1} a_{l2} |j + l2 - l1|^{2H}.
[[nodiscard]] double c_a(const Filter& f, long j, double hurst);

/// cov(Delta_a B_H(t_0), Delta_a B_H(t_j)) at resolution n: -C_a(j) / (2 n^{2H}).
[[nodiscard]] double r_a_n(const Filter& f, long j, double hurst, std::size_t n);

/// C_a(j) / C_a(0), independent of n.
[[nodiscard]] double normalized_autocov(const Filter& f, long j, double hurst);

/// prod_{k=0}^{m-1} (x - k) / m!.
[[nodiscard]] double generalized_binomial(double x, int m);

/// Leading term of C_a(j) as j -> infinity:
///   (-1)^p C(2p, p) * binom(2H, 2p) * (sum_l a_l l^p)^2 * j^{2H-2p}.
/// The (-1)^p C(2p, p) factor is sum_i C(2p, i) (-1)^i M_i M_{2p-i} / M_p^2
/// with all lower moments M_i vanishing.
[[nodiscard]] double c_a_leading_term(const Filter& f, long j, double hurst);

/// True when sum_j r_a(j)^2 < infinity, i.e. H < p - 1/4. For p = 1 this is
/// the H < 3/4 restriction of the IRS central limit theorem.
[[nodiscard]] bool clt_condition_holds(const Filter& f, double hurst);

/// H -> Lambda_a(H) tabulated on [kMinHurst, kMaxHurst] with an exact
/// bisection inverse. Requires the tabulation to be strictly increasing.
class LinkFunction {
public:
    static constexpr double kMinHurst = 0.001;
    static constexpr double kMaxHurst = 0.999;
    static constexpr std::size_t kDefaultPoints = 2001;

    explicit LinkFunction(Filter f, std::size_t points = kDefaultPoints);

    struct Inverse {
        double hurst;
        bool saturated;  // y outside (Lambda_a(kMinHurst), Lambda_a(kMaxHurst)); hurst is clamped
    };

    [[nodiscard]] double operator()(double hurst) const { return lambda_a(filter_, hurst); }
    [[nodiscard]] Inverse inverse(double y) const;

    /// Central difference with step 1e-4 (one-sided near the ends).
    [[nodiscard]] double derivative(double hurst) const;

    [[nodiscard]] const Filter& filter() const noexcept { return filter_; }
    [[nodiscard]] const std::vector<double>& hurst_grid() const noexcept { return grid_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }

private:
    Filter filter_;
    std::vector<double> grid_;
    std::vector<double> values_;
};

/// Shared, lazily built link function for `f` (thread-safe).
[[nodiscard]] const LinkFunction& link_function(const Filter& f);

/// Bisection inverse of lambda_a through the shared link function.
[[nodiscard]] LinkFunction::Inverse lambda_a_inverse(const Filter& f, double y);

/// Replicate Monte Carlo estimate of the asymptotic IRS variance.
struct VarianceEstimate {
    double sigma2 = 0.0;     // n * sample variance of IRS over replicates
    double std_error = 0.0;  // jackknife standard error of sigma2
    double hurst = 0.0;
    std::size_t n = 0;
    std::size_t replicates = 0;
    bool clt_condition_violated = false;
    double mean_irs = 0.0;
};

/// Simulates `replicates` fBm paths (seed derive_seed(seed, r)) and returns
/// n * var(IRS). Requires replicates >= 100. Flags, but still computes,
/// when the CLT condition fails.
[[nodiscard]] VarianceEstimate sigma2_mc(const Filter& f, double hurst, std::size_t n, std::size_t replicates,
                                         std::uint64_t seed, std::size_t workers = 0);

}  // namespace irs
