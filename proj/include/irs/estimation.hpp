#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "irs/filters.hpp"
#include "irs/synthesis.hpp"

namespace irs {

class NonPositiveVariation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

enum class Method { irs, gqv };

[[nodiscard]] std::string to_string(Method m);
[[nodiscard]] Method parse_method(std::string_view name);

/// One Hurst estimate. For GQV entries there is no confidence interval:
/// ci_lo = ci_hi = h_hat and irs_value is empty.
struct EstimateEntry {
    std::optional<double> t;  // empty for a global estimate
    std::optional<double> irs_value;
    double h_hat = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::size_t count = 0;  // psi pairs (IRS) or squared increments (GQV) used
    bool saturated = false;
};

struct SkippedPoint {
    double t;
    std::string reason;
};

struct EstimationReport {
    Method method = Method::irs;
    Filter filter = binomial_filter(2);
    std::optional<double> gamma;
    double alpha = 0.05;
    std::vector<EstimateEntry> estimates;
    std::vector<SkippedPoint> skipped;
    std::vector<std::string> warnings;
};

/// Bounds every reported Hurst value.
inline constexpr double kHurstFloor = 0.001;
inline constexpr double kHurstCeil = 0.999;

/// H_hat = Lambda_a^{-1}(IRS) with a delta-method interval
///   H_hat -/+ z_{1-alpha/2} sqrt(Sigma^2_a(H_hat) / n) / |Lambda_a'(H_hat)|.
/// Requires at least 100 (L + 1) observations. An IRS outside the
/// attainable band is clamped and marked saturated.
[[nodiscard]] EstimationReport estimate_global(const SamplePath& path, const Filter& f, double alpha = 0.05);

/// 50 equispaced interior points (j + 1/2) / 50.
[[nodiscard]] std::vector<double> default_t_points(std::size_t count = 50);

/// Localized IRS estimate at each t*, with interval half-width
///   z sqrt(Sigma^2_a(H_hat) / v) / |Lambda_a'(H_hat)|
/// where v is the effective number of pairs in the window. Points whose
/// window is too small are listed in `skipped`. Warns when
/// gamma (1 + eta) <= 1.
[[nodiscard]] EstimationReport estimate_local(const SamplePath& path, const Filter& f, double gamma,
                                              std::span<const double> t_points, double alpha = 0.05);

/// Generalized quadratic variations baseline: H_hat = log2(V2 / V1) / 2
/// where V1 is the mean squared a-increment and V2 the same for a dilated
/// by 2. Global when gamma is empty, otherwise over each window.
[[nodiscard]] EstimationReport estimate_gqv(const SamplePath& path, const Filter& f,
                                            std::optional<double> gamma = std::nullopt,
                                            std::span<const double> t_points = {});

/// {method, filter, gamma, alpha, estimates: [{t, irs, h_hat, ci_lo, ci_hi,
/// count, saturated}], skipped, warnings}; `t` and `irs` are null when absent.
[[nodiscard]] std::string to_json(const EstimationReport& report, int indent = 2);

}  // namespace irs
