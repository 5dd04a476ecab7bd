#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "irs/estimation.hpp"
#include "irs/filters.hpp"
#include "irs/hurst_function.hpp"
#include "irs/stats.hpp"

namespace irs {

struct FbmScenario {
    double hurst;
};
struct MbmScenario {
    HurstFunction hurst;
};

struct ExperimentConfig {
    std::variant<FbmScenario, MbmScenario> scenario = FbmScenario{0.5};
    std::size_t n = 10000;
    std::size_t replicates = 200;
    Filter filter = binomial_filter(2);
    double gamma = 0.3;          // mbm only
    std::size_t t_points = 50;   // mbm only
    std::uint64_t master_seed = 1;
    std::vector<Method> methods = {Method::irs};
    double alpha = 0.05;
    std::size_t h_grid_size = 20;
    std::size_t histogram_bins = 30;
    std::size_t workers = 0;  // 0 = one per core; results do not depend on it
};

/// Throws std::invalid_argument if replicates < 1, n < 128 or gamma is
/// outside (0, 1).
void validate(const ExperimentConfig& cfg);

struct ReplicateFailure {
    std::size_t replicate;
    std::string message;
};

struct MethodSummary {
    Method method = Method::irs;
    std::size_t succeeded = 0;
    std::vector<ReplicateFailure> failures;

    // fBm scenario
    std::vector<double> estimates;     // H_hat per successful replicate, replicate order
    double mean_h = 0.0;
    double mse = 0.0;                  // mean of (H_hat - H)^2
    double variance_h = 0.0;
    std::optional<double> scaled_irs_variance;  // var of sqrt(n) (IRS - Lambda_a(H)), IRS only
    std::optional<double> ci_coverage;          // IRS only
    stats::Histogram histogram;

    // mBm scenario
    std::vector<double> t_points;
    std::vector<double> true_curve;
    std::vector<double> mean_curve;
    std::vector<std::vector<double>> curves;  // per successful replicate, NaN where a point was skipped
    std::vector<double> ise;                  // per successful replicate
    double mise = 0.0;

    bool degenerate_variance = false;  // fewer than two successful replicates
};

struct CltSummary {
    double sigma2_reference = 0.0;  // tabulated Sigma^2_a(H)
    double ks_statistic = 0.0;
    double p_value = 0.0;
    double variance_ratio = 0.0;    // var(sqrt(n)(IRS - Lambda_a)) / sigma2_reference
    double mean_standardized = 0.0;
    bool condition_violated = false;  // H >= p - 1/4; normality is not expected
};

struct MonteCarloReport {
    std::string scenario;  // "fbm(H=0.5)" or the Hurst function name
    std::optional<double> hurst;
    std::optional<std::string> hurst_function;  // JSON of the Hurst function
    std::size_t n = 0;
    std::size_t replicates = 0;
    std::string filter;
    std::optional<double> gamma;
    std::uint64_t master_seed = 0;
    std::vector<std::uint64_t> replicate_seeds;
    std::vector<MethodSummary> methods;
    std::optional<CltSummary> clt;
    std::vector<std::string> warnings;
    double wall_clock_seconds = 0.0;
};

[[nodiscard]] MonteCarloReport run_fbm_table(const ExperimentConfig& cfg);
[[nodiscard]] MonteCarloReport run_mbm_table(const ExperimentConfig& cfg);

/// Standardizes sqrt(n) (IRS - Lambda_a(H)) by the tabulated Sigma_a(H),
/// runs a Kolmogorov-Smirnov test against N(0, 1) and reports the variance
/// ratio. When H >= p - 1/4 the result is flagged as outside the CLT.
[[nodiscard]] MonteCarloReport run_clt_check(const Filter& f, double hurst, std::size_t n, std::size_t replicates,
                                             std::uint64_t seed, std::size_t workers = 0);

/// JSON document; wall-clock metadata only when include_timing is set, so
/// equal configurations give byte-identical output without it.
[[nodiscard]] std::string to_json(const MonteCarloReport& report, bool include_timing = true, int indent = 2);

/// "bin_lo,bin_hi,count" rows.
[[nodiscard]] std::string histogram_csv(const stats::Histogram& h);

/// "t,h_true,<method>_mean,..." rows for an mBm report.
[[nodiscard]] std::string curves_csv(const MonteCarloReport& report);

}  // namespace irs
