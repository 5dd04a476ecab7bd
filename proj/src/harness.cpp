#include "irs/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "irs/irs_core.hpp"
#include "irs/parallel.hpp"
#include "irs/rng.hpp"
#include "irs/sigma2_table.hpp"
#include "irs/synthesis.hpp"
#include "irs/theory.hpp"

namespace irs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::uint64_t> replicate_seeds(std::uint64_t master, std::size_t count) {
    std::vector<std::uint64_t> seeds(count);
    for (std::size_t r = 0; r < count; ++r) seeds[r] = derive_seed(master, r);
    return seeds;
}

// Outcome of one method on one replicate.
struct Outcome {
    bool ok = false;
    std::string error;
    EstimationReport report;
};

Outcome run_method(Method method, const SamplePath& path, const ExperimentConfig& cfg,
                   std::optional<std::span<const double>> t_points) {
    Outcome out;
    try {
        if (method == Method::irs)
            out.report = t_points ? estimate_local(path, cfg.filter, cfg.gamma, *t_points, cfg.alpha)
                                  : estimate_global(path, cfg.filter, cfg.alpha);
        else
            out.report = t_points ? estimate_gqv(path, cfg.filter, cfg.gamma, *t_points)
                                  : estimate_gqv(path, cfg.filter);
        out.ok = true;
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

void finish_scalar_summary(MethodSummary& s, double truth, std::size_t bins) {
    s.succeeded = s.estimates.size();
    s.degenerate_variance = s.succeeded < 2;
    if (s.estimates.empty()) return;
    s.mean_h = stats::mean(s.estimates);
    s.variance_h = stats::variance(s.estimates);
    double se = 0.0;
    for (double h : s.estimates) se += (h - truth) * (h - truth);
    s.mse = se / static_cast<double>(s.estimates.size());
    s.histogram = stats::histogram(s.estimates, bins);
}

MonteCarloReport report_header(const ExperimentConfig& cfg) {
    MonteCarloReport report;
    report.n = cfg.n;
    report.replicates = cfg.replicates;
    report.filter = cfg.filter.spec();
    report.master_seed = cfg.master_seed;
    report.replicate_seeds = replicate_seeds(cfg.master_seed, cfg.replicates);
    return report;
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
    if (cfg.replicates < 1) throw std::invalid_argument("experiment needs at least one replicate");
    if (cfg.n < 128) throw std::invalid_argument("experiment needs n >= 128");
    if (std::holds_alternative<MbmScenario>(cfg.scenario) && !(cfg.gamma > 0.0 && cfg.gamma < 1.0))
        throw std::invalid_argument("gamma must lie in (0, 1)");
    if (cfg.methods.empty()) throw std::invalid_argument("experiment needs at least one method");
}

MonteCarloReport run_fbm_table(const ExperimentConfig& cfg) {
    validate(cfg);
    const auto* scenario = std::get_if<FbmScenario>(&cfg.scenario);
    if (!scenario) throw std::invalid_argument("run_fbm_table needs an fBm scenario");
    const auto start = Clock::now();
    const double truth = scenario->hurst;

    auto report = report_header(cfg);
    std::ostringstream name;
    name << "fbm(H=" << truth << ")";
    report.scenario = name.str();
    report.hurst = truth;

    const FbmSynthesizer synth(truth, cfg.n);
    std::vector<std::vector<Outcome>> outcomes(cfg.replicates);
    parallel_for(cfg.replicates, cfg.workers, [&](std::size_t r) {
        const auto path = synth.sample(report.replicate_seeds[r]);
        for (Method m : cfg.methods) outcomes[r].push_back(run_method(m, path, cfg, std::nullopt));
    });

    const double lambda = lambda_a(cfg.filter, truth);
    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
        MethodSummary s;
        s.method = cfg.methods[mi];
        std::vector<double> scaled_irs;
        std::size_t covered = 0;
        for (std::size_t r = 0; r < cfg.replicates; ++r) {
            const auto& o = outcomes[r][mi];
            if (!o.ok) {
                s.failures.push_back({r, o.error});
                continue;
            }
            const auto& e = o.report.estimates.front();
            s.estimates.push_back(e.h_hat);
            if (e.irs_value) scaled_irs.push_back(std::sqrt(static_cast<double>(cfg.n)) * (*e.irs_value - lambda));
            if (e.ci_lo <= truth && truth <= e.ci_hi) ++covered;
        }
        finish_scalar_summary(s, truth, cfg.histogram_bins);
        if (s.method == Method::irs && !s.estimates.empty()) {
            s.scaled_irs_variance = stats::variance(scaled_irs);
            s.ci_coverage = static_cast<double>(covered) / static_cast<double>(s.estimates.size());
        }
        report.methods.push_back(std::move(s));
    }
    if (!clt_condition_holds(cfg.filter, truth))
        report.warnings.push_back("CLT condition violated for this filter and H");
    report.wall_clock_seconds = seconds_since(start);
    return report;
}

MonteCarloReport run_mbm_table(const ExperimentConfig& cfg) {
    validate(cfg);
    const auto* scenario = std::get_if<MbmScenario>(&cfg.scenario);
    if (!scenario) throw std::invalid_argument("run_mbm_table needs an mBm scenario");
    const auto start = Clock::now();

    auto report = report_header(cfg);
    report.scenario = scenario->hurst.name();
    report.hurst_function = scenario->hurst.to_json();
    report.gamma = cfg.gamma;

    const MbmSynthesizer synth(scenario->hurst, cfg.n, cfg.h_grid_size);
    const auto t_points = default_t_points(cfg.t_points);
    std::vector<double> truth(t_points.size());
    for (std::size_t j = 0; j < t_points.size(); ++j) truth[j] = scenario->hurst(t_points[j]);

    std::vector<std::vector<Outcome>> outcomes(cfg.replicates);
    parallel_for(cfg.replicates, cfg.workers, [&](std::size_t r) {
        const auto path = synth.sample(report.replicate_seeds[r]);
        for (Method m : cfg.methods)
            outcomes[r].push_back(run_method(m, path, cfg, std::span<const double>(t_points)));
    });

    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
        MethodSummary s;
        s.method = cfg.methods[mi];
        s.t_points = t_points;
        s.true_curve = truth;
        std::size_t covered = 0, evaluated = 0;
        for (std::size_t r = 0; r < cfg.replicates; ++r) {
            const auto& o = outcomes[r][mi];
            if (!o.ok) {
                s.failures.push_back({r, o.error});
                continue;
            }
            std::vector<double> curve(t_points.size(), kNaN);
            double sq = 0.0;
            std::size_t used = 0;
            for (const auto& e : o.report.estimates) {
                const auto j = static_cast<std::size_t>(
                    std::find(t_points.begin(), t_points.end(), *e.t) - t_points.begin());
                curve[j] = e.h_hat;
                sq += (e.h_hat - truth[j]) * (e.h_hat - truth[j]);
                ++used;
                if (s.method == Method::irs) {
                    ++evaluated;
                    if (e.ci_lo <= truth[j] && truth[j] <= e.ci_hi) ++covered;
                }
            }
            if (used == 0) {
                s.failures.push_back({r, "no evaluation point had a usable window"});
                continue;
            }
            s.ise.push_back(sq / static_cast<double>(used));
            s.curves.push_back(std::move(curve));
        }
        s.succeeded = s.ise.size();
        s.degenerate_variance = s.succeeded < 2;
        if (!s.ise.empty()) {
            s.mise = stats::mean(s.ise);
            s.mean_curve.assign(t_points.size(), 0.0);
            for (std::size_t j = 0; j < t_points.size(); ++j) {
                double sum = 0.0;
                std::size_t count = 0;
                for (const auto& c : s.curves)
                    if (!std::isnan(c[j])) {
                        sum += c[j];
                        ++count;
                    }
                s.mean_curve[j] = count ? sum / static_cast<double>(count) : kNaN;
            }
            std::vector<double> all;
            for (const auto& c : s.curves)
                for (double v : c)
                    if (!std::isnan(v)) all.push_back(v);
            s.histogram = stats::histogram(all, cfg.histogram_bins);
            if (s.method == Method::irs && evaluated > 0)
                s.ci_coverage = static_cast<double>(covered) / static_cast<double>(evaluated);
        }
        report.methods.push_back(std::move(s));
    }
    if (cfg.gamma * (1.0 + scenario->hurst.holder_eta()) <= 1.0)
        report.warnings.push_back("gamma (1 + eta) <= 1: the localized CLT is not guaranteed");
    report.wall_clock_seconds = seconds_since(start);
    return report;
}

MonteCarloReport run_clt_check(const Filter& f, double hurst, std::size_t n, std::size_t replicates,
                               std::uint64_t seed, std::size_t workers) {
    if (replicates < 2) throw std::invalid_argument("CLT check needs at least two replicates");
    const auto start = Clock::now();
    MonteCarloReport report;
    std::ostringstream name;
    name << "clt(H=" << hurst << ")";
    report.scenario = name.str();
    report.hurst = hurst;
    report.n = n;
    report.replicates = replicates;
    report.filter = f.spec();
    report.master_seed = seed;
    report.replicate_seeds = replicate_seeds(seed, replicates);

    const FbmSynthesizer synth(hurst, n);
    std::vector<double> irs_values(replicates);
    parallel_for(replicates, workers, [&](std::size_t r) {
        irs_values[r] = irs(increments(synth.sample(report.replicate_seeds[r]), f));
    });

    const double lambda = lambda_a(f, hurst);
    const double root_n = std::sqrt(static_cast<double>(n));
    std::vector<double> scaled(replicates);
    for (std::size_t r = 0; r < replicates; ++r) scaled[r] = root_n * (irs_values[r] - lambda);

    CltSummary clt;
    clt.condition_violated = !clt_condition_holds(f, hurst);
    clt.sigma2_reference = sigma2_table(f)(hurst);
    const double sigma = std::sqrt(clt.sigma2_reference);
    std::vector<double> standardized(replicates);
    for (std::size_t r = 0; r < replicates; ++r) standardized[r] = scaled[r] / sigma;
    const auto ks = stats::ks_test_normal(standardized);
    clt.ks_statistic = ks.statistic;
    clt.p_value = ks.p_value;
    clt.variance_ratio = stats::variance(scaled) / clt.sigma2_reference;
    clt.mean_standardized = stats::mean(standardized);
    report.clt = clt;
    if (clt.condition_violated)
        report.warnings.push_back("CLT condition violated (H >= p - 1/4): normality is not expected");

    MethodSummary s;
    s.method = Method::irs;
    s.scaled_irs_variance = stats::variance(scaled);
    for (double v : irs_values) s.estimates.push_back(lambda_a_inverse(f, v).hurst);
    finish_scalar_summary(s, hurst, 30);
    report.methods.push_back(std::move(s));
    report.wall_clock_seconds = seconds_since(start);
    return report;
}

std::string to_json(const MonteCarloReport& report, bool include_timing, int indent) {
    using nlohmann::json;
    auto opt = [](const auto& v) { return v ? json(*v) : json(nullptr); };

    json methods = json::array();
    for (const auto& s : report.methods) {
        json failures = json::array();
        for (const auto& f : s.failures) failures.push_back({{"replicate", f.replicate}, {"message", f.message}});
        json m = {
            {"method", to_string(s.method)},
            {"succeeded", s.succeeded},
            {"failures", failures},
            {"degenerate_variance", s.degenerate_variance},
            {"ci_coverage", opt(s.ci_coverage)},
            {"histogram", {{"lo", s.histogram.lo}, {"hi", s.histogram.hi}, {"counts", s.histogram.counts}}},
        };
        if (report.hurst) {
            m["mean_h"] = s.mean_h;
            m["mse"] = s.mse;
            m["variance_h"] = s.variance_h;
            m["scaled_irs_variance"] = opt(s.scaled_irs_variance);
            m["estimates"] = s.estimates;
        } else {
            m["mise"] = s.mise;
            m["t_points"] = s.t_points;
            m["true_curve"] = s.true_curve;
            m["mean_curve"] = s.mean_curve;
            m["ise"] = s.ise;
            m["curves"] = s.curves;  // NaN (skipped point) is written as null
        }
        methods.push_back(std::move(m));
    }

    json doc = {
        {"scenario", report.scenario},
        {"hurst", opt(report.hurst)},
        {"hurst_function", report.hurst_function ? json::parse(*report.hurst_function) : json(nullptr)},
        {"n", report.n},
        {"replicates", report.replicates},
        {"filter", report.filter},
        {"gamma", opt(report.gamma)},
        {"master_seed", report.master_seed},
        {"replicate_seeds", report.replicate_seeds},
        {"methods", methods},
        {"warnings", report.warnings},
    };
    if (report.clt) {
        const auto& c = *report.clt;
        doc["clt"] = {
            {"sigma2_reference", c.sigma2_reference}, {"ks_statistic", c.ks_statistic},
            {"p_value", c.p_value},                   {"variance_ratio", c.variance_ratio},
            {"mean_standardized", c.mean_standardized}, {"condition_violated", c.condition_violated},
        };
    }
    if (include_timing) doc["wall_clock_seconds"] = report.wall_clock_seconds;
    return doc.dump(indent);
}

std::string histogram_csv(const stats::Histogram& h) {
    std::ostringstream out;
    out.precision(17);
    out << "bin_lo,bin_hi,count\n";
    const auto bins = h.counts.size();
    const double width = bins ? (h.hi - h.lo) / static_cast<double>(bins) : 0.0;
    for (std::size_t b = 0; b < bins; ++b)
        out << h.lo + width * static_cast<double>(b) << ',' << h.lo + width * static_cast<double>(b + 1) << ','
            << h.counts[b] << '\n';
    return out.str();
}

std::string curves_csv(const MonteCarloReport& report) {
    std::ostringstream out;
    out.precision(17);
    if (report.methods.empty() || report.methods.front().t_points.empty()) return "t,h_true\n";
    out << "t,h_true";
    for (const auto& s : report.methods) out << ',' << to_string(s.method) << "_mean";
    out << '\n';
    const auto& first = report.methods.front();
    for (std::size_t j = 0; j < first.t_points.size(); ++j) {
        out << first.t_points[j] << ',' << first.true_curve[j];
        for (const auto& s : report.methods) out << ',' << (j < s.mean_curve.size() ? s.mean_curve[j] : kNaN);
        out << '\n';
    }
    return out.str();
}

}  // namespace irs
