#include "irs/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

#include "irs/irs_core.hpp"
#include "irs/sigma2_table.hpp"
#include "irs/stats.hpp"
#include "irs/theory.hpp"

namespace irs {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
}

void check_global_length(const SamplePath& path, const Filter& f) {
    const std::size_t need = 100 * (f.length() + 1);
    if (path.values.size() < need)
        throw PathTooShort("global estimation needs at least " + std::to_string(need) + " observations, got " +
                           std::to_string(path.values.size()));
}

// Fills h_hat, saturation and the delta-method interval from an IRS value
// averaged over `effective` pairs.
EstimateEntry irs_entry(const Filter& f, double irs_value, double effective, std::size_t count, double z,
                        std::vector<std::string>& warnings) {
    const auto& link = link_function(f);
    const auto inv = link.inverse(irs_value);
    EstimateEntry e;
    e.irs_value = irs_value;
    e.h_hat = inv.hurst;
    e.count = count;
    e.saturated = inv.saturated;
    if (inv.saturated) {
        e.ci_lo = e.ci_hi = e.h_hat;
        return e;
    }
    const double sigma2 = sigma2_table(f)(e.h_hat);
    if (sigma2 <= 0.0) warnings.push_back("Sigma^2_a estimate is zero: degenerate confidence interval");
    const double half = z * std::sqrt(std::max(sigma2, 0.0) / effective) / std::abs(link.derivative(e.h_hat));
    e.ci_lo = std::clamp(e.h_hat - half, kHurstFloor, kHurstCeil);
    e.ci_hi = std::clamp(e.h_hat + half, kHurstFloor, kHurstCeil);
    return e;
}

double declared_eta(const SamplePath& path) {
    if (const auto* mbm = std::get_if<MbmProvenance>(&path.provenance)) return mbm->hurst.holder_eta();
    return 1.0;
}

double mean_square(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s / static_cast<double>(x.size());
}

EstimateEntry gqv_entry(std::span<const double> base, std::span<const double> dilated) {
    const double v1 = mean_square(base);
    const double v2 = mean_square(dilated);
    if (!(v1 > 0.0) || !(v2 > 0.0)) throw NonPositiveVariation("quadratic variation is zero");
    EstimateEntry e;
    const double raw = 0.5 * std::log2(v2 / v1);
    e.h_hat = std::clamp(raw, kHurstFloor, kHurstCeil);
    e.saturated = raw != e.h_hat;
    e.ci_lo = e.ci_hi = e.h_hat;
    e.count = base.size();
    return e;
}

}  // namespace

std::string to_string(Method m) { return m == Method::irs ? "irs" : "gqv"; }

Method parse_method(std::string_view name) {
    if (name == "irs" || name == "IRS") return Method::irs;
    if (name == "gqv" || name == "GQV") return Method::gqv;
    throw std::invalid_argument("unknown method '" + std::string(name) + "' (expected irs or gqv)");
}

EstimationReport estimate_global(const SamplePath& path, const Filter& f, double alpha) {
    check_alpha(alpha);
    check_global_length(path, f);
    EstimationReport report{Method::irs, f, std::nullopt, alpha, {}, {}, {}};
    const auto inc = increments(path, f);
    const double value = irs(inc);
    const double z = stats::normal_quantile(1.0 - alpha / 2.0);
    auto entry = irs_entry(f, value, static_cast<double>(path.n), inc.values.size() - 1, z, report.warnings);
    if (entry.saturated)
        report.warnings.push_back("IRS value outside the attainable band of Lambda_a: estimate saturated");
    if (!clt_condition_holds(f, entry.h_hat))
        report.warnings.push_back("CLT condition violated (H >= p - 1/4): confidence interval not valid");
    report.estimates.push_back(entry);
    return report;
}

std::vector<double> default_t_points(std::size_t count) {
    std::vector<double> t(count);
    for (std::size_t j = 0; j < count; ++j) t[j] = (static_cast<double>(j) + 0.5) / static_cast<double>(count);
    return t;
}

EstimationReport estimate_local(const SamplePath& path, const Filter& f, double gamma,
                                std::span<const double> t_points, double alpha) {
    check_alpha(alpha);
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
    EstimationReport report{Method::irs, f, gamma, alpha, {}, {}, {}};
    if (gamma * (1.0 + declared_eta(path)) <= 1.0)
        report.warnings.push_back("gamma (1 + eta) <= 1: the localized CLT is not guaranteed");

    const auto inc = increments(path, f);
    const double z = stats::normal_quantile(1.0 - alpha / 2.0);
    for (double t : t_points) {
        const auto window = make_window(path.n, f.length(), gamma, t);
        try {
            const auto local = localized_irs(inc, window);
            auto entry = irs_entry(f, local.value, static_cast<double>(local.pairs), local.pairs, z, report.warnings);
            entry.t = t;
            report.estimates.push_back(entry);
        } catch (const WindowTooSmall& e) {
            report.skipped.push_back({t, e.what()});
        }
    }
    if (report.estimates.empty() && !t_points.empty())
        report.warnings.push_back("every local window was too small");
    return report;
}

EstimationReport estimate_gqv(const SamplePath& path, const Filter& f, std::optional<double> gamma,
                              std::span<const double> t_points) {
    EstimationReport report{Method::gqv, f, gamma, 0.05, {}, {}, {}};
    const auto wide = dilate(f, 2);
    if (!gamma) {
        check_global_length(path, f);
        const auto base = increments(path, f);
        const auto dilated = increments(path, wide);
        report.estimates.push_back(gqv_entry(base.values, dilated.values));
        return report;
    }
    if (!(*gamma > 0.0 && *gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
    const auto base = increments(path, f);
    const auto dilated = increments(path, wide);
    for (double t : t_points) {
        const auto w1 = make_window(path.n, f.length(), *gamma, t);
        const auto w2 = make_window(path.n, wide.length(), *gamma, t);
        const std::size_t count1 = w1.hi - w1.lo + 1;
        const std::size_t count2 = w2.hi >= w2.lo ? w2.hi - w2.lo + 1 : 0;
        if (count1 < kMinWindowPairs || count2 < kMinWindowPairs) {
            report.skipped.push_back({t, "local window holds " + std::to_string(std::min(count1, count2)) +
                                             " increments (need >= " + std::to_string(kMinWindowPairs) + ")"});
            continue;
        }
        auto entry = gqv_entry(std::span<const double>(base.values).subspan(w1.lo, count1),
                               std::span<const double>(dilated.values).subspan(w2.lo, count2));
        entry.t = t;
        report.estimates.push_back(entry);
    }
    return report;
}

std::string to_json(const EstimationReport& report, int indent) {
    using nlohmann::json;
    json estimates = json::array();
    for (const auto& e : report.estimates) {
        estimates.push_back({
            {"t", e.t ? json(*e.t) : json(nullptr)},
            {"irs", e.irs_value ? json(*e.irs_value) : json(nullptr)},
            {"h_hat", e.h_hat},
            {"ci_lo", e.ci_lo},
            {"ci_hi", e.ci_hi},
            {"count", e.count},
            {"saturated", e.saturated},
        });
    }
    json skipped = json::array();
    for (const auto& s : report.skipped) skipped.push_back({{"t", s.t}, {"reason", s.reason}});
    const json doc = {
        {"method", to_string(report.method)},
        {"filter", report.filter.spec()},
        {"gamma", report.gamma ? json(*report.gamma) : json(nullptr)},
        {"alpha", report.alpha},
        {"estimates", estimates},
        {"skipped", skipped},
        {"warnings", report.warnings},
    };
    return doc.dump(indent);
}

}  // namespace irs
