#include "doctest.h"

#include <cmath>
#include <vector>

#include "json.hpp"

#include "irs/estimation.hpp"
#include "irs/irs_core.hpp"
#include "irs/rng.hpp"
#include "irs/synthesis.hpp"
#include "irs/theory.hpp"

namespace {

const irs::Filter d2 = irs::binomial_filter(2);

irs::SamplePath scaled(const irs::SamplePath& p, double c) {
    auto q = p;
    for (auto& v : q.values) v *= c;
    return q;
}

irs::SamplePath integer_line(std::size_t n, long slope) {
    std::vector<double> v(n + 1);
    for (std::size_t k = 0; k <= n; ++k) v[k] = static_cast<double>(slope * static_cast<long>(k));
    return irs::make_external_path(std::move(v));
}

}  // namespace

TEST_CASE("global estimate recovers H over a seed suite") {
    for (double h : {0.3, 0.7}) {
        const irs::FbmSynthesizer synth(h, 10000);
        double sum = 0.0;
        for (std::uint64_t s = 0; s < 10; ++s) {
            const auto rep = irs::estimate_global(synth.sample(irs::derive_seed(100, s)), d2);
            REQUIRE(rep.estimates.size() == 1);
            const auto& e = rep.estimates[0];
            CHECK(std::abs(e.h_hat - h) < 0.1);
            sum += e.h_hat;
        }
        CHECK(std::abs(sum / 10.0 - h) < 0.02);
    }
}

TEST_CASE("global report fields") {
    const auto path = irs::simulate_fbm(0.45, 5000, 6);
    const auto rep = irs::estimate_global(path, d2, 0.1);
    CHECK(rep.method == irs::Method::irs);
    CHECK(rep.alpha == 0.1);
    CHECK_FALSE(rep.gamma.has_value());
    const auto& e = rep.estimates.at(0);
    CHECK_FALSE(e.t.has_value());
    REQUIRE(e.irs_value.has_value());
    CHECK(*e.irs_value == irs::irs(irs::increments(path, d2)));
    CHECK(e.h_hat == irs::lambda_a_inverse(d2, *e.irs_value).hurst);
    CHECK(e.count == 5000 - 2);
    CHECK_FALSE(e.saturated);
    CHECK(e.ci_lo <= e.h_hat);
    CHECK(e.h_hat <= e.ci_hi);
    CHECK(e.ci_lo >= irs::kHurstFloor);
    CHECK(e.ci_hi <= irs::kHurstCeil);

    const auto wide = irs::estimate_global(path, d2, 0.01).estimates.at(0);
    CHECK(wide.ci_hi - wide.ci_lo > e.ci_hi - e.ci_lo);
    CHECK(wide.h_hat == e.h_hat);
}

TEST_CASE("global estimate preconditions and degenerate input") {
    CHECK_THROWS_AS((void)irs::estimate_global(irs::simulate_fbm(0.5, 250, 1), d2), irs::PathTooShort);
    CHECK_THROWS_AS((void)irs::estimate_global(irs::simulate_fbm(0.5, 500, 1), d2, 0.0), std::invalid_argument);

    const auto rep = irs::estimate_global(integer_line(1000, 3), d2);
    const auto& e = rep.estimates.at(0);
    CHECK(*e.irs_value == 1.0);
    CHECK(e.saturated);
    CHECK(e.h_hat == irs::kHurstCeil);
    CHECK(e.ci_lo == e.h_hat);
    CHECK(e.ci_hi == e.h_hat);
    CHECK_FALSE(rep.warnings.empty());
}

TEST_CASE("first-order filter warns above H = 3/4") {
    const auto rep = irs::estimate_global(irs::simulate_fbm(0.9, 10000, 3), irs::binomial_filter(1));
    CHECK(rep.estimates.at(0).h_hat > 0.75);
    bool warned = false;
    for (const auto& w : rep.warnings) warned = warned || w.find("CLT") != std::string::npos;
    CHECK(warned);
}

TEST_CASE("scale invariance of the estimators") {
    const auto path = irs::simulate_fbm(0.62, 4000, 12);
    const auto base = irs::estimate_global(path, d2).estimates.at(0);
    const auto gqv = irs::estimate_gqv(path, d2).estimates.at(0);
    for (double c : {0.25, -8.0, 1024.0}) {
        CHECK(irs::estimate_global(scaled(path, c), d2).estimates.at(0).h_hat == base.h_hat);
        CHECK(irs::estimate_gqv(scaled(path, c), d2).estimates.at(0).h_hat == gqv.h_hat);
    }
    for (double c : {3.7, -0.013}) {
        CHECK(irs::estimate_global(scaled(path, c), d2).estimates.at(0).h_hat == doctest::Approx(base.h_hat).epsilon(1e-12));
        CHECK(irs::estimate_gqv(scaled(path, c), d2).estimates.at(0).h_hat == doctest::Approx(gqv.h_hat).epsilon(1e-12));
    }
}

TEST_CASE("default evaluation points") {
    const auto t = irs::default_t_points();
    CHECK(t.size() == 50);
    CHECK(t.front() == doctest::Approx(0.01));
    CHECK(t.back() == doctest::Approx(0.99));
    CHECK(irs::default_t_points(4) == std::vector<double>{0.125, 0.375, 0.625, 0.875});
}

TEST_CASE("local estimate on periodic mBm") {
    // A single path lands within 0.1 of H(0.5) = 0.8 about 93% of the time;
    // the per-path standard deviation is about 0.053.
    const irs::MbmSynthesizer synth(irs::builtin_hurst_function(irs::BuiltinHurst::periodic), 10000);
    const std::vector<double> t = {0.5};
    double sum = 0.0;
    int close = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const double h = irs::estimate_local(synth.sample(irs::derive_seed(55, s)), d2, 0.3, t).estimates.at(0).h_hat;
        sum += h;
        close += std::abs(h - 0.8) < 0.1;
    }
    CHECK(std::abs(sum / 20.0 - 0.8) < 3.0 * 0.053 / std::sqrt(20.0));
    CHECK(close >= 16);

    const auto path = irs::simulate_mbm(irs::builtin_hurst_function(irs::BuiltinHurst::periodic), 10000, 55);
    const auto rep = irs::estimate_local(path, d2, 0.3, t);
    REQUIRE(rep.estimates.size() == 1);
    const auto& e = rep.estimates[0];
    CHECK(*e.t == 0.5);
    CHECK(e.count == irs::localized_irs(irs::increments(path, d2), irs::make_window(10000, 2, 0.3, 0.5)).pairs);
    CHECK(e.ci_lo <= e.h_hat);
    CHECK(e.h_hat <= e.ci_hi);
    CHECK(*rep.gamma == 0.3);
    CHECK_FALSE(rep.warnings.empty());  // gamma (1 + eta) = 0.6
}

TEST_CASE("local and global estimates agree on constant-H paths") {
    const auto path = irs::simulate_mbm(irs::HurstFunction::constant(0.4), 10000, 8);
    const auto global = irs::estimate_global(path, d2).estimates.at(0);
    const auto t = irs::default_t_points(5);
    const auto local = irs::estimate_local(path, d2, 0.3, t);
    REQUIRE(local.estimates.size() == 5);
    for (const auto& e : local.estimates) {
        const double joint = (e.ci_hi - e.ci_lo) / 2 + (global.ci_hi - global.ci_lo) / 2;
        CHECK(std::abs(e.h_hat - global.h_hat) <= joint);
    }
}

TEST_CASE("large gamma skips every point") {
    const auto path = irs::simulate_fbm(0.5, 10000, 2);
    const auto t = irs::default_t_points(10);
    const auto rep = irs::estimate_local(path, d2, 0.9, t);
    CHECK(rep.estimates.empty());
    CHECK(rep.skipped.size() == 10);
    CHECK(rep.skipped[3].t == t[3]);
    CHECK_FALSE(rep.warnings.empty());

    const auto gqv = irs::estimate_gqv(path, d2, 0.9, t);
    CHECK(gqv.estimates.empty());
    CHECK(gqv.skipped.size() == 10);
}

TEST_CASE("no warning once gamma (1 + eta) exceeds 1") {
    const auto path = irs::simulate_fbm(0.5, 10000, 2);
    const auto t = irs::default_t_points(3);
    const auto rep = irs::estimate_local(path, d2, 0.55, t);
    CHECK(rep.warnings.empty());
    CHECK(rep.estimates.size() == 3);
}

TEST_CASE("GQV baseline") {
    const auto rep = irs::estimate_gqv(irs::simulate_fbm(0.5, 10000, 77), d2);
    CHECK(rep.method == irs::Method::gqv);
    const auto& e = rep.estimates.at(0);
    CHECK(std::abs(e.h_hat - 0.5) < 0.03);
    CHECK(e.ci_lo == e.h_hat);
    CHECK(e.ci_hi == e.h_hat);
    CHECK_FALSE(e.irs_value.has_value());
    CHECK(e.count == 10000 - 1);

    CHECK_THROWS_AS((void)irs::estimate_gqv(integer_line(1000, 2), d2), irs::NonPositiveVariation);
    CHECK_THROWS_AS((void)irs::estimate_gqv(irs::simulate_fbm(0.5, 1000, 1), d2, 1.5, irs::default_t_points(3)),
                    std::invalid_argument);
}

TEST_CASE("GQV local estimate after the logistic transition") {
    const auto path = irs::simulate_mbm(irs::builtin_hurst_function(irs::BuiltinHurst::logistic), 10000, 31);
    const std::vector<double> t = {0.9};
    const auto rep = irs::estimate_gqv(path, d2, 0.3, t);
    REQUIRE(rep.estimates.size() == 1);
    CHECK(std::abs(rep.estimates[0].h_hat - 0.6) < 0.1);
}

TEST_CASE("report JSON") {
    const auto path = irs::simulate_fbm(0.5, 10000, 4);
    const auto t = irs::default_t_points(3);
    const auto doc = nlohmann::json::parse(irs::to_json(irs::estimate_local(path, d2, 0.3, t)));
    CHECK(doc["method"] == "irs");
    CHECK(doc["filter"] == "binomial:2");
    CHECK(doc["gamma"] == 0.3);
    CHECK(doc["alpha"] == 0.05);
    REQUIRE(doc["estimates"].size() == 3);
    for (const char* key : {"t", "irs", "h_hat", "ci_lo", "ci_hi", "count", "saturated"})
        CHECK(doc["estimates"][0].contains(key));

    const auto g = nlohmann::json::parse(irs::to_json(irs::estimate_gqv(path, d2)));
    CHECK(g["gamma"].is_null());
    CHECK(g["estimates"][0]["t"].is_null());
    CHECK(g["estimates"][0]["irs"].is_null());
}

TEST_CASE("method names") {
    CHECK(irs::to_string(irs::Method::gqv) == "gqv");
    CHECK(irs::parse_method("irs") == irs::Method::irs);
    CHECK(irs::parse_method("GQV") == irs::Method::gqv);
    CHECK_THROWS_AS((void)irs::parse_method("wavelet"), std::invalid_argument);
}
