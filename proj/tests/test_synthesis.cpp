#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <vector>

#include "irs/hurst_function.hpp"
#include "irs/rng.hpp"
#include "irs/stats.hpp"
#include "irs/synthesis.hpp"

namespace {

std::vector<double> diffs(const std::vector<double>& x) {
    std::vector<double> d(x.size() - 1);
    for (std::size_t k = 0; k + 1 < x.size(); ++k) d[k] = x[k + 1] - x[k];
    return d;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

// Uncentred second moments E[x_i x_j] with per-entry standard errors,
// accumulated over replicate increment vectors of fixed length.
struct MomentMatrix {
    std::size_t dim;
    std::size_t count = 0;
    std::vector<double> sum, sum_sq;

    explicit MomentMatrix(std::size_t d) : dim(d), sum(d * d, 0.0), sum_sq(d * d, 0.0) {}

    void add(const std::vector<double>& x) {
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) {
                const double v = x[i] * x[j];
                sum[i * dim + j] += v;
                sum_sq[i * dim + j] += v * v;
            }
        ++count;
    }
    double mean(std::size_t i, std::size_t j) const { return sum[i * dim + j] / static_cast<double>(count); }
    double se(std::size_t i, std::size_t j) const {
        const double m = mean(i, j);
        const double var = sum_sq[i * dim + j] / static_cast<double>(count) - m * m;
        return std::sqrt(std::max(var, 0.0) / static_cast<double>(count));
    }
};

}  // namespace

TEST_CASE("fbm_covariance") {
    CHECK(irs::fbm_covariance(0.5, 0.3, 0.7) == doctest::Approx(0.3).epsilon(1e-14));
    for (double h : {0.1, 0.3, 0.5, 0.7, 0.9}) CHECK(irs::fbm_covariance(h, 1.0, 1.0) == doctest::Approx(1.0));
    CHECK(irs::fbm_covariance(0.7, 0.5, 0.5) == doctest::Approx(0.378929).epsilon(1e-5));
    CHECK(irs::fbm_covariance(0.7, 0.5, 0.5) == doctest::Approx(std::pow(0.5, 1.4)).epsilon(1e-14));
    CHECK(irs::fbm_covariance(0.3, 0.2, 0.9) == doctest::Approx(irs::fbm_covariance(0.3, 0.9, 0.2)));
    CHECK(irs::fbm_covariance(0.4, 0.0, 0.6) == 0.0);
}

TEST_CASE("fgn_autocovariance") {
    CHECK(irs::fgn_autocovariance(0.5, 0) == doctest::Approx(1.0));
    for (std::size_t j = 1; j < 6; ++j) CHECK(std::abs(irs::fgn_autocovariance(0.5, j)) < 1e-15);
    for (double h : {0.2, 0.7}) {
        CHECK(irs::fgn_autocovariance(h, 0) == doctest::Approx(1.0));
        CHECK(irs::fgn_autocovariance(h, 1) == doctest::Approx(std::pow(2.0, 2 * h - 1) - 1.0).epsilon(1e-13));
    }
    CHECK(irs::fgn_autocovariance(0.3, 4) < 0.0);
    CHECK(irs::fgn_autocovariance(0.7, 4) > 0.0);
}

TEST_CASE("circulant embedding size") {
    CHECK(irs::CirculantFgn::embedding_size_for(2) == 2);
    CHECK(irs::CirculantFgn::embedding_size_for(3) == 4);
    CHECK(irs::CirculantFgn::embedding_size_for(5) == 8);
    CHECK(irs::CirculantFgn::embedding_size_for(1024) == 2048);
    CHECK(irs::CirculantFgn::embedding_size_for(1025) == 2048);
    CHECK(irs::CirculantFgn::embedding_size_for(10000) == 32768);
    CHECK(irs::CirculantFgn(0.3, 100).embedding_size() == 256);
    CHECK_THROWS_AS(irs::CirculantFgn(0.3, 1), std::invalid_argument);
    CHECK_THROWS_AS(irs::CirculantFgn(1.0, 16), std::invalid_argument);
    for (double h : {0.01, 0.25, 0.5, 0.75, 0.99}) CHECK_NOTHROW(irs::CirculantFgn(h, 10000));
}

TEST_CASE("simulate_fbm shape and determinism") {
    const auto a = irs::simulate_fbm(0.3, 256, 11);
    const auto b = irs::simulate_fbm(0.3, 256, 11);
    const auto c = irs::simulate_fbm(0.3, 256, 12);
    CHECK(a.n == 256);
    CHECK(a.values.size() == 257);
    CHECK(a.values[0] == 0.0);
    CHECK(a.seed == 11u);
    CHECK(std::get<irs::FbmProvenance>(a.provenance).hurst == 0.3);
    CHECK(same_bits(a.values, b.values));
    CHECK_FALSE(same_bits(a.values, c.values));
    CHECK(a.t(128) == 0.5);

    const irs::FbmSynthesizer synth(0.3, 256);
    CHECK(same_bits(synth.sample(11).values, a.values));

    CHECK_THROWS_AS((void)irs::simulate_fbm(0.0, 256, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)irs::simulate_fbm(1.0, 256, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)irs::simulate_fbm(0.5, 1, 1), std::invalid_argument);
}

TEST_CASE("Brownian increments are uncorrelated") {
    const std::size_t n = 1000;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto d = diffs(irs::simulate_fbm(0.5, n, seed).values);
        const std::vector<double> x(d.begin(), d.end() - 1), y(d.begin() + 1, d.end());
        const double corr = irs::stats::covariance(x, y) / std::sqrt(irs::stats::variance(x) * irs::stats::variance(y));
        CHECK(std::abs(corr) < 4.0 / std::sqrt(static_cast<double>(n)));
    }
}

TEST_CASE("increment variance is n^{-2H}") {
    const std::size_t n = 4096, reps = 60;
    const double h = 0.7;
    const irs::FbmSynthesizer synth(h, n);
    std::vector<double> ms(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        const auto d = diffs(synth.sample(irs::derive_seed(77, r)).values);
        ms[r] = std::inner_product(d.begin(), d.end(), d.begin(), 0.0) / static_cast<double>(d.size());
    }
    const double target = std::pow(static_cast<double>(n), -2.0 * h);
    const double se = std::sqrt(irs::stats::variance(ms) / static_cast<double>(reps));
    CHECK(std::abs(irs::stats::mean(ms) - target) < 3.0 * se);
}

TEST_CASE("variance of X(t) scales as t^{2H}") {
    const std::size_t n = 1024, reps = 2000;
    for (double h : {0.3, 0.7}) {
        const irs::FbmSynthesizer synth(h, n);
        std::vector<double> sum_sq(n + 1, 0.0);
        for (std::size_t r = 0; r < reps; ++r) {
            const auto p = synth.sample(irs::derive_seed(5, r));
            for (std::size_t k = 1; k <= n; ++k) sum_sq[k] += p.values[k] * p.values[k];
        }
        std::vector<double> lt, lv;
        for (std::size_t k = 8; k <= n; k += 8) {
            lt.push_back(std::log(static_cast<double>(k) / static_cast<double>(n)));
            lv.push_back(std::log(sum_sq[k] / static_cast<double>(reps)));
        }
        CHECK(irs::stats::ols_slope(lt, lv) == doctest::Approx(2.0 * h).epsilon(0.05 / (2.0 * h)));
    }
}

TEST_CASE("Cholesky paths have the fBm covariance") {
    const std::size_t n = 64, reps = 10000;
    for (double h : {0.3, 0.5}) {
        MomentMatrix mm(n);
        for (std::size_t r = 0; r < reps; ++r) {
            const auto p = irs::simulate_fbm_cholesky(h, n, irs::derive_seed(900, r));
            mm.add(std::vector<double>(p.values.begin() + 1, p.values.end()));
        }
        std::size_t bad = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double target = irs::fbm_covariance(h, (i + 1.0) / n, (j + 1.0) / n);
                if (std::abs(mm.mean(i, j) - target) > 5.0 * mm.se(i, j)) ++bad;
            }
        CHECK(bad == 0);
    }
}

TEST_CASE("circulant and Cholesky increment covariances agree") {
    const std::size_t n = 64, reps = 10000;
    for (double h : {0.3, 0.5, 0.7}) {
        MomentMatrix circ(n), chol(n);
        const irs::FbmSynthesizer synth(h, n);
        for (std::size_t r = 0; r < reps; ++r) {
            circ.add(diffs(synth.sample(irs::derive_seed(31, r)).values));
            chol.add(diffs(irs::simulate_fbm_cholesky(h, n, irs::derive_seed(32, r)).values));
        }
        std::size_t bad = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double se = std::hypot(circ.se(i, j), chol.se(i, j));
                if (std::abs(circ.mean(i, j) - chol.mean(i, j)) > 5.0 * se) ++bad;
            }
        CHECK(bad == 0);
    }
}

TEST_CASE("circulant and Cholesky marginals at t = 1 agree") {
    const std::size_t n = 32, reps = 2000;
    const double h = 0.7;
    const irs::FbmSynthesizer synth(h, n);
    std::vector<double> a(reps), b(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        a[r] = synth.sample(irs::derive_seed(41, r)).values.back();
        b[r] = irs::simulate_fbm_cholesky(h, n, irs::derive_seed(42, r)).values.back();
    }
    CHECK(irs::stats::ks_test_two_sample(a, b).p_value > 0.01);
}

TEST_CASE("simulate_fbm_cholesky preconditions") {
    CHECK_THROWS_AS((void)irs::simulate_fbm_cholesky(0.5, 4097, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)irs::simulate_fbm_cholesky(1.2, 16, 1), std::invalid_argument);
    const auto p = irs::simulate_fbm_cholesky(0.4, 16, 3);
    CHECK(p.values.size() == 17);
    CHECK(p.values[0] == 0.0);
    CHECK(same_bits(p.values, irs::simulate_fbm_cholesky(0.4, 16, 3).values));
}

TEST_CASE("builtin Hurst functions") {
    const auto lin = irs::builtin_hurst_function(irs::BuiltinHurst::linear);
    const auto per = irs::builtin_hurst_function(irs::BuiltinHurst::periodic);
    const auto logi = irs::builtin_hurst_function(irs::BuiltinHurst::logistic);
    CHECK(lin(0.0) == doctest::Approx(0.1));
    CHECK(lin(1.0) == doctest::Approx(0.9));
    CHECK(per(0.5) == doctest::Approx(0.8));
    CHECK(per(0.0) == doctest::Approx(0.5));
    CHECK(logi(0.7) == doctest::Approx(0.45));
    for (const auto* f : {&lin, &per, &logi}) {
        CHECK(f->holder_eta() == 1.0);
        CHECK_FALSE(f->is_constant());
        for (int i = 0; i <= 1000; ++i) {
            const double v = (*f)(i / 1000.0);
            CHECK(v >= f->range_lo() - 1e-15);
            CHECK(v <= f->range_hi() + 1e-15);
        }
    }
    CHECK(lin.range_lo() == doctest::Approx(0.1));
    CHECK(lin.range_hi() == doctest::Approx(0.9));
    CHECK(per.range_lo() == doctest::Approx(0.5));
    CHECK(per.range_hi() == doctest::Approx(0.8));
    CHECK(logi.range_lo() == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(logi.range_hi() == doctest::Approx(0.6).epsilon(1e-12));

    CHECK(irs::parse_builtin_hurst("periodic") == irs::BuiltinHurst::periodic);
    CHECK_THROWS_AS((void)irs::parse_builtin_hurst("cubic"), std::invalid_argument);
}

TEST_CASE("Hurst function validation and JSON") {
    CHECK_THROWS_AS(irs::HurstFunction(irs::HurstFunction::Linear{0.5, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(irs::HurstFunction::constant(0.0), std::invalid_argument);
    CHECK_THROWS_AS(irs::HurstFunction(irs::HurstFunction::Constant{0.5}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(irs::HurstFunction(irs::HurstFunction::Tabulated{{0.0, 0.5}, {0.3, 0.4}}), std::invalid_argument);
    CHECK_THROWS_AS(irs::HurstFunction(irs::HurstFunction::Tabulated{{0.0, 0.0, 1.0}, {0.3, 0.4, 0.5}}),
                    std::invalid_argument);

    const irs::HurstFunction tab(irs::HurstFunction::Tabulated{{0.0, 0.5, 1.0}, {0.2, 0.6, 0.4}}, 0.5);
    CHECK(tab(0.25) == doctest::Approx(0.4));
    CHECK(tab.range_lo() == doctest::Approx(0.2));
    CHECK(tab.range_hi() == doctest::Approx(0.6));

    for (const auto& f : {tab, irs::builtin_hurst_function(irs::BuiltinHurst::logistic), irs::HurstFunction::constant(0.35),
                          irs::builtin_hurst_function(irs::BuiltinHurst::periodic)}) {
        const auto back = irs::hurst_function_from_json(f.to_json());
        CHECK(back.holder_eta() == f.holder_eta());
        for (double t : {0.0, 0.13, 0.5, 0.77, 1.0}) CHECK(back(t) == f(t));
    }
    CHECK_THROWS_AS((void)irs::hurst_function_from_json("{\"kind\":\"cubic\"}"), std::invalid_argument);
    CHECK_THROWS_AS((void)irs::hurst_function_from_json("{\"kind\":\"constant\"}"), std::invalid_argument);
    CHECK_THROWS_AS((void)irs::hurst_function_from_json("not json"), std::invalid_argument);
}

TEST_CASE("monotone cubic interpolation") {
    const std::vector<double> x = {0.0, 1.0, 2.0, 3.0, 4.0};
    const std::vector<double> lin = {1.0, 3.0, 5.0, 7.0, 9.0};
    for (double at = 0.0; at <= 4.0; at += 0.125) CHECK(irs::monotone_cubic(x, lin, at) == doctest::Approx(1.0 + 2.0 * at));

    const std::vector<double> step = {0.0, 0.0, 1.0, 1.0, 1.0};
    double prev = -1.0;
    for (double at = 0.0; at <= 4.0; at += 0.01) {
        const double v = irs::monotone_cubic(x, step, at);
        CHECK(v >= prev - 1e-15);
        CHECK(v >= -1e-15);
        CHECK(v <= 1.0 + 1e-15);
        prev = v;
    }
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(irs::monotone_cubic(x, step, x[i]) == step[i]);

    const std::vector<double> two = {0.0, 1.0};
    CHECK(irs::monotone_cubic(two, std::vector<double>{2.0, 4.0}, 0.25) == doctest::Approx(2.5));
    CHECK_THROWS_AS((void)irs::monotone_cubic(two, std::vector<double>{1.0}, 0.5), std::invalid_argument);
}

TEST_CASE("constant-H mBm is exactly fBm") {
    const auto m = irs::simulate_mbm(irs::HurstFunction::constant(0.6), 1024, 99);
    const auto f = irs::simulate_fbm(0.6, 1024, 99);
    CHECK(same_bits(m.values, f.values));
    CHECK(std::holds_alternative<irs::MbmProvenance>(m.provenance));
}

TEST_CASE("mBm synthesis") {
    const auto lin = irs::builtin_hurst_function(irs::BuiltinHurst::linear);
    const irs::MbmSynthesizer synth(lin, 2048, 20);
    CHECK(synth.h_grid().size() == 20);
    CHECK(synth.h_grid().front() == doctest::Approx(0.1));
    CHECK(synth.h_grid().back() == doctest::Approx(0.9));
    const auto a = synth.sample(5);
    CHECK(a.values.size() == 2049);
    CHECK(a.values[0] == 0.0);
    CHECK(same_bits(a.values, irs::simulate_mbm(lin, 2048, 5, 20).values));
    CHECK_FALSE(same_bits(a.values, synth.sample(6).values));

    CHECK_THROWS_AS((void)irs::simulate_mbm(irs::HurstFunction(irs::HurstFunction::Linear{0.005, 0.5}), 256, 1),
                    irs::RangeTooWide);
    CHECK_THROWS_AS((void)irs::simulate_mbm(irs::HurstFunction::constant(0.995), 256, 1), irs::RangeTooWide);
    CHECK_THROWS_AS((void)irs::simulate_mbm(lin, 256, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)irs::simulate_mbm(lin, 1, 1), std::invalid_argument);
}

TEST_CASE("logistic mBm becomes smoother after the transition") {
    // Quadratic-variation exponent 0.5 log2(V(lag 2) / V(lag 1)) of the
    // first differences, before t = 0.6 and after t = 0.8.
    const std::size_t n = 10000;
    const auto path = irs::simulate_mbm(irs::builtin_hurst_function(irs::BuiltinHurst::logistic), n, 2024);
    auto exponent = [&](std::size_t lo, std::size_t hi) {
        double v1 = 0.0, v2 = 0.0;
        for (std::size_t k = lo; k + 2 <= hi; ++k) {
            const double d1 = path.values[k + 1] - path.values[k];
            const double d2 = path.values[k + 2] - path.values[k];
            v1 += d1 * d1;
            v2 += d2 * d2;
        }
        return 0.5 * std::log2(v2 / v1);
    };
    const double before = exponent(0, 6000);
    const double after = exponent(8000, n);
    CHECK(before < after);
    CHECK(before == doctest::Approx(0.3).epsilon(0.1 / 0.3));
    CHECK(after == doctest::Approx(0.6).epsilon(0.1 / 0.6));
}

TEST_CASE("external paths start at zero") {
    const auto p = irs::make_external_path({5.0, 6.0, 4.0});
    CHECK(p.n == 2);
    CHECK(p.values == std::vector<double>{0.0, 1.0, -1.0});
    CHECK(std::holds_alternative<irs::ExternalProvenance>(p.provenance));
    CHECK_FALSE(p.seed.has_value());
    CHECK_THROWS_AS((void)irs::make_external_path({1.0}), std::invalid_argument);
}

TEST_CASE("derived seeds") {
    CHECK(irs::derive_seed(1, 0) == irs::derive_seed(1, 0));
    CHECK(irs::derive_seed(1, 0) != irs::derive_seed(1, 1));
    CHECK(irs::derive_seed(1, 0) != irs::derive_seed(2, 0));
    CHECK(irs::derive_seed(0, 1) != irs::derive_seed(1, 0));
    auto e1 = irs::make_engine(123), e2 = irs::make_engine(123);
    CHECK(e1() == e2());
}
