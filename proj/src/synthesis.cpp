#include "irs/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <fftw3.h>

namespace irs {

namespace {

// FFTW planning is not thread-safe; executing an existing plan on new arrays is.
fftw_plan forward_plan(std::size_t m) {
    static std::mutex mutex;
    static std::map<std::size_t, fftw_plan> plans;
    std::lock_guard lock(mutex);
    auto it = plans.find(m);
    if (it != plans.end()) return it->second;
    std::vector<std::complex<double>> in(m), out(m);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(m), reinterpret_cast<fftw_complex*>(in.data()),
                                      reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans.emplace(m, plan);
    return plan;
}

void fft_forward(std::vector<std::complex<double>>& in, std::vector<std::complex<double>>& out) {
    fftw_execute_dft(forward_plan(in.size()), reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

double pchip_end_slope(double h0, double h1, double d0, double d1) {
    double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (m * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::abs(m) > std::abs(3.0 * d0)) return 3.0 * d0;
    return m;
}

std::vector<double> cumulative_path(std::span<const double> increments, double scale) {
    std::vector<double> values(increments.size() + 1, 0.0);
    double acc = 0.0;
    for (std::size_t k = 0; k < increments.size(); ++k) {
        acc += increments[k];
        values[k + 1] = scale * acc;
    }
    return values;
}

void check_hurst(double hurst) {
    if (!(hurst > 0.0 && hurst < 1.0)) throw std::invalid_argument("Hurst index must lie in (0, 1)");
}

}  // namespace

SamplePath make_external_path(std::vector<double> values) {
    if (values.size() < 2) throw std::invalid_argument("a path needs at least two observations");
    const double origin = values.front();
    for (double& v : values) v -= origin;
    SamplePath path;
    path.n = values.size() - 1;
    path.values = std::move(values);
    path.provenance = ExternalProvenance{};
    return path;
}

double fbm_covariance(double hurst, double s, double t) {
    const double two_h = 2.0 * hurst;
    return 0.5 * (std::pow(t, two_h) + std::pow(s, two_h) - std::pow(std::abs(t - s), two_h));
}

double fgn_autocovariance(double hurst, std::size_t lag) {
    const double two_h = 2.0 * hurst;
    const auto j = static_cast<double>(lag);
    return 0.5 * (std::pow(j + 1.0, two_h) + std::pow(std::abs(j - 1.0), two_h) - 2.0 * std::pow(j, two_h));
}

std::size_t CirculantFgn::embedding_size_for(std::size_t count) {
    std::size_t m = 2;
    while (m < 2 * (count - 1)) m *= 2;
    return m;
}

CirculantFgn::CirculantFgn(double hurst, std::size_t count) : hurst_(hurst), count_(count) {
    check_hurst(hurst);
    if (count < 2) throw std::invalid_argument("circulant embedding needs at least two samples");
    const std::size_t m = embedding_size_for(count);
    std::vector<std::complex<double>> row(m), eigen(m);
    for (std::size_t j = 0; j <= m / 2; ++j) row[j] = fgn_autocovariance(hurst, j);
    for (std::size_t j = m / 2 + 1; j < m; ++j) row[j] = row[m - j];
    fft_forward(row, eigen);

    double max_eigen = 0.0;
    for (const auto& e : eigen) max_eigen = std::max(max_eigen, e.real());
    sqrt_eigen_.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        double lambda = eigen[k].real();
        if (lambda < 0.0) {
            if (lambda < -1e-9 * max_eigen)
                throw EmbeddingNotPSD("circulant embedding has eigenvalue " + std::to_string(lambda) +
                                      " for H = " + std::to_string(hurst));
            lambda = 0.0;
        }
        sqrt_eigen_[k] = std::sqrt(lambda / static_cast<double>(m));
    }
}

std::vector<std::complex<double>> CirculantFgn::draw_noise(std::size_t embedding_size, Engine& engine) {
    std::normal_distribution<double> normal;
    std::vector<std::complex<double>> noise(embedding_size);
    for (auto& w : noise) {
        const double re = normal(engine);
        const double im = normal(engine);
        w = {re, im};
    }
    return noise;
}

std::vector<double> CirculantFgn::transform(std::span<const std::complex<double>> noise) const {
    const std::size_t m = embedding_size();
    if (noise.size() != m) throw std::invalid_argument("noise length does not match embedding size");
    std::vector<std::complex<double>> scaled(m), out(m);
    for (std::size_t k = 0; k < m; ++k) scaled[k] = sqrt_eigen_[k] * noise[k];
    fft_forward(scaled, out);
    std::vector<double> fgn(count_);
    for (std::size_t j = 0; j < count_; ++j) fgn[j] = out[j].real();
    return fgn;
}

std::vector<double> CirculantFgn::sample(Engine& engine) const {
    const auto noise = draw_noise(embedding_size(), engine);
    return transform(noise);
}

FbmSynthesizer::FbmSynthesizer(double hurst, std::size_t n)
    : sampler_(hurst, n) {}

SamplePath FbmSynthesizer::sample(std::uint64_t seed) const {
    auto engine = make_engine(seed);
    const auto fgn = sampler_.sample(engine);
    SamplePath path;
    path.n = n();
    path.values = cumulative_path(fgn, std::pow(static_cast<double>(path.n), -hurst()));
    path.provenance = FbmProvenance{hurst()};
    path.seed = seed;
    return path;
}

SamplePath simulate_fbm(double hurst, std::size_t n, std::uint64_t seed) {
    return FbmSynthesizer(hurst, n).sample(seed);
}

SamplePath simulate_fbm_cholesky(double hurst, std::size_t n, std::uint64_t seed) {
    check_hurst(hurst);
    if (n < 2 || n > 4096) throw std::invalid_argument("simulate_fbm_cholesky: n must be in [2, 4096]");
    const auto size = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd cov(size, size);
    for (Eigen::Index i = 0; i < size; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double s = static_cast<double>(i + 1) / static_cast<double>(n);
            const double t = static_cast<double>(j + 1) / static_cast<double>(n);
            cov(i, j) = cov(j, i) = fbm_covariance(hurst, s, t);
        }
    const Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("fBm covariance matrix is not positive definite");

    auto engine = make_engine(seed);
    std::normal_distribution<double> normal;
    Eigen::VectorXd z(size);
    for (Eigen::Index i = 0; i < size; ++i) z(i) = normal(engine);
    const Eigen::VectorXd x = llt.matrixL() * z;

    SamplePath path;
    path.n = n;
    path.values.assign(n + 1, 0.0);
    for (Eigen::Index i = 0; i < size; ++i) path.values[static_cast<std::size_t>(i) + 1] = x(i);
    path.provenance = FbmProvenance{hurst};
    path.seed = seed;
    return path;
}

double monotone_cubic(std::span<const double> x, std::span<const double> y, double at) {
    const std::size_t count = x.size();
    if (count < 2 || y.size() != count) throw std::invalid_argument("monotone_cubic: need >= 2 matching points");
    if (count == 2) {
        const double w = (at - x[0]) / (x[1] - x[0]);
        return (1.0 - w) * y[0] + w * y[1];
    }
    std::size_t i = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), at) - x.begin());
    i = std::clamp<std::size_t>(i, 1, count - 1) - 1;  // interval [x_i, x_{i+1}]

    auto h = [&](std::size_t k) { return x[k + 1] - x[k]; };
    auto delta = [&](std::size_t k) { return (y[k + 1] - y[k]) / h(k); };
    auto slope = [&](std::size_t k) {
        if (k == 0) return pchip_end_slope(h(0), h(1), delta(0), delta(1));
        if (k == count - 1)
            return pchip_end_slope(h(count - 2), h(count - 3), delta(count - 2), delta(count - 3));
        const double d0 = delta(k - 1), d1 = delta(k);
        if (d0 * d1 <= 0.0) return 0.0;
        const double w1 = 2.0 * h(k) + h(k - 1);
        const double w2 = h(k) + 2.0 * h(k - 1);
        return (w1 + w2) / (w1 / d0 + w2 / d1);
    };

    const double width = h(i);
    const double s = (at - x[i]) / width;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    return h00 * y[i] + h10 * width * slope(i) + h01 * y[i + 1] + h11 * width * slope(i + 1);
}

MbmSynthesizer::MbmSynthesizer(HurstFunction hurst, std::size_t n, std::size_t h_grid_size)
    : hurst_(std::move(hurst)), n_(n) {
    if (n < 2) throw std::invalid_argument("simulate_mbm: n must be >= 2");
    if (h_grid_size < 2) throw std::invalid_argument("simulate_mbm: h_grid_size must be >= 2");
    if (!(hurst_.range_lo() > 0.01 && hurst_.range_hi() < 0.99))
        throw RangeTooWide("Hurst function range must lie inside (0.01, 0.99)");

    if (hurst_.is_constant()) {
        h_grid_ = {hurst_.range_lo()};
    } else {
        const double lo = hurst_.range_lo(), hi = hurst_.range_hi();
        h_grid_.resize(h_grid_size);
        for (std::size_t i = 0; i < h_grid_size; ++i)
            h_grid_[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(h_grid_size - 1);
    }
    samplers_.reserve(h_grid_.size());
    for (double h : h_grid_) samplers_.emplace_back(h, n);
    target_h_.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) target_h_[k] = hurst_(static_cast<double>(k) / static_cast<double>(n));
}

SamplePath MbmSynthesizer::sample(std::uint64_t seed) const {
    auto engine = make_engine(seed);
    const auto noise = CirculantFgn::draw_noise(samplers_.front().embedding_size(), engine);

    SamplePath path;
    path.n = n_;
    path.provenance = MbmProvenance{hurst_};
    path.seed = seed;

    const auto grid_n = static_cast<double>(n_);
    if (samplers_.size() == 1) {
        path.values = cumulative_path(samplers_.front().transform(noise), std::pow(grid_n, -h_grid_.front()));
        return path;
    }

    // field[i][k] = B(t_k, H_i), all from the same noise.
    std::vector<std::vector<double>> field;
    field.reserve(samplers_.size());
    for (std::size_t i = 0; i < samplers_.size(); ++i)
        field.push_back(cumulative_path(samplers_[i].transform(noise), std::pow(grid_n, -h_grid_[i])));

    path.values.assign(n_ + 1, 0.0);
    std::vector<double> column(h_grid_.size());
    for (std::size_t k = 1; k <= n_; ++k) {
        for (std::size_t i = 0; i < field.size(); ++i) column[i] = field[i][k];
        path.values[k] = monotone_cubic(h_grid_, column, target_h_[k]);
    }
    return path;
}

SamplePath simulate_mbm(const HurstFunction& hurst, std::size_t n, std::uint64_t seed, std::size_t h_grid_size) {
    return MbmSynthesizer(hurst, n, h_grid_size).sample(seed);
}

}  // namespace irs
