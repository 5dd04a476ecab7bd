#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "irs/hurst_function.hpp"
#include "irs/rng.hpp"

namespace irs {

class EmbeddingNotPSD : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotPositiveDefinite : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RangeTooWide : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct FbmProvenance {
    double hurst;
};
struct MbmProvenance {
    HurstFunction hurst;
};
struct ExternalProvenance {};

using Provenance = std::variant<ExternalProvenance, FbmProvenance, MbmProvenance>;

/// Observations X(t_k), t_k = k / n, k = 0..n.
struct SamplePath {
    std::size_t n = 0;
    std::vector<double> values;
    Provenance provenance;
    std::optional<std::uint64_t> seed;

    [[nodiscard]] double t(std::size_t k) const { return static_cast<double>(k) / static_cast<double>(n); }
};

/// Wraps externally observed values; shifts them so the path starts at 0.
[[nodiscard]] SamplePath make_external_path(std::vector<double> values);

/// E[B_H(s) B_H(t)] = (t^{2H} + s^{2H} - |t - s|^{2H}) / 2.
[[nodiscard]] double fbm_covariance(double hurst, double s, double t);

/// Autocovariance of unit-lag fractional Gaussian noise,
/// (|j+1|^{2H} + |j-1|^{2H} - 2|j|^{2H}) / 2.
[[nodiscard]] double fgn_autocovariance(double hurst, std::size_t lag);

/// Exact sampler for `count` consecutive values of unit-lag fGn by
/// circulant embedding (Wood-Chan / Davies-Harte). The embedding size is
/// the first power of two >= 2 (count - 1) and depends only on `count`, so
/// samplers for different H can be driven by the same noise.
class CirculantFgn {
public:
    CirculantFgn(double hurst, std::size_t count);

    [[nodiscard]] static std::size_t embedding_size_for(std::size_t count);

    [[nodiscard]] double hurst() const noexcept { return hurst_; }
    [[nodiscard]] std::size_t count() const noexcept { return count_; }
    [[nodiscard]] std::size_t embedding_size() const noexcept { return sqrt_eigen_.size(); }

    /// Complex standard Gaussian noise of the embedding size (real and
    /// imaginary parts iid N(0, 1)).
    [[nodiscard]] static std::vector<std::complex<double>> draw_noise(std::size_t embedding_size, Engine& engine);

    /// Maps a noise vector to `count` fGn values.
    [[nodiscard]] std::vector<double> transform(std::span<const std::complex<double>> noise) const;

    [[nodiscard]] std::vector<double> sample(Engine& engine) const;

private:
    double hurst_;
    std::size_t count_;
    std::vector<double> sqrt_eigen_;  // sqrt(lambda_k / m)
};

/// fBm on t_k = k/n from n fGn increments scaled by n^{-H}. Holds the
/// circulant eigenvalues so repeated draws skip the setup FFT.
class FbmSynthesizer {
public:
    FbmSynthesizer(double hurst, std::size_t n);

    [[nodiscard]] SamplePath sample(std::uint64_t seed) const;

    [[nodiscard]] double hurst() const noexcept { return sampler_.hurst(); }
    [[nodiscard]] std::size_t n() const noexcept { return sampler_.count(); }

private:
    CirculantFgn sampler_;
};

/// One fBm path; identical to FbmSynthesizer(hurst, n).sample(seed).
[[nodiscard]] SamplePath simulate_fbm(double hurst, std::size_t n, std::uint64_t seed);

/// Exact fBm by Cholesky factorisation of the n x n covariance of
/// (X(t_1), ..., X(t_n)). Slow reference for n <= 4096.
[[nodiscard]] SamplePath simulate_fbm_cholesky(double hurst, std::size_t n, std::uint64_t seed);

/// Approximate mBm: fBm paths on an equispaced H grid spanning the range of
/// `hurst`, all driven by the same circulant noise, interpolated in H at
/// H(t_k) with a monotone (Fritsch-Carlson) cubic. A constant Hurst
/// function reproduces simulate_fbm(H, n, seed) exactly.
class MbmSynthesizer {
public:
    MbmSynthesizer(HurstFunction hurst, std::size_t n, std::size_t h_grid_size = 20);

    [[nodiscard]] SamplePath sample(std::uint64_t seed) const;

    [[nodiscard]] const HurstFunction& hurst() const noexcept { return hurst_; }
    [[nodiscard]] std::span<const double> h_grid() const noexcept { return h_grid_; }

private:
    HurstFunction hurst_;
    std::size_t n_;
    std::vector<double> h_grid_;
    std::vector<CirculantFgn> samplers_;
    std::vector<double> target_h_;  // H(t_k), k = 0..n
};

[[nodiscard]] SamplePath simulate_mbm(const HurstFunction& hurst, std::size_t n, std::uint64_t seed,
                                      std::size_t h_grid_size = 20);

/// Fritsch-Carlson monotone cubic through (x_i, y_i), evaluated at `at`.
/// x must be strictly increasing with at least two points.
[[nodiscard]] double monotone_cubic(std::span<const double> x, std::span<const double> y, double at);

}  // namespace irs
