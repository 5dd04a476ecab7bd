#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "irs/filters.hpp"
#include "irs/synthesis.hpp"

namespace irs {

class PathTooShort : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class TooFewIncrements : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class WindowTooSmall : public std::invalid_argument {
public:
    WindowTooSmall(std::size_t effective_pairs);
    [[nodiscard]] std::size_t effective_pairs() const noexcept { return effective_pairs_; }

private:
    std::size_t effective_pairs_;
};

/// Delta_a X(t_k) = sum_l a_l X(t_{k+l}), k = 0..n-L (every increment the
/// n + 1 observations support).
struct IncrementSeries {
    Filter filter;
    std::size_t n = 0;
    std::vector<double> values;
};

/// Index window {k : |t_k - t*| <= n^{-gamma}} clipped to [0, n-L-1].
struct LocalWindow {
    double gamma = 0.0;
    double t_star = 0.0;
    std::size_t lo = 0;
    std::size_t hi = 0;

    /// Nominal (unclipped) cardinality 2 n^{1-gamma} + 1.
    [[nodiscard]] static double nominal_size(std::size_t n, double gamma);
};

/// Smallest number of consecutive pairs a localized IRS will average.
inline constexpr std::size_t kMinWindowPairs = 8;

[[nodiscard]] IncrementSeries increments(std::span<const double> values, const Filter& f);
[[nodiscard]] IncrementSeries increments(const SamplePath& path, const Filter& f);

/// |x + y| / (|x| + |y|), and 1 when |x| + |y| underflows (covers (0, 0)).
[[nodiscard]] inline double psi(double x, double y) noexcept {
    const double denom = std::abs(x) + std::abs(y);
    if (denom < 1e-300) return 1.0;
    return std::abs(x + y) / denom;
}

/// Mean of psi over the n-L consecutive increment pairs.
[[nodiscard]] double irs(const IncrementSeries& inc);

/// Window for t* in (0, 1) and gamma in (0, 1) on a path of resolution n
/// with a filter of length L.
[[nodiscard]] LocalWindow make_window(std::size_t n, std::size_t filter_length, double gamma, double t_star);

struct LocalIrs {
    double value;
    std::size_t pairs;  // effective number of psi terms averaged
};

/// Mean of psi(Delta_k, Delta_{k+1}) for k in [w.lo, w.hi] (pairs that run
/// past the last increment are dropped). Throws WindowTooSmall below
/// kMinWindowPairs pairs.
[[nodiscard]] LocalIrs localized_irs(const IncrementSeries& inc, const LocalWindow& w);

}  // namespace irs
