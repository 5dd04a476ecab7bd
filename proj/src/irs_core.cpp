#include "irs/irs_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace irs {

WindowTooSmall::WindowTooSmall(std::size_t effective_pairs)
    : std::invalid_argument("local window holds " + std::to_string(effective_pairs) + " increment pairs (need >= " +
                            std::to_string(kMinWindowPairs) + ")"),
      effective_pairs_(effective_pairs) {}

double LocalWindow::nominal_size(std::size_t n, double gamma) {
    return 2.0 * std::pow(static_cast<double>(n), 1.0 - gamma) + 1.0;
}

IncrementSeries increments(std::span<const double> values, const Filter& f) {
    const std::size_t L = f.length();
    if (values.size() < L + 2)
        throw PathTooShort("path has " + std::to_string(values.size()) + " points; filter of length " +
                           std::to_string(L) + " needs at least " + std::to_string(L + 2));
    const std::size_t n = values.size() - 1;
    const auto a = f.coeffs();
    IncrementSeries inc{f, n, std::vector<double>(n + 1 - L)};
    for (std::size_t k = 0; k <= n - L; ++k) {
        double sum = 0.0;
        for (std::size_t l = 0; l <= L; ++l) sum += a[l] * values[k + l];
        inc.values[k] = sum;
    }
    return inc;
}

IncrementSeries increments(const SamplePath& path, const Filter& f) { return increments(path.values, f); }

double irs(const IncrementSeries& inc) {
    const auto& d = inc.values;
    if (d.size() < 2) throw TooFewIncrements("IRS needs at least two increments");
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < d.size(); ++k) sum += psi(d[k], d[k + 1]);
    return sum / static_cast<double>(d.size() - 1);
}

LocalWindow make_window(std::size_t n, std::size_t filter_length, double gamma, double t_star) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
    if (!(t_star > 0.0 && t_star < 1.0)) throw std::invalid_argument("t* must lie in (0, 1)");
    if (n < filter_length + 2) throw PathTooShort("path too short for the filter");
    const auto nd = static_cast<double>(n);
    const double half = std::pow(nd, 1.0 - gamma);
    const double last = static_cast<double>(n - filter_length - 1);
    const double lo = std::clamp(std::floor(nd * t_star - half), 0.0, last);
    const double hi = std::clamp(std::floor(nd * t_star + half), 0.0, last);
    return LocalWindow{gamma, t_star, static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

LocalIrs localized_irs(const IncrementSeries& inc, const LocalWindow& w) {
    const auto& d = inc.values;
    if (d.size() < 2) throw TooFewIncrements("IRS needs at least two increments");
    const std::size_t last_pair = d.size() - 2;
    const std::size_t hi = std::min(w.hi, last_pair);
    const std::size_t pairs = (w.lo > hi) ? 0 : hi - w.lo + 1;
    if (pairs < kMinWindowPairs) throw WindowTooSmall(pairs);
    double sum = 0.0;
    for (std::size_t k = w.lo; k <= hi; ++k) sum += psi(d[k], d[k + 1]);
    return {sum / static_cast<double>(pairs), pairs};
}

}  // namespace irs
