#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "irs/filters.hpp"

namespace irs {

struct Sigma2Point {
    double hurst;
    double sigma2;
    double std_error;
};

/// Sigma^2_a(H) on an H grid, linearly interpolated and clamped to the
/// grid ends. Backs the delta-method confidence intervals.
class Sigma2Table {
public:
    Sigma2Table() = default;
    Sigma2Table(std::string filter_spec, std::size_t n, std::size_t replicates, std::uint64_t seed,
                std::vector<Sigma2Point> points);

    [[nodiscard]] double operator()(double hurst) const;

    [[nodiscard]] bool empty() const noexcept { return points_.empty(); }
    [[nodiscard]] const std::vector<Sigma2Point>& points() const noexcept { return points_; }
    [[nodiscard]] const std::string& filter_spec() const noexcept { return filter_spec_; }
    [[nodiscard]] std::size_t n() const noexcept { return n_; }
    [[nodiscard]] std::size_t replicates() const noexcept { return replicates_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

    /// One sigma2_mc run per H value; replicate seeds derive from
    /// derive_seed(seed, i) for the i-th H value.
    [[nodiscard]] static Sigma2Table compute(const Filter& f, std::span<const double> hursts, std::size_t n,
                                             std::size_t replicates, std::uint64_t seed, std::size_t workers = 0);

    /// Format: "# filter=<spec> n=<n> replicates=<M> seed=<s>" then
    /// "hurst,sigma2,std_error" and one row per grid point.
    [[nodiscard]] static Sigma2Table read_csv(std::istream& in);
    void write_csv(std::ostream& out) const;

private:
    std::string filter_spec_;
    std::size_t n_ = 0;
    std::size_t replicates_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<Sigma2Point> points_;
};

/// H = 0.05, 0.10, ..., 0.95.
[[nodiscard]] std::vector<double> default_sigma2_grid();

/// Table shipped with the library for binomial filters of order 1 and 2;
/// for any other filter a coarser table (n = 4096, 200 replicates) is
/// computed on first use and cached. Thread-safe.
[[nodiscard]] const Sigma2Table& sigma2_table(const Filter& f);

}  // namespace irs
