#include "irs/sigma2_table.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "irs/rng.hpp"
#include "irs/theory.hpp"

namespace irs {

// Defined in the generated sigma2_builtin.cpp (CSV text of data/*.csv).
extern const char* const kBuiltinSigma2Binomial1;
extern const char* const kBuiltinSigma2Binomial2;

namespace {

constexpr std::uint64_t kFallbackSeed = 0x1b5c2e77a0f34d91ULL;

Sigma2Table parse_builtin(const char* text) {
    std::istringstream in(text);
    return Sigma2Table::read_csv(in);
}

}  // namespace

Sigma2Table::Sigma2Table(std::string filter_spec, std::size_t n, std::size_t replicates, std::uint64_t seed,
                         std::vector<Sigma2Point> points)
    : filter_spec_(std::move(filter_spec)), n_(n), replicates_(replicates), seed_(seed), points_(std::move(points)) {
    std::sort(points_.begin(), points_.end(), [](const auto& a, const auto& b) { return a.hurst < b.hurst; });
}

double Sigma2Table::operator()(double hurst) const {
    if (points_.empty()) throw std::logic_error("Sigma2Table is empty");
    if (hurst <= points_.front().hurst) return points_.front().sigma2;
    if (hurst >= points_.back().hurst) return points_.back().sigma2;
    const auto it = std::upper_bound(points_.begin(), points_.end(), hurst,
                                     [](double h, const Sigma2Point& p) { return h < p.hurst; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (hurst - lo.hurst) / (hi.hurst - lo.hurst);
    return (1.0 - w) * lo.sigma2 + w * hi.sigma2;
}

Sigma2Table Sigma2Table::compute(const Filter& f, std::span<const double> hursts, std::size_t n,
                                 std::size_t replicates, std::uint64_t seed, std::size_t workers) {
    std::vector<Sigma2Point> points;
    points.reserve(hursts.size());
    for (std::size_t i = 0; i < hursts.size(); ++i) {
        const auto est = sigma2_mc(f, hursts[i], n, replicates, derive_seed(seed, i), workers);
        points.push_back({hursts[i], est.sigma2, est.std_error});
    }
    return Sigma2Table(f.spec(), n, replicates, seed, std::move(points));
}

Sigma2Table Sigma2Table::read_csv(std::istream& in) {
    std::string filter_spec;
    std::size_t n = 0, replicates = 0;
    std::uint64_t seed = 0;
    std::vector<Sigma2Point> points;
    bool header_seen = false;
    for (std::string line; std::getline(in, line);) {
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::istringstream meta(line.substr(1));
            for (std::string field; meta >> field;) {
                const auto eq = field.find('=');
                if (eq == std::string::npos) continue;
                const auto key = field.substr(0, eq), value = field.substr(eq + 1);
                if (key == "filter") filter_spec = value;
                else if (key == "n") n = std::stoull(value);
                else if (key == "replicates") replicates = std::stoull(value);
                else if (key == "seed") seed = std::stoull(value);
            }
            continue;
        }
        if (!header_seen) {
            if (line.rfind("hurst,sigma2,std_error", 0) != 0)
                throw std::runtime_error("sigma2 table: expected header 'hurst,sigma2,std_error'");
            header_seen = true;
            continue;
        }
        std::istringstream row(line);
        Sigma2Point p{};
        char c1 = 0, c2 = 0;
        if (!(row >> p.hurst >> c1 >> p.sigma2 >> c2 >> p.std_error) || c1 != ',' || c2 != ',')
            throw std::runtime_error("sigma2 table: malformed row '" + line + "'");
        points.push_back(p);
    }
    return Sigma2Table(filter_spec, n, replicates, seed, std::move(points));
}

void Sigma2Table::write_csv(std::ostream& out) const {
    out << "# filter=" << filter_spec_ << " n=" << n_ << " replicates=" << replicates_ << " seed=" << seed_ << '\n';
    out << "hurst,sigma2,std_error\n";
    const auto old = out.precision(17);
    for (const auto& p : points_) out << p.hurst << ',' << p.sigma2 << ',' << p.std_error << '\n';
    out.precision(old);
}

std::vector<double> default_sigma2_grid() {
    std::vector<double> grid;
    for (int i = 1; i <= 19; ++i) grid.push_back(0.05 * i);
    return grid;
}

const Sigma2Table& sigma2_table(const Filter& f) {
    static std::mutex mutex;
    static std::map<std::vector<double>, std::unique_ptr<Sigma2Table>> cache;

    // psi(-x, -y) = psi(x, y), so a filter and its negation share a table.
    std::vector<double> key(f.coeffs().begin(), f.coeffs().end());
    if (key.back() < 0)
        for (double& v : key) v = -v;

    std::lock_guard lock(mutex);
    auto& slot = cache[key];
    if (slot) return *slot;

    if (f.is_binomial() && (f.order() == 1 || f.order() == 2)) {
        auto table = parse_builtin(f.order() == 1 ? kBuiltinSigma2Binomial1 : kBuiltinSigma2Binomial2);
        if (!table.empty()) {
            slot = std::make_unique<Sigma2Table>(std::move(table));
            return *slot;
        }
    }
    const auto grid = default_sigma2_grid();
    slot = std::make_unique<Sigma2Table>(Sigma2Table::compute(f, grid, 4096, 200, kFallbackSeed));
    return *slot;
}

}  // namespace irs
