#include "irs/filters.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

namespace irs {

namespace {

using BigInt = boost::multiprecision::cpp_int;

bool all_integer(std::span<const double> coeffs) {
    return std::all_of(coeffs.begin(), coeffs.end(), [](double c) {
        return std::isfinite(c) && std::nearbyint(c) == c && std::abs(c) < 9.0e15;
    });
}

// Exact: sum_l a_l l^i with integer taps.
BigInt exact_moment(std::span<const double> coeffs, int i) {
    BigInt sum = 0;
    for (std::size_t l = 0; l < coeffs.size(); ++l) {
        BigInt term = static_cast<long long>(coeffs[l]);
        term *= boost::multiprecision::pow(BigInt(l), static_cast<unsigned>(i));
        sum += term;
    }
    return sum;
}

double float_moment(std::span<const double> coeffs, int i) {
    long double sum = 0.0L;
    for (std::size_t l = 0; l < coeffs.size(); ++l)
        sum += static_cast<long double>(coeffs[l]) * std::pow(static_cast<long double>(l), i);
    return static_cast<double>(sum);
}

bool float_moment_vanishes(std::span<const double> coeffs, int i) {
    const auto L = static_cast<double>(coeffs.size() - 1);
    double scale = 0.0;
    for (double c : coeffs) scale += std::abs(c);
    scale *= std::pow(L, i);
    return std::abs(float_moment(coeffs, i)) <= 1e-12 * scale;
}

long long binomial_coefficient(int n, int k) {
    long long c = 1;
    for (int j = 1; j <= k; ++j) c = c * (n - k + j) / j;
    return c;
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

MomentConditionViolated::MomentConditionViolated(int moment_index, bool zero_required)
    : std::invalid_argument(
          "filter moment condition violated at index " + std::to_string(moment_index) +
          (zero_required ? ": moment is nonzero but must vanish" : ": moment vanishes but must be nonzero")),
      moment_index_(moment_index),
      zero_required_(zero_required) {}

double Filter::moment(int i) const { return float_moment(coeffs_, i); }

bool Filter::is_binomial() const noexcept {
    if (length() != static_cast<std::size_t>(order_)) return false;
    const double sign = coeffs_.back() > 0 ? 1.0 : -1.0;
    for (int l = 0; l <= order_; ++l) {
        const double expected = ((order_ - l) % 2 == 0 ? 1.0 : -1.0) * binomial_coefficient(order_, l);
        if (coeffs_[l] != sign * expected) return false;
    }
    return true;
}

std::string Filter::spec() const {
    if (is_binomial() && coeffs_.back() > 0) return "binomial:" + std::to_string(order_);
    std::string out = "coeffs:";
    for (std::size_t l = 0; l < coeffs_.size(); ++l) {
        if (l) out += ',';
        out += format_double(coeffs_[l]);
    }
    return out + ":p=" + std::to_string(order_);
}

Filter validate_filter(std::span<const double> coeffs, int order_p) {
    if (coeffs.empty()) throw std::invalid_argument("filter: empty coefficient vector");
    if (order_p < 1) throw std::invalid_argument("filter: order must be >= 1");
    if (coeffs.size() > Filter::kMaxLength + 1)
        throw std::invalid_argument("filter: at most 33 taps supported");

    if (all_integer(coeffs)) {
        for (int i = 0; i < order_p; ++i)
            if (exact_moment(coeffs, i) != 0) throw MomentConditionViolated(i, true);
        if (exact_moment(coeffs, order_p) == 0) throw MomentConditionViolated(order_p, false);
    } else {
        for (int i = 0; i < order_p; ++i)
            if (!float_moment_vanishes(coeffs, i)) throw MomentConditionViolated(i, true);
        if (float_moment_vanishes(coeffs, order_p)) throw MomentConditionViolated(order_p, false);
    }
    // A nonzero filter cannot have L + 1 vanishing moments, so an order above
    // L has already been reported as a moment failure.
    if (static_cast<std::size_t>(order_p) > coeffs.size() - 1)
        throw std::invalid_argument("filter: order must not exceed L = len(coeffs) - 1");
    return Filter(std::vector<double>(coeffs.begin(), coeffs.end()), order_p);
}

Filter binomial_filter(int order_p) {
    if (order_p < 1 || order_p > static_cast<int>(Filter::kMaxLength))
        throw std::invalid_argument("binomial filter order must be in [1, 32]");
    std::vector<double> a(static_cast<std::size_t>(order_p) + 1);
    for (int l = 0; l <= order_p; ++l)
        a[l] = ((order_p - l) % 2 == 0 ? 1.0 : -1.0) * static_cast<double>(binomial_coefficient(order_p, l));
    return validate_filter(a, order_p);
}

double double_moment_sum(const Filter& f, int m) {
    if (m < 0) throw std::invalid_argument("double_moment_sum: m must be >= 0");
    const auto a = f.coeffs();
    long double sum = 0.0L;
    for (std::size_t l1 = 0; l1 < a.size(); ++l1)
        for (std::size_t l2 = 0; l2 < a.size(); ++l2) {
            const auto d = static_cast<long double>(l1 > l2 ? l1 - l2 : l2 - l1);
            const long double power = (m == 0) ? 1.0L : std::pow(d, m);
            sum += static_cast<long double>(a[l1]) * a[l2] * power;
        }
    return static_cast<double>(sum);
}

Filter dilate(const Filter& f, std::size_t factor) {
    if (factor == 0) throw std::invalid_argument("dilate: factor must be >= 1");
    std::vector<double> a(f.length() * factor + 1, 0.0);
    for (std::size_t l = 0; l <= f.length(); ++l) a[l * factor] = f[l];
    // Dilation rescales moment i by factor^i, so the order is preserved; the
    // result may exceed kMaxLength, which only bounds user-supplied filters.
    return Filter(std::move(a), f.order());
}

Filter parse_filter(std::string_view text) {
    auto parse_int = [&](std::string_view s) {
        int v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size())
            throw std::invalid_argument("filter spec: bad integer '" + std::string(s) + "'");
        return v;
    };

    constexpr std::string_view kBinomial = "binomial:";
    constexpr std::string_view kCoeffs = "coeffs:";
    if (text.starts_with(kBinomial)) return binomial_filter(parse_int(text.substr(kBinomial.size())));

    if (text.starts_with(kCoeffs)) {
        const auto body = text.substr(kCoeffs.size());
        const auto sep = body.find(":p=");
        if (sep == std::string_view::npos)
            throw std::invalid_argument("filter spec: expected 'coeffs:a0,a1,...:p=P'");
        std::vector<double> coeffs;
        std::string list(body.substr(0, sep));
        std::istringstream in(list);
        for (std::string item; std::getline(in, item, ',');) {
            try {
                std::size_t used = 0;
                coeffs.push_back(std::stod(item, &used));
                if (used != item.size()) throw std::invalid_argument(item);
            } catch (const std::exception&) {
                throw std::invalid_argument("filter spec: bad coefficient '" + item + "'");
            }
        }
        return validate_filter(coeffs, parse_int(body.substr(sep + 3)));
    }
    throw std::invalid_argument("filter spec must start with 'binomial:' or 'coeffs:'");
}

}  // namespace irs
