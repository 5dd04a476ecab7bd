#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace irs {

/// Raised when a coefficient vector does not have the requested number of
/// vanishing moments.
class MomentConditionViolated : public std::invalid_argument {
public:
    MomentConditionViolated(int moment_index, bool zero_required);

    /// Index i of the offending moment sum_l a_l l^i.
    [[nodiscard]] int moment_index() const noexcept { return moment_index_; }
    /// True if moment i had to vanish but did not; false if moment p vanished.
    [[nodiscard]] bool zero_required() const noexcept { return zero_required_; }

private:
    int moment_index_;
    bool zero_required_;
};

/// Generalized-increment filter a = (a_0, ..., a_L) of order p:
/// sum_l a_l l^i = 0 for i < p and sum_l a_l l^p != 0.
///
/// Only constructible through validate_filter / binomial_filter, so every
/// instance satisfies the moment conditions.
class Filter {
public:
    static constexpr std::size_t kMaxLength = 32;

    [[nodiscard]] std::span<const double> coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] int order() const noexcept { return order_; }
    /// L, the largest lag; the filter has L + 1 taps.
    [[nodiscard]] std::size_t length() const noexcept { return coeffs_.size() - 1; }
    [[nodiscard]] double operator[](std::size_t l) const { return coeffs_[l]; }

    /// sum_l a_l l^i.
    [[nodiscard]] double moment(int i) const;

    /// True when the coefficients equal (-1)^{p-l} C(p, l) up to a global sign.
    [[nodiscard]] bool is_binomial() const noexcept;

    /// "binomial:p" for binomial filters, "coeffs:a0,a1,...:p=P" otherwise.
    [[nodiscard]] std::string spec() const;

    friend bool operator==(const Filter&, const Filter&) = default;

private:
    Filter(std::vector<double> coeffs, int order) : coeffs_(std::move(coeffs)), order_(order) {}

    std::vector<double> coeffs_;
    int order_;

    friend Filter validate_filter(std::span<const double>, int);
    friend Filter dilate(const Filter&, std::size_t);
};

/// Checks both moment conditions and returns the filter. Integer-valued
/// coefficients are checked exactly; otherwise |moment_i| is compared against
/// 1e-12 * sum_l |a_l| L^i.
[[nodiscard]] Filter validate_filter(std::span<const double> coeffs, int order_p);

[[nodiscard]] inline Filter validate_filter(const std::vector<double>& coeffs, int order_p) {
    return validate_filter(std::span<const double>(coeffs), order_p);
}

/// a_l = (-1)^{p-l} C(p, l), l = 0..p.
[[nodiscard]] Filter binomial_filter(int order_p);

/// sum_{l1,l2} a_{l1} a_{l2} |l1 - l2|^m with the convention 0^0 = 1.
///
/// For even m < 2p this vanishes. At m = 2p it equals
/// (-1)^p C(2p, p) (sum_l a_l l^p)^2; odd m generally gives a nonzero value.
[[nodiscard]] double double_moment_sum(const Filter& f, int m);

/// Filter with the taps of f placed at lags factor * l (zeros in between).
/// Same order as f.
[[nodiscard]] Filter dilate(const Filter& f, std::size_t factor);

/// Parses "binomial:p" or "coeffs:a0,a1,...:p=P".
[[nodiscard]] Filter parse_filter(std::string_view text);

}  // namespace irs
