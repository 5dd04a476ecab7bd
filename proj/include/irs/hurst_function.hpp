#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace irs {

/// Built-in Hurst functions used in the mBm experiments.
enum class BuiltinHurst { linear, periodic, logistic };

/// t -> H(t) on [0, 1] with a declared Hölder exponent and its exact range.
class HurstFunction {
public:
    struct Constant { double h; };
    /// alpha + beta * t
    struct Linear { double alpha, beta; };
    /// c0 + c1 * sin(pi t)
    struct Periodic { double c0, c1; };
    /// c0 + c1 / (1 + exp(-rate (t - center)))
    struct Logistic { double c0, c1, rate, center; };
    /// Piecewise-linear interpolation through (t_i, h_i); t strictly increasing,
    /// covering [0, 1].
    struct Tabulated { std::vector<double> t, h; };

    using Kind = std::variant<Constant, Linear, Periodic, Logistic, Tabulated>;

    /// Throws std::invalid_argument if the range is not inside (0, 1) or the
    /// parameters are malformed.
    explicit HurstFunction(Kind kind, double holder_eta = 1.0);

    static HurstFunction constant(double h) { return HurstFunction(Constant{h}); }

    [[nodiscard]] double operator()(double t) const;

    [[nodiscard]] const Kind& kind() const noexcept { return kind_; }
    [[nodiscard]] bool is_constant() const noexcept { return std::holds_alternative<Constant>(kind_); }
    [[nodiscard]] double holder_eta() const noexcept { return holder_eta_; }
    [[nodiscard]] double range_lo() const noexcept { return lo_; }
    [[nodiscard]] double range_hi() const noexcept { return hi_; }

    /// Short human-readable name ("linear", "constant(0.6)", ...).
    [[nodiscard]] std::string name() const;

    /// JSON object with a "kind" field; inverse of hurst_function_from_json.
    [[nodiscard]] std::string to_json() const;

private:
    Kind kind_;
    double holder_eta_;
    double lo_ = 0.0;
    double hi_ = 0.0;
};

[[nodiscard]] HurstFunction builtin_hurst_function(BuiltinHurst which);

/// "linear" | "periodic" | "logistic"; throws on anything else.
[[nodiscard]] BuiltinHurst parse_builtin_hurst(std::string_view name);

/// Accepts {"kind": "constant", "h": ..}, {"kind": "linear", "alpha", "beta"},
/// {"kind": "periodic", "c0", "c1"}, {"kind": "logistic", "c0", "c1", "rate",
/// "center"}, {"kind": "tabulated", "t": [..], "h": [..]}, each with an
/// optional "holder_eta".
[[nodiscard]] HurstFunction hurst_function_from_json(std::string_view text);

}  // namespace irs
