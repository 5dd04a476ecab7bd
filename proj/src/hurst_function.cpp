#include "irs/hurst_function.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace irs {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double logistic(const HurstFunction::Logistic& g, double t) {
    return g.c0 + g.c1 / (1.0 + std::exp(-g.rate * (t - g.center)));
}

}  // namespace

HurstFunction::HurstFunction(Kind kind, double holder_eta) : kind_(std::move(kind)), holder_eta_(holder_eta) {
    if (!(holder_eta_ > 0.0)) throw std::invalid_argument("Hurst function: holder_eta must be positive");

    std::visit(overloaded{
                   [&](const Constant& c) { lo_ = hi_ = c.h; },
                   [&](const Linear& g) {
                       lo_ = std::min(g.alpha, g.alpha + g.beta);
                       hi_ = std::max(g.alpha, g.alpha + g.beta);
                   },
                   [&](const Periodic& g) {
                       // sin(pi t) sweeps [0, 1] on [0, 1].
                       lo_ = g.c0 + std::min(0.0, g.c1);
                       hi_ = g.c0 + std::max(0.0, g.c1);
                   },
                   [&](const Logistic& g) {
                       const double a = logistic(g, 0.0), b = logistic(g, 1.0);
                       lo_ = std::min(a, b);
                       hi_ = std::max(a, b);
                   },
                   [&](const Tabulated& g) {
                       if (g.t.size() < 2 || g.t.size() != g.h.size())
                           throw std::invalid_argument("tabulated Hurst function: need >= 2 matching (t, h) pairs");
                       if (!std::is_sorted(g.t.begin(), g.t.end()) ||
                           std::adjacent_find(g.t.begin(), g.t.end()) != g.t.end())
                           throw std::invalid_argument("tabulated Hurst function: t must be strictly increasing");
                       if (g.t.front() > 0.0 || g.t.back() < 1.0)
                           throw std::invalid_argument("tabulated Hurst function: grid must cover [0, 1]");
                       // Range over [0, 1]: knots inside plus the endpoint values.
                       lo_ = hi_ = (*this)(0.0);
                       for (std::size_t i = 0; i < g.t.size(); ++i)
                           if (g.t[i] >= 0.0 && g.t[i] <= 1.0) {
                               lo_ = std::min(lo_, g.h[i]);
                               hi_ = std::max(hi_, g.h[i]);
                           }
                       lo_ = std::min(lo_, (*this)(1.0));
                       hi_ = std::max(hi_, (*this)(1.0));
                   },
               },
               kind_);

    if (!(lo_ > 0.0 && hi_ < 1.0))
        throw std::invalid_argument("Hurst function range must lie inside (0, 1)");
}

double HurstFunction::operator()(double t) const {
    return std::visit(overloaded{
                          [](const Constant& c) { return c.h; },
                          [t](const Linear& g) { return g.alpha + g.beta * t; },
                          [t](const Periodic& g) { return g.c0 + g.c1 * std::sin(std::numbers::pi * t); },
                          [t](const Logistic& g) { return logistic(g, t); },
                          [t](const Tabulated& g) {
                              if (t <= g.t.front()) return g.h.front();
                              if (t >= g.t.back()) return g.h.back();
                              const auto it = std::upper_bound(g.t.begin(), g.t.end(), t);
                              const auto i = static_cast<std::size_t>(it - g.t.begin());
                              const double w = (t - g.t[i - 1]) / (g.t[i] - g.t[i - 1]);
                              return (1.0 - w) * g.h[i - 1] + w * g.h[i];
                          },
                      },
                      kind_);
}

std::string HurstFunction::name() const {
    return std::visit(overloaded{
                          [](const Constant& c) {
                              std::ostringstream os;
                              os << "constant(" << c.h << ")";
                              return os.str();
                          },
                          [](const Linear&) { return std::string("linear"); },
                          [](const Periodic&) { return std::string("periodic"); },
                          [](const Logistic&) { return std::string("logistic"); },
                          [](const Tabulated&) { return std::string("tabulated"); },
                      },
                      kind_);
}

std::string HurstFunction::to_json() const {
    nlohmann::json j = std::visit(
        overloaded{
            [](const Constant& c) { return nlohmann::json{{"kind", "constant"}, {"h", c.h}}; },
            [](const Linear& g) { return nlohmann::json{{"kind", "linear"}, {"alpha", g.alpha}, {"beta", g.beta}}; },
            [](const Periodic& g) { return nlohmann::json{{"kind", "periodic"}, {"c0", g.c0}, {"c1", g.c1}}; },
            [](const Logistic& g) {
                return nlohmann::json{
                    {"kind", "logistic"}, {"c0", g.c0}, {"c1", g.c1}, {"rate", g.rate}, {"center", g.center}};
            },
            [](const Tabulated& g) { return nlohmann::json{{"kind", "tabulated"}, {"t", g.t}, {"h", g.h}}; },
        },
        kind_);
    j["holder_eta"] = holder_eta_;
    return j.dump();
}

HurstFunction builtin_hurst_function(BuiltinHurst which) {
    switch (which) {
        case BuiltinHurst::linear: return HurstFunction(HurstFunction::Linear{0.1, 0.8});
        case BuiltinHurst::periodic: return HurstFunction(HurstFunction::Periodic{0.5, 0.3});
        case BuiltinHurst::logistic: return HurstFunction(HurstFunction::Logistic{0.3, 0.3, 100.0, 0.7});
    }
    throw std::invalid_argument("unknown builtin Hurst function");
}

BuiltinHurst parse_builtin_hurst(std::string_view name) {
    if (name == "linear") return BuiltinHurst::linear;
    if (name == "periodic") return BuiltinHurst::periodic;
    if (name == "logistic") return BuiltinHurst::logistic;
    throw std::invalid_argument("unknown Hurst function '" + std::string(name) +
                                "' (expected linear, periodic or logistic)");
}

HurstFunction hurst_function_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("Hurst function JSON: ") + e.what());
    }
    try {
        const auto kind = j.at("kind").get<std::string>();
        const double eta = j.value("holder_eta", 1.0);
        if (kind == "constant") return HurstFunction(HurstFunction::Constant{j.at("h").get<double>()}, eta);
        if (kind == "linear")
            return HurstFunction(HurstFunction::Linear{j.at("alpha").get<double>(), j.at("beta").get<double>()}, eta);
        if (kind == "periodic")
            return HurstFunction(HurstFunction::Periodic{j.at("c0").get<double>(), j.at("c1").get<double>()}, eta);
        if (kind == "logistic")
            return HurstFunction(HurstFunction::Logistic{j.at("c0").get<double>(), j.at("c1").get<double>(),
                                                         j.at("rate").get<double>(), j.at("center").get<double>()},
                                 eta);
        if (kind == "tabulated")
            return HurstFunction(
                HurstFunction::Tabulated{j.at("t").get<std::vector<double>>(), j.at("h").get<std::vector<double>>()},
                eta);
        throw std::invalid_argument("Hurst function JSON: unknown kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("Hurst function JSON: ") + e.what());
    }
}

}  // namespace irs
