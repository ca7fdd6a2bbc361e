#pragma once

// Weight functions h >= 0 (nondecreasing, int_1^inf h(t)/t^2 dt finite) and
// their companions g(y) = h(y^2).

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kkltype/errors.hpp"
#include "kkltype/quadrature.hpp"

namespace kkltype {

namespace detail {

// log(log(a + e^x)) with x = e^y, valid for any y including y > 709.
inline double log_log_shifted(double a, double y) {
  const double x = std::exp(y);
  if (!std::isfinite(x)) return y;
  if (x > 30.0) return y + std::log1p(std::log1p(a * std::exp(-x)) / x);
  return std::log(std::log(a + std::exp(x)));
}

}  // namespace detail

class WeightFunction {
 public:
  using Fn = std::function<double(double)>;

  /// `log_h_over_t` maps y to log(h(t)/t) at t = exp(exp(y)); it lets the
  /// tail of int h(t)/t^2 be integrated without forming t. When omitted it
  /// is derived from `h`, which limits the usable range to t < DBL_MAX.
  WeightFunction(std::string label, Fn h, Fn log_h_over_t = {})
      : label_(std::move(label)), h_(std::move(h)), log_h_over_t_(std::move(log_h_over_t)) {
    if (!h_) throw std::invalid_argument("weight function: missing evaluator");
    if (!log_h_over_t_) {
      derived_tail_ = true;
      log_h_over_t_ = [h = h_](double y) {
        const double x = std::exp(y);
        const double t = std::exp(x);
        if (!std::isfinite(t)) return -std::numeric_limits<double>::infinity();
        return std::log(h(t)) - x;
      };
    }
  }

  static WeightFunction one() {
    return {"one", [](double) { return 1.0; }, [](double y) { return -std::exp(y); }};
  }

  /// h(t) = t^alpha, alpha in [0, 1).
  static WeightFunction power(double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("pow weight needs alpha in [0, 1)");
    return {"pow:" + format_parameter(alpha), [alpha](double t) { return std::pow(t, alpha); },
            [alpha](double y) { return (alpha - 1.0) * std::exp(y); }};
  }

  static WeightFunction sqrt() {
    WeightFunction w = power(0.5);
    w.label_ = "sqrt";
    return w;
  }

  /// h(t) = t / log^{1+eps}(2+t).
  static WeightFunction t_over_log(double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("t-over-log weight needs eps > 0");
    return {"t-over-log:" + format_parameter(eps),
            [eps](double t) { return t / std::pow(std::log(2.0 + t), 1.0 + eps); },
            [eps](double y) { return -(1.0 + eps) * detail::log_log_shifted(2.0, y); }};
  }

  /// h(t) = t / (log(2+t) (log log(10+t))^{1+eps}).
  static WeightFunction t_over_loglog(double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("t-over-loglog weight needs eps > 0");
    return {"t-over-loglog:" + format_parameter(eps),
            [eps](double t) {
              return t / (std::log(2.0 + t) * std::pow(std::log(std::log(10.0 + t)), 1.0 + eps));
            },
            [eps](double y) {
              return -detail::log_log_shifted(2.0, y) -
                     (1.0 + eps) * std::log(detail::log_log_shifted(10.0, y));
            }};
  }

  /// Weight built from its companion g, with h(t) = g(sqrt(t)).
  static WeightFunction from_g(std::string label, Fn g) {
    return {std::move(label), [g = std::move(g)](double t) { return g(std::sqrt(t)); }};
  }

  /// Registry lookup: one, sqrt, pow:ALPHA, t-over-log:EPS, t-over-loglog:EPS.
  static WeightFunction parse(const std::string& label) {
    const auto colon = label.find(':');
    const std::string head = label.substr(0, colon);
    auto param = [&]() {
      if (colon == std::string::npos) throw std::invalid_argument("weight '" + label + "' needs a parameter");
      std::size_t used = 0;
      const double v = std::stod(label.substr(colon + 1), &used);
      if (used != label.size() - colon - 1) throw std::invalid_argument("weight '" + label + "': bad parameter");
      return v;
    };
    if (head == "one" && colon == std::string::npos) return one();
    if (head == "sqrt" && colon == std::string::npos) return sqrt();
    if (head == "pow") return power(param());
    if (head == "t-over-log") return t_over_log(param());
    if (head == "t-over-loglog") return t_over_loglog(param());
    throw std::invalid_argument("unknown weight function '" + label + "'");
  }

  const std::string& label() const noexcept { return label_; }
  double h(double t) const { return h_(t); }
  /// g(y) = h(y^2).
  double g(double y) const { return h_(y * y); }
  double log_h_over_t(double y) const { return log_h_over_t_(y); }
  /// True when log_h_over_t was derived from h and so stops at t = DBL_MAX.
  bool truncated_tail() const noexcept { return derived_tail_; }

 private:
  static std::string format_parameter(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
  }

  std::string label_;
  Fn h_;
  Fn log_h_over_t_;
  bool derived_tail_ = false;
};

/// Values above this are reported as a divergent weight integral.
inline constexpr double kWeightIntegralCap = 1e12;
/// Largest log-log tail density tolerated where a derived tail is cut off.
inline constexpr double kTruncatedTailLimit = 1e-3;

/// int_1^inf h(t)/t^2 dt.
///
/// Split at t = e. On [1, e] the variable is x = log t. On [e, inf) the
/// variable is y = log log t, mapped to [0, 1) by y = s/(1-s). The tail is
/// then driven by log(h/t) as a function of y, so slowly decaying weights
/// such as t/log^{1+eps} converge.
inline double weight_integral(const WeightFunction& w, const QuadratureSpec& quad = {}) {
  if (w.truncated_tail()) {
    const double y_edge = std::log(700.0);
    if (std::exp(w.log_h_over_t(y_edge) + y_edge) > kTruncatedTailLimit)
      throw std::domain_error("weight integral for '" + w.label() + "' does not decay by t = e^700");
  }
  auto head = integrate(
      [&](double x) {
        const double v = std::exp(w.log_h_over_t(std::log(x)));
        return std::isfinite(v) ? v : 0.0;
      },
      0.0, 1.0, quad);
  auto tail = integrate(
      [&](double s) {
        const double y = s / (1.0 - s);
        const double v = std::exp(w.log_h_over_t(y) + y - 2.0 * std::log1p(-s));
        return std::isnan(v) ? 0.0 : v;
      },
      0.0, 1.0, quad);
  const double total = head.value + tail.value;
  if (!std::isfinite(total) || total > kWeightIntegralCap)
    throw std::domain_error("weight integral for '" + w.label() + "' diverges");
  if (!head.converged || !tail.converged)
    throw QuadratureError("weight integral for '" + w.label() + "' did not converge", total,
                          head.error + tail.error);
  return total;
}

/// int_1^inf g(s)/s^3 ds, which equals half the weight integral of h.
inline double g_integral(const WeightFunction& w, const QuadratureSpec& quad = {}) {
  return 0.5 * weight_integral(w, quad);
}

/// Checks h >= 0 and nondecreasing on a log grid over [0, 1e8], and
/// 0 < int_1^inf h/t^2 < inf.
inline void validate_weight(const WeightFunction& w, const QuadratureSpec& quad = {}) {
  double prev = w.h(0.0);
  if (!(prev >= 0.0)) throw std::invalid_argument("weight '" + w.label() + "' is negative at 0");
  for (int k = -60; k <= 80; ++k) {
    const double t = std::pow(10.0, k / 10.0);
    const double v = w.h(t);
    if (!(v >= 0.0)) throw std::invalid_argument("weight '" + w.label() + "' is negative");
    if (v < prev * (1.0 - 1e-12))
      throw std::invalid_argument("weight '" + w.label() + "' is not nondecreasing");
    prev = v;
  }
  if (!(weight_integral(w, quad) > 0.0))
    throw std::invalid_argument("weight '" + w.label() + "' has zero integral");
}

}  // namespace kkltype
