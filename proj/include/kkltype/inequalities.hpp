#pragma once

// Evaluators for the variance/influence inequalities on the cube, and the
// one-dimensional kernels their proofs integrate.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kkltype/cube.hpp"
#include "kkltype/normed.hpp"
#include "kkltype/quadrature.hpp"
#include "kkltype/report.hpp"
#include "kkltype/weights.hpp"

namespace kkltype {

/// 2 e sqrt(2 pi), the vector KKL constant.
inline const double kKklVectorConstant = 2.0 * std::numbers::e * std::sqrt(2.0 * std::numbers::pi);
inline constexpr double kKklBooleanConstant = 4.0;
inline constexpr double kKklCorollaryConstant = 0.2;
inline constexpr double kTalagrandConstant = 12.0;

/// Per-coordinate bounds ||D_j f||_1 <= a_j and ||D_j f||_p <= b_j.
struct DerivativeBounds {
  enum class Source { measured, supplied };

  std::vector<double> a;
  std::vector<double> b;
  Source source = Source::supplied;

  DerivativeBounds(std::vector<double> a_, std::vector<double> b_, Source src = Source::supplied)
      : a(std::move(a_)), b(std::move(b_)), source(src) {
    if (a.size() != b.size()) throw std::invalid_argument("derivative bounds: a and b differ in length");
    bool any = false;
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (!(a[j] >= 0.0) || !(b[j] >= a[j]))
        throw std::invalid_argument("derivative bounds: need 0 <= a_j <= b_j at j = " + std::to_string(j + 1));
      any = any || b[j] > 0.0;
    }
    if (!any && src == Source::supplied) throw std::invalid_argument("derivative bounds: all b_j are zero");
  }

  /// max over b_j > 0 of a_j / b_j; nullopt when every b_j is zero.
  std::optional<double> max_ratio() const {
    std::optional<double> m;
    for (std::size_t j = 0; j < a.size(); ++j)
      if (b[j] > 0.0) m = std::max(m.value_or(0.0), std::min(1.0, a[j] / b[j]));
    return m;
  }
};

/// a_j = ||D_j f||_1 and b_j = ||D_j f||_p.
inline DerivativeBounds measure_bounds(const CubeFunction& f, double p, const NormedSpace& space) {
  std::vector<double> a, b;
  for (int j = 1; j <= f.n(); ++j) {
    const CubeFunction dj = derivative(f, j);
    a.push_back(lp_norm(dj, 1.0, space));
    b.push_back(std::max(a.back(), lp_norm(dj, p, space)));
  }
  return DerivativeBounds(std::move(a), std::move(b), DerivativeBounds::Source::measured);
}

namespace detail {

inline std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

inline ReportInputs inputs_of(const CubeFunction& f, const NormedSpace& space, std::string params = {}) {
  return {f.n(), f.d(), space.describe(), std::move(params)};
}

inline ReportInputs inputs_of(const CubeFunction& f, std::string params = {}) {
  return {f.n(), f.d(), "R", std::move(params)};
}

inline void require_space(const CubeFunction& f, const NormedSpace& space) {
  if (f.d() != space.d())
    throw std::invalid_argument("function has d = " + std::to_string(f.d()) + " but the space has d = " +
                                std::to_string(space.d()));
}

inline CubeFunction centered(const CubeFunction& f) {
  const std::vector<double> m = f.mean();
  std::vector<double> data = f.data();
  const std::size_t D = static_cast<std::size_t>(f.d());
  for (std::size_t k = 0; k < data.size(); ++k) data[k] -= m[k % D];
  return CubeFunction(f.n(), f.d(), std::move(data));
}

inline double boolean_variance(const CubeFunction& f) {
  double plus = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f(i) == 1.0) plus += 1.0;
  const double mean = (2.0 * plus - static_cast<double>(f.size())) / static_cast<double>(f.size());
  return 1.0 - mean * mean;
}

inline void require_boolean(const CubeFunction& f, const char* who) {
  if (!f.is_boolean()) throw std::invalid_argument(std::string(who) + ": function is not boolean");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Kernels

/// int_0^inf a^{theta_p(t)} dt / sqrt(e^{2t}-1) with
/// theta_p = (1 - e^{-2t}) / (1 + (p-1) e^{-2t}).
inline double kernel_integral(double a, double p, const QuadratureSpec& quad = {}) {
  if (!(a > 0.0 && a <= 1.0)) throw std::domain_error("kernel_integral: a must lie in (0, 1]");
  if (!(p >= 1.0)) throw std::domain_error("kernel_integral: p must be >= 1");
  const double log_a = std::log(a);
  // The integrand in w is a bump of width ~ 1/sqrt(log(1/a)); seed a cut there.
  std::vector<double> cuts;
  if (log_a < -1.0) cuts.push_back(1.0 / std::sqrt(-log_a));
  auto r = integrate_heat_time([&](double w) { return std::exp(HeatTimeMap::theta(w, p) * log_a); }, quad,
                               cuts);
  if (!r.converged) throw QuadratureError("kernel_integral did not converge", r.value, r.error);
  return r.value;
}

/// e sqrt(pi) / sqrt(log(e/a)).
inline double kernel_gaussian_bound(double a) {
  if (!(a > 0.0 && a <= 1.0)) throw std::domain_error("kernel_gaussian_bound: a must lie in (0, 1]");
  return std::numbers::e * std::sqrt(std::numbers::pi) / std::sqrt(1.0 - std::log(a));
}

// ---------------------------------------------------------------------------
// Evaluators

/// E|f - Ef|^2 <= sum_j E|D_j f|^2. Informational unless f is scalar.
inline InequalityReport eval_poincare(const CubeFunction& f, const NormedSpace& space) {
  detail::require_space(f, space);
  const double var2 = std::pow(lp_norm(detail::centered(f), 2.0, space), 2.0);
  double rhs = 0.0;
  for (int j = 1; j <= f.n(); ++j) rhs += std::pow(derivative_norm(f, j, 2.0, space), 2.0);
  InequalityReport r = make_report("poincare", var2, rhs, 1.0, detail::inputs_of(f, space));
  if (f.d() != 1) {
    r.constant_specified = false;
    r.note = "vector-valued; informational only";
  }
  return r;
}

/// ||f - Ef||_2 <= 2e sqrt(2pi) T2 (sum b_k^2)^{1/2} / sqrt(log(e / max a_j/b_j)).
///
/// Extras: the same bound with the logarithm not square-rooted
/// (`rhs_unrooted_log`, the weaker form), the measured max ratio, and the
/// metric form E|f(e)-f(e')|^2 <= T^2/log(e/max) sum_j E|f(e)-f(e^{+j})|^2
/// with T = 2e sqrt(2pi) T2 (`metric_lhs`, `metric_rhs`).
inline InequalityReport eval_kkl_vector(const CubeFunction& f, const NormedSpace& space, double t2,
                                        std::optional<DerivativeBounds> bounds = std::nullopt,
                                        const EnergyOptions& energy = {}) {
  detail::require_space(f, space);
  if (!(t2 >= 1.0)) throw std::invalid_argument("eval_kkl_vector: T2 must be >= 1");
  const DerivativeBounds measured = measure_bounds(f, 2.0, space);
  const DerivativeBounds& used = bounds ? *bounds : measured;
  if (static_cast<int>(used.a.size()) != f.n())
    throw std::invalid_argument("eval_kkl_vector: bounds must have one entry per coordinate");

  const double lhs = lp_norm(detail::centered(f), 2.0, space);
  double sum_b2 = 0.0;
  for (double b : used.b) sum_b2 += b * b;
  const std::optional<double> ratio = used.max_ratio();
  const double log_term = ratio ? 1.0 - std::log(*ratio) : 1.0;
  const double rhs = ratio ? kKklVectorConstant * t2 * std::sqrt(sum_b2) / std::sqrt(log_term) : 0.0;
  if (!ratio && lhs > 0.0) throw std::logic_error("eval_kkl_vector: nonconstant f with zero derivatives");

  InequalityReport r = make_report("kkl_vector", lhs, rhs, kKklVectorConstant * t2,
                                   detail::inputs_of(f, space, "T2=" + detail::format_double(t2)));
  r.extras.emplace_back("max_ratio", ratio.value_or(0.0));
  r.extras.emplace_back("sum_b2", sum_b2);
  r.extras.emplace_back("rhs_unrooted_log", ratio ? kKklVectorConstant * t2 * std::sqrt(sum_b2) / log_term : 0.0);

  // Metric form, always from the measured derivatives.
  const VarianceEnergy ve = variance_and_energy(f, space, energy);
  double edges = 0.0;
  for (double b : measured.b) edges += 4.0 * b * b;
  const std::optional<double> mratio = measured.max_ratio();
  const double tk = kKklVectorConstant * t2;
  const double metric_rhs = mratio ? tk * tk / (1.0 - std::log(*mratio)) * edges : 0.0;
  r.extras.emplace_back("metric_lhs", ve.energy);
  r.extras.emplace_back("metric_rhs", metric_rhs);
  r.extras.emplace_back("metric_pass", holds(ve.energy, metric_rhs) ? 1.0 : 0.0);
  if (!holds(ve.energy, metric_rhs)) r.pass = false;
  if (bounds) r.note = "supplied derivative bounds";
  return r;
}

/// ||f - Ef||_p <= 2e sqrt(2pi) Tp (sum b_j^p)^{1/p} / sqrt(log(e / max a_j/b_j)),
/// a_j >= ||D_j f||_1, b_j >= ||D_j f||_p, p in [1, 2].
inline InequalityReport eval_type_p(const CubeFunction& f, const NormedSpace& space, double p, double tp,
                                    std::optional<DerivativeBounds> bounds = std::nullopt) {
  detail::require_space(f, space);
  if (!(p >= 1.0 && p <= 2.0)) throw std::invalid_argument("eval_type_p: p must lie in [1, 2]");
  if (!(tp >= 1.0)) throw std::invalid_argument("eval_type_p: Tp must be >= 1");
  const DerivativeBounds used = bounds ? *bounds : measure_bounds(f, p, space);
  if (static_cast<int>(used.a.size()) != f.n())
    throw std::invalid_argument("eval_type_p: bounds must have one entry per coordinate");

  const double lhs = lp_norm(detail::centered(f), p, space);
  double sum_bp = 0.0;
  for (double b : used.b) sum_bp += std::pow(b, p);
  const std::optional<double> ratio = used.max_ratio();
  const double rhs =
      ratio ? kKklVectorConstant * tp * std::pow(sum_bp, 1.0 / p) / std::sqrt(1.0 - std::log(*ratio)) : 0.0;
  InequalityReport r = make_report(
      "type_p", lhs, rhs, kKklVectorConstant * tp,
      detail::inputs_of(f, space, "p=" + detail::format_double(p) + ";Tp=" + detail::format_double(tp)));
  r.extras.emplace_back("max_ratio", ratio.value_or(0.0));
  if (bounds) r.note = "supplied derivative bounds";
  return r;
}

/// ||f - Ef||_2 <= 12 T2 (int_1^inf h/t^2)^{1/2} (sum_j ||D_j f||_2^2 / h(log(||D_j f||_2/||D_j f||_1)))^{1/2}.
inline InequalityReport eval_talagrand_general(const CubeFunction& f, const NormedSpace& space,
                                               const WeightFunction& h, double t2,
                                               const QuadratureSpec& quad = {}) {
  detail::require_space(f, space);
  if (!(t2 >= 1.0)) throw std::invalid_argument("eval_talagrand_general: T2 must be >= 1");
  const double w = weight_integral(h, quad);
  const double lhs = lp_norm(detail::centered(f), 2.0, space);
  double sum = 0.0;
  bool infinite = false;
  for (int j = 1; j <= f.n(); ++j) {
    const CubeFunction dj = derivative(f, j);
    const double b = lp_norm(dj, 2.0, space);
    if (b == 0.0) continue;
    const double a = lp_norm(dj, 1.0, space);
    const double hv = h.h(std::max(0.0, std::log(b / a)));
    if (hv == 0.0) {
      infinite = true;
      continue;
    }
    sum += b * b / hv;
  }
  const double rhs = infinite ? kInfinity : kTalagrandConstant * t2 * std::sqrt(w) * std::sqrt(sum);
  InequalityReport r = make_report("talagrand", lhs, rhs, kTalagrandConstant * t2,
                                   detail::inputs_of(f, space, "h=" + h.label() + ";T2=" + detail::format_double(t2)));
  r.extras.emplace_back("weight_integral", w);
  if (infinite) r.note = "h vanishes at a coordinate's log-ratio; rhs is infinite";
  return r;
}

/// ||f - Ef||_2 <= (C/sqrt(eps)) (sum_j ||D_j f||_2^2 / log^{1-eps}(||D_j f||_2/||D_j f||_1))^{1/2}.
/// C is not known, so rhs is the unit-constant form and `constant_used` is the
/// empirical constant lhs / rhs.
inline InequalityReport eval_talagrand_eps_ratio(const CubeFunction& f, const NormedSpace& space, double eps) {
  detail::require_space(f, space);
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eval_talagrand_eps_ratio: eps must lie in (0, 1)");
  const double lhs = lp_norm(detail::centered(f), 2.0, space);
  double sum = 0.0;
  bool infinite = false;
  for (int j = 1; j <= f.n(); ++j) {
    const CubeFunction dj = derivative(f, j);
    const double b = lp_norm(dj, 2.0, space);
    if (b == 0.0) continue;
    const double a = lp_norm(dj, 1.0, space);
    const double lg = std::max(0.0, std::log(b / a));
    if (lg == 0.0) {
      infinite = true;
      continue;
    }
    sum += b * b / std::pow(lg, 1.0 - eps);
  }
  const double rhs = infinite ? kInfinity : std::sqrt(sum / eps);
  const double empirical = (lhs == 0.0 || infinite) ? 0.0 : lhs / rhs;
  InequalityReport r =
      make_report("talagrand_eps", lhs, rhs, empirical, detail::inputs_of(f, space, "eps=" + detail::format_double(eps)));
  r.constant_specified = false;
  r.note = infinite ? "log-ratio vanishes at a coordinate; empirical constant 0" : "empirical constant";
  return r;
}

/// Var f <= 4 / log(e / max_k Inf_k) * sum_j Inf_j for boolean f.
inline InequalityReport eval_kkl_boolean(const CubeFunction& f) {
  detail::require_boolean(f, "eval_kkl_boolean");
  const double var = detail::boolean_variance(f);
  const std::vector<double> inf = influences(f);
  double total = 0.0, top = 0.0;
  for (double x : inf) {
    total += x;
    top = std::max(top, x);
  }
  const double rhs = top > 0.0 ? kKklBooleanConstant / (1.0 - std::log(top)) * total : 0.0;
  InequalityReport r = make_report("kkl_boolean", var, rhs, kKklBooleanConstant, detail::inputs_of(f));
  r.extras.emplace_back("max_influence", top);
  r.extras.emplace_back("total_influence", total);
  return r;
}

/// max_k Inf_k >= (1/5) Var f log(n) / n; lhs is the claimed lower bound.
inline InequalityReport eval_kkl_corollary(const CubeFunction& f) {
  detail::require_boolean(f, "eval_kkl_corollary");
  const double var = detail::boolean_variance(f);
  const std::vector<double> inf = influences(f);
  const double top = inf.empty() ? 0.0 : *std::max_element(inf.begin(), inf.end());
  const double n = static_cast<double>(f.n());
  const double lhs = f.n() >= 1 ? kKklCorollaryConstant * var * std::log(n) / n : 0.0;
  InequalityReport r = make_report("kkl_corollary", lhs, top, kKklCorollaryConstant, detail::inputs_of(f));
  r.extras.emplace_back("variance", var);
  return r;
}

/// Thrown when (p, q, t) lies outside e^{-2t} <= (p-1)/(q-1), 1 < p <= q < inf.
class HypercontractivityRegionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline bool hypercontractive_region(double p, double q, double t) {
  return p > 1.0 && q >= p && std::isfinite(q) && t >= 0.0 && std::exp(-2.0 * t) <= (p - 1.0) / (q - 1.0) * (1.0 + kPassGrace);
}

/// ||P_t f||_q <= ||f||_p. Refuses parameters outside the admissible region.
inline InequalityReport check_hypercontractivity(const CubeFunction& f, double p, double q, double t,
                                                 const NormedSpace& space) {
  detail::require_space(f, space);
  if (!hypercontractive_region(p, q, t))
    throw HypercontractivityRegionError("hypercontractivity: (p, q, t) = (" + detail::format_double(p) + ", " +
                                        detail::format_double(q) + ", " + detail::format_double(t) +
                                        ") is outside e^{-2t} <= (p-1)/(q-1)");
  const double lhs = lp_norm(heat(f, t), q, space);
  const double rhs = lp_norm(f, p, space);
  return make_report("hypercontractivity", lhs, rhs, 1.0,
                     detail::inputs_of(f, space,
                                       "p=" + detail::format_double(p) + ";q=" + detail::format_double(q) +
                                           ";t=" + detail::format_double(t)));
}

/// 2^{3/2} T2 int_0^inf (sum_j ||D_j P_t f||_2^2)^{1/2} dt / sqrt(e^{2t}-1),
/// the intermediate bound between ||f - Ef||_2 and the final vector KKL bound.
inline double heat_chain_bound(const CubeFunction& f, const NormedSpace& space, double t2,
                               const QuadratureSpec& quad = {}) {
  detail::require_space(f, space);
  const WalshSpectrum spectrum = walsh_transform(f);
  auto r = integrate_heat_time(
      [&](double w) {
        const double t = HeatTimeMap::time(w);
        if (!std::isfinite(t)) return 0.0;
        const CubeFunction pt =
            inverse_walsh(scale_by_degree(spectrum, [t](int k) { return std::exp(-t * k); }));
        double s = 0.0;
        for (int j = 1; j <= f.n(); ++j) s += std::pow(derivative_norm(pt, j, 2.0, space), 2.0);
        return std::sqrt(s);
      },
      quad);
  if (!r.converged) throw QuadratureError("heat_chain_bound did not converge", r.value, r.error);
  return 2.0 * std::numbers::sqrt2 * t2 * r.value;
}

/// Metric KKL form for an index-valued f into a finite metric space with a
/// caller-chosen constant T; informational (no constant is known in general).
inline InequalityReport eval_metric_kkl(const CubeFunction& f, const FiniteMetricSpace& space, double t) {
  const MetricEnergyTerms terms = metric_energy_terms(f, space);
  double edges = 0.0, top = 0.0;
  for (std::size_t j = 0; j < terms.edge_terms.size(); ++j) {
    edges += terms.edge_terms[j];
    top = std::max(top, terms.ratio_terms[j]);
  }
  const double rhs = top > 0.0 ? t * t / (1.0 - std::log(top)) * edges : 0.0;
  InequalityReport r = make_report("metric_kkl", terms.lhs, rhs, t,
                                   {f.n(), 1, "metric:" + std::to_string(space.size()), "T=" + detail::format_double(t)});
  r.constant_specified = false;
  return r;
}

}  // namespace kkltype
