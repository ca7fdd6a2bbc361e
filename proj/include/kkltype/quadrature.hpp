#pragma once

// Globally adaptive 15-point Gauss-Kronrod integration (QUADPACK QAG/QAGP
// strategy) for scalar and vector-valued integrands, plus the change of
// variables used for every improper t-integral against dt/sqrt(e^{2t}-1).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "kkltype/errors.hpp"

namespace kkltype {

struct QuadratureSpec {
  double rel_tol = 1e-9;
  double abs_tol = 1e-14;
  std::size_t max_panels = 4000;

  void validate() const {
    if (!(rel_tol > 0.0)) throw std::invalid_argument("quadrature: relative tolerance must be > 0");
    if (!(abs_tol >= 0.0)) throw std::invalid_argument("quadrature: absolute floor must be >= 0");
    if (max_panels < 1) throw std::invalid_argument("quadrature: max_panels must be >= 1");
  }
};

template <class Value>
struct QuadratureResult {
  Value value;
  double error = 0.0;
  std::size_t panels = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// 7-point Gauss weights; the Gauss nodes are the odd Kronrod nodes and 0.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo;
  double hi;
  std::vector<double> value;
  double error;
};

// One G7-K15 panel. `fn(x, out)` writes dim components into out.
template <class Fn>
Panel gk15(Fn& fn, std::size_t dim, double lo, double hi) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double tiny = std::numeric_limits<double>::min();
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  std::array<std::vector<double>, 15> f;
  for (auto& v : f) v.assign(dim, 0.0);
  fn(center, std::span<double>(f[7]));
  for (int k = 0; k < 7; ++k) {
    const double dx = half * kKronrodNodes[k];
    fn(center - dx, std::span<double>(f[k]));
    fn(center + dx, std::span<double>(f[14 - k]));
  }

  Panel p{lo, hi, std::vector<double>(dim), 0.0};
  for (std::size_t c = 0; c < dim; ++c) {
    double kron = kKronrodWeights[7] * f[7][c];
    double gauss = kGaussWeights[3] * f[7][c];
    double abs_sum = std::abs(kron);
    for (int k = 0; k < 7; ++k) {
      const double pair = f[k][c] + f[14 - k][c];
      kron += kKronrodWeights[k] * pair;
      abs_sum += kKronrodWeights[k] * (std::abs(f[k][c]) + std::abs(f[14 - k][c]));
      if (k % 2 == 1) gauss += kGaussWeights[k / 2] * pair;
    }
    const double mean = 0.5 * kron;
    double asc = kKronrodWeights[7] * std::abs(f[7][c] - mean);
    for (int k = 0; k < 7; ++k)
      asc += kKronrodWeights[k] * (std::abs(f[k][c] - mean) + std::abs(f[14 - k][c] - mean));

    const double result = kron * half;
    const double res_abs = abs_sum * std::abs(half);
    const double res_asc = asc * std::abs(half);
    double err = std::abs((kron - gauss) * half);
    if (res_asc != 0.0 && err != 0.0) err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
    if (res_abs > tiny / (50.0 * eps)) err = std::max(50.0 * eps * res_abs, err);
    p.value[c] = result;
    p.error = std::max(p.error, err);
  }
  return p;
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

template <class Fn>
QuadratureResult<std::vector<double>> adaptive(Fn& fn, std::size_t dim, std::span<const double> cuts,
                                               const QuadratureSpec& spec) {
  spec.validate();
  std::vector<Panel> panels;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] > cuts[i]) panels.push_back(gk15(fn, dim, cuts[i], cuts[i + 1]));

  QuadratureResult<std::vector<double>> out{std::vector<double>(dim, 0.0)};
  std::size_t evaluations = 15 * panels.size();

  auto totals = [&](std::vector<double>& value) {
    std::fill(value.begin(), value.end(), 0.0);
    double error = 0.0;
    for (const Panel& p : panels) {
      for (std::size_t c = 0; c < dim; ++c) value[c] += p.value[c];
      error += p.error;
    }
    return error;
  };

  std::vector<double> value(dim);
  double error = totals(value);
  while (true) {
    const double target = std::max(spec.abs_tol, spec.rel_tol * max_abs(value));
    if (error <= target) {
      out.converged = true;
      break;
    }
    if (panels.size() >= spec.max_panels) break;
    // Worst panel; ties go to the leftmost so refinement order is reproducible.
    std::size_t worst = 0;
    for (std::size_t i = 1; i < panels.size(); ++i)
      if (panels[i].error > panels[worst].error) worst = i;
    const Panel old = panels[worst];
    const double mid = 0.5 * (old.lo + old.hi);
    if (!(mid > old.lo && mid < old.hi)) break;
    Panel left = gk15(fn, dim, old.lo, mid);
    Panel right = gk15(fn, dim, mid, old.hi);
    evaluations += 30;
    panels[worst] = std::move(left);
    panels.insert(panels.begin() + static_cast<std::ptrdiff_t>(worst) + 1, std::move(right));
    error = totals(value);
  }
  out.value = std::move(value);
  out.error = error;
  out.panels = panels.size();
  out.evaluations = evaluations;
  return out;
}

}  // namespace detail

/// Integrates a scalar function over [cuts.front(), cuts.back()], starting
/// from one panel per consecutive pair of cut points.
template <class Fn>
QuadratureResult<double> integrate(Fn&& fn, std::span<const double> cuts, const QuadratureSpec& spec = {}) {
  if (cuts.size() < 2) throw std::invalid_argument("integrate: need at least two cut points");
  auto wrapped = [&fn](double x, std::span<double> out) { out[0] = fn(x); };
  auto r = detail::adaptive(wrapped, 1, cuts, spec);
  return {r.value[0], r.error, r.panels, r.evaluations, r.converged};
}

template <class Fn>
QuadratureResult<double> integrate(Fn&& fn, double lo, double hi, const QuadratureSpec& spec = {}) {
  const std::array<double, 2> cuts{lo, hi};
  return integrate(std::forward<Fn>(fn), std::span<const double>(cuts), spec);
}

/// Vector-valued integrand `fn(x, std::span<double> out)` with `dim` components.
/// Convergence is judged in the max norm.
template <class Fn>
QuadratureResult<std::vector<double>> integrate_vector(Fn&& fn, std::size_t dim, std::span<const double> cuts,
                                                       const QuadratureSpec& spec = {}) {
  if (cuts.size() < 2) throw std::invalid_argument("integrate_vector: need at least two cut points");
  return detail::adaptive(fn, dim, cuts, spec);
}

template <class Fn>
QuadratureResult<std::vector<double>> integrate_vector(Fn&& fn, std::size_t dim, double lo, double hi,
                                                       const QuadratureSpec& spec = {}) {
  const std::array<double, 2> cuts{lo, hi};
  return integrate_vector(std::forward<Fn>(fn), dim, std::span<const double>(cuts), spec);
}

/// Coordinates for integrals of the form  int_0^inf F(t) dt / sqrt(e^{2t} - 1).
///
/// With u = 1 - e^{-t} and w = sqrt(u) the measure becomes 2 dw / sqrt(2 - w^2)
/// on [0, 1), which is bounded; the endpoint singularity at t = 0 disappears.
struct HeatTimeMap {
  /// t(w) = -log(1 - w^2).
  static double time(double w) { return -std::log1p(-w * w); }
  /// e^{-2t} = (1 - w^2)^2.
  static double exp_minus_2t(double w) {
    const double r = 1.0 - w * w;
    return r * r;
  }
  /// 1 - e^{-2t} = w^2 (2 - w^2), free of cancellation near t = 0.
  static double one_minus_exp_minus_2t(double w) { return w * w * (2.0 - w * w); }
  /// dt / sqrt(e^{2t} - 1) expressed per dw.
  static double jacobian(double w) { return 2.0 / std::sqrt(2.0 - w * w); }

  /// (1 - e^{-2t}) / (1 + (p - 1) e^{-2t}); p = 2 gives tanh(t).
  static double theta(double w, double p) {
    return one_minus_exp_minus_2t(w) / (1.0 + (p - 1.0) * exp_minus_2t(w));
  }
};

/// int_0^inf F(t) dt / sqrt(e^{2t}-1) for scalar F given as a function of w
/// (see HeatTimeMap). Extra cut points in (0, 1) seed the panel layout.
template <class FnOfW>
QuadratureResult<double> integrate_heat_time(FnOfW&& integrand_of_w, const QuadratureSpec& spec = {},
                                             std::vector<double> cuts = {}) {
  cuts.push_back(0.0);
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::erase_if(cuts, [](double c) { return c < 0.0 || c > 1.0; });
  return integrate(
      [&](double w) { return integrand_of_w(w) * HeatTimeMap::jacobian(w); },
      std::span<const double>(cuts), spec);
}

}  // namespace kkltype
