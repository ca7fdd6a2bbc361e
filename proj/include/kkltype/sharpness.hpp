#pragma once

// One-dimensional extremal constructions: the (X, g) integral lemma, its
// matching lower-bound variable, and the level-weighted family whose ratio
// grows without bound. Everything runs on logarithms because atoms such as
// e^{-4^K} underflow long before K = 32.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "kkltype/errors.hpp"
#include "kkltype/logspace.hpp"
#include "kkltype/quadrature.hpp"
#include "kkltype/report.hpp"
#include "kkltype/weights.hpp"

namespace kkltype {

/// 0 < X <= 1 with finitely many atoms, stored as log-values L_i = log X_i
/// and log-probabilities.
class DiscreteRandomVariable {
 public:
  DiscreteRandomVariable(std::vector<double> log_atoms, std::vector<double> log_probs)
      : log_atoms_(std::move(log_atoms)), log_probs_(std::move(log_probs)) {
    if (log_atoms_.empty()) throw std::invalid_argument("random variable: no atoms");
    if (log_atoms_.size() != log_probs_.size())
      throw std::invalid_argument("random variable: atoms and probabilities differ in length");
    for (double l : log_atoms_)
      if (!(l <= 0.0)) throw std::invalid_argument("random variable: atoms must lie in (0, 1]");
    for (double lp : log_probs_)
      if (std::isnan(lp) || lp > 0.0) throw std::invalid_argument("random variable: bad probability");
    const double total = log_sum_exp(std::span<const double>(log_probs_));
    if (!(std::abs(std::expm1(total)) <= 1e-12))
      throw std::invalid_argument("random variable: probabilities do not sum to 1");
  }

  /// From linear probabilities.
  static DiscreteRandomVariable from_probabilities(std::vector<double> log_atoms, const std::vector<double>& probs) {
    std::vector<double> lp;
    lp.reserve(probs.size());
    for (double p : probs) {
      if (!(p >= 0.0)) throw std::invalid_argument("random variable: negative probability");
      lp.push_back(std::log(p));
    }
    return {std::move(log_atoms), std::move(lp)};
  }

  std::size_t size() const noexcept { return log_atoms_.size(); }
  const std::vector<double>& log_atoms() const noexcept { return log_atoms_; }
  const std::vector<double>& log_probs() const noexcept { return log_probs_; }
  double probability(std::size_t i) const { return std::exp(log_probs_[i]); }

 private:
  std::vector<double> log_atoms_;
  std::vector<double> log_probs_;
};

/// Level k = 1..K carries weight w_k and value b_k <= 1, both as logs.
/// log_mass = log(w_k b_k) is kept separately because it is O(k) while the
/// two summands are O(4^k).
struct LevelWeights {
  struct Level {
    double log_weight;
    double log_value;
    double log_mass;
  };
  std::vector<Level> levels;

  int K() const noexcept { return static_cast<int>(levels.size()); }
};

/// int_0^1 (E X^{s^2} g(sqrt(log 1/X)))^{1/2} ds.
inline double lemma_lhs(const DiscreteRandomVariable& x, const WeightFunction& w, const QuadratureSpec& quad = {}) {
  const std::size_t m = x.size();
  std::vector<double> base(m);
  std::vector<double> cuts{0.0, 1.0};
  for (std::size_t i = 0; i < m; ++i) {
    const double L = x.log_atoms()[i];
    const double gv = w.h(-L);
    base[i] = gv > 0.0 ? x.log_probs()[i] + std::log(gv) : -std::numeric_limits<double>::infinity();
    if (L < -1.0) cuts.push_back(1.0 / std::sqrt(-L));
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<double> terms(m);
  auto r = integrate(
      [&](double s) {
        for (std::size_t i = 0; i < m; ++i) terms[i] = base[i] + s * s * x.log_atoms()[i];
        return std::exp(0.5 * log_sum_exp(std::span<const double>(terms)));
      },
      std::span<const double>(cuts), quad);
  if (!r.converged) throw QuadratureError("lemma_lhs did not converge", r.value, r.error);
  return r.value;
}

inline const double kLemmaConstant = std::numbers::sqrt2 + 8.0 * std::sqrt(std::numbers::pi);

/// lemma_lhs <= (sqrt 2 + 8 sqrt pi) (int_1^inf g(s)/s^3 ds)^{1/2}.
inline InequalityReport lemma_check(const DiscreteRandomVariable& x, const WeightFunction& w,
                                    const QuadratureSpec& quad = {}) {
  const double lhs = lemma_lhs(x, w, quad);
  const double gi = g_integral(w, quad);
  InequalityReport r = make_report("lemma", lhs, kLemmaConstant * std::sqrt(gi), kLemmaConstant,
                                   {1, 1, "R", "g=" + w.label() + ";atoms=" + std::to_string(x.size())});
  r.extras.emplace_back("g_integral", gi);
  return r;
}

/// Y = 2^k with probability proportional to g(2^k) 2^{-2k}, k = 1..K, and
/// X = e^{-Y^2}.
inline DiscreteRandomVariable utv1_construct(const WeightFunction& w, int K) {
  if (K < 1) throw std::invalid_argument("utv1_construct: K must be >= 1");
  std::vector<double> log_atoms, raw;
  for (int k = 1; k <= K; ++k) {
    const double y = std::ldexp(1.0, k);
    log_atoms.push_back(-y * y);
    const double gv = w.g(y);
    raw.push_back(gv > 0.0 ? std::log(gv) - 2.0 * k * std::numbers::ln2 : -std::numeric_limits<double>::infinity());
  }
  const double norm = log_sum_exp(std::span<const double>(raw));
  if (!std::isfinite(norm)) throw std::invalid_argument("utv1_construct: zero normalizer");
  for (double& v : raw) v -= norm;
  return {std::move(log_atoms), std::move(raw)};
}

inline const double kUtv1Constant = std::exp(-8.0) / 2.0;

/// int_1^{2^{K+1}} g(s)/s^3 ds, integrated in u = log s.
inline double truncated_g_integral(const WeightFunction& w, int K, const QuadratureSpec& quad = {}) {
  std::vector<double> cuts;
  for (int k = 0; k <= K + 1; ++k) cuts.push_back(k * std::numbers::ln2);
  auto r = integrate([&](double u) { return w.g(std::exp(u)) * std::exp(-2.0 * u); }, std::span<const double>(cuts),
                     quad);
  if (!r.converged) throw QuadratureError("truncated g integral did not converge", r.value, r.error);
  return r.value;
}

/// (e^{-8}/2) (int_1^{2^{K+1}} g/s^3)^{1/2} <= lemma_lhs(utv1_construct(g, K)).
/// The claimed-smaller side is the lower bound, so it sits in `lhs`.
inline InequalityReport utv1_check(const WeightFunction& w, int K, const QuadratureSpec& quad = {}) {
  const DiscreteRandomVariable x = utv1_construct(w, K);
  const double gi = truncated_g_integral(w, K, quad);
  const double value = lemma_lhs(x, w, quad);
  InequalityReport r = make_report("utv1", kUtv1Constant * std::sqrt(gi), value, kUtv1Constant,
                                   {1, 1, "R", "g=" + w.label() + ";K=" + std::to_string(K)});
  r.extras.emplace_back("K", K);
  r.extras.emplace_back("truncated_g_integral", gi);
  return r;
}

/// log b_k = -4^k, log w_k = 4^k + k log 4, so w_k b_k / log(1/b_k) = 1.
inline LevelWeights utv2_levels(int K) {
  if (K < 1) throw std::invalid_argument("utv2_levels: K must be >= 1");
  LevelWeights out;
  for (int k = 1; k <= K; ++k) {
    const double four_k = std::ldexp(1.0, 2 * k);
    const double log_mass = 2.0 * k * std::numbers::ln2;
    out.levels.push_back({four_k + log_mass, -four_k, log_mass});
  }
  return out;
}

struct Utv2Sides {
  /// int_0^inf (sum_k w_k b_k^{1 + tanh t})^{1/2} dt / sqrt(e^{2t}-1).
  double integral;
  /// (sum_k w_k b_k / log(1/b_k))^{1/2}.
  double root_sum;
};

inline Utv2Sides utv2_sides(const LevelWeights& lv, const QuadratureSpec& quad = {}) {
  std::vector<double> cuts;
  double rhs_log = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= lv.K() + 3; ++k) cuts.push_back(std::ldexp(1.0, -k));
  for (const auto& l : lv.levels) rhs_log = log_add(rhs_log, l.log_mass - std::log(-l.log_value));
  std::vector<double> terms(lv.levels.size());
  auto r = integrate_heat_time(
      [&](double w) {
        const double th = HeatTimeMap::theta(w, 2.0);
        for (std::size_t k = 0; k < terms.size(); ++k) terms[k] = lv.levels[k].log_mass + th * lv.levels[k].log_value;
        return std::exp(0.5 * log_sum_exp(std::span<const double>(terms)));
      },
      quad, cuts);
  if (!r.converged) throw QuadratureError("utv2 integral did not converge", r.value, r.error);
  return {r.value, std::exp(0.5 * rhs_log)};
}

/// integral / root_sum; unbounded in K.
inline double utv2_ratio(const LevelWeights& lv, const QuadratureSpec& quad = {}) {
  const Utv2Sides s = utv2_sides(lv, quad);
  return s.integral / s.root_sum;
}

inline double utv2_ratio(int K, const QuadratureSpec& quad = {}) { return utv2_ratio(utv2_levels(K), quad); }

/// Same quantity in plain doubles; only meaningful while e^{4^K} is finite
/// (K <= 2 keeps every intermediate far from the range limits).
inline double utv2_ratio_direct(int K, const QuadratureSpec& quad = {}) {
  if (K < 1 || K > 4) throw std::invalid_argument("utv2_ratio_direct: K must lie in [1, 4]");
  std::vector<double> wk, bk;
  double rhs = 0.0;
  for (int k = 1; k <= K; ++k) {
    const double four_k = std::ldexp(1.0, 2 * k);
    wk.push_back(std::exp(four_k) * four_k);
    bk.push_back(std::exp(-four_k));
    rhs += wk.back() * bk.back() / four_k;
  }
  std::vector<double> cuts;
  for (int k = 1; k <= K + 3; ++k) cuts.push_back(std::ldexp(1.0, -k));
  auto r = integrate_heat_time(
      [&](double w) {
        const double th = HeatTimeMap::theta(w, 2.0);
        double s = 0.0;
        for (std::size_t k = 0; k < wk.size(); ++k) s += wk[k] * std::pow(bk[k], 1.0 + th);
        return std::sqrt(s);
      },
      quad, cuts);
  if (!r.converged) throw QuadratureError("utv2_ratio_direct did not converge", r.value, r.error);
  return r.value / std::sqrt(rhs);
}

/// The level-K instance as a report with unit constant; `constant_used` is
/// the ratio, i.e. the smallest constant that would make it hold.
inline InequalityReport utv2_report(int K, const QuadratureSpec& quad = {}) {
  const Utv2Sides s = utv2_sides(utv2_levels(K), quad);
  InequalityReport r = make_report("utv2", s.integral, s.root_sum, s.integral / s.root_sum,
                                   {1, 1, "R", "K=" + std::to_string(K)});
  r.constant_specified = false;
  r.extras.emplace_back("K", K);
  r.extras.emplace_back("ratio", s.integral / s.root_sum);
  return r;
}

}  // namespace kkltype
