#pragma once

// Target-space geometry: l_q^d norms, L^p(X) norms of cube functions,
// influences, independent-copy energy, Rademacher type ratios, and finite
// metric targets.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kkltype/cube.hpp"
#include "kkltype/random.hpp"

namespace kkltype {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// l_q^d with optional upper bounds on its Rademacher type constants.
class NormedSpace {
 public:
  NormedSpace(int d, double q, std::optional<double> type2_bound = std::nullopt,
              std::map<double, double> typep_bounds = {})
      : d_(d), q_(q), type2_(type2_bound), typep_(std::move(typep_bounds)) {
    if (d < 1) throw std::invalid_argument("normed space: d must be >= 1");
    if (!(q >= 1.0)) throw std::invalid_argument("normed space: q must be >= 1");
    if (type2_ && !(*type2_ >= 1.0)) throw std::invalid_argument("normed space: type-2 bound must be >= 1");
    for (const auto& [p, b] : typep_)
      if (!(b >= 1.0) || !(p >= 1.0 && p <= 2.0))
        throw std::invalid_argument("normed space: type-p bounds need p in [1,2] and bound >= 1");
  }

  static NormedSpace euclidean(int d) { return NormedSpace(d, 2.0); }
  static NormedSpace lq(int d, double q) { return NormedSpace(d, q); }

  int d() const noexcept { return d_; }
  double q() const noexcept { return q_; }

  /// Supplied T_2 bound, else the built-in one: 1 for q = 2 and sqrt(q-1)
  /// for 2 < q < inf. Nothing is built in for q < 2 or q = inf.
  std::optional<double> type2_bound() const {
    if (type2_) return type2_;
    if (q_ == 2.0) return 1.0;
    if (q_ > 2.0 && std::isfinite(q_)) return std::sqrt(q_ - 1.0);
    return std::nullopt;
  }
  std::optional<double> supplied_type2_bound() const { return type2_; }

  /// Supplied T_p bound; otherwise 1 on Hilbert spaces (q = 2, 1 <= p <= 2).
  std::optional<double> typep_bound(double p) const {
    if (p == 2.0) return type2_bound();
    auto it = typep_.find(p);
    if (it != typep_.end()) return it->second;
    if (q_ == 2.0 && p >= 1.0 && p <= 2.0) return 1.0;
    return std::nullopt;
  }
  const std::map<double, double>& typep_bounds() const noexcept { return typep_; }

  std::string describe() const {
    std::ostringstream os;
    os << "l_" << (std::isinf(q_) ? std::string("inf") : format_number(q_)) << "^" << d_;
    return os.str();
  }

  friend bool operator==(const NormedSpace&, const NormedSpace&) = default;

 private:
  static std::string format_number(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
  }

  int d_;
  double q_;
  std::optional<double> type2_;
  std::map<double, double> typep_;
};

inline double vector_norm(std::span<const double> v, const NormedSpace& space) {
  if (static_cast<int>(v.size()) != space.d())
    throw std::invalid_argument("vector_norm: dimension " + std::to_string(v.size()) +
                                " does not match space dimension " + std::to_string(space.d()));
  const double q = space.q();
  if (std::isinf(q)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  if (q == 1.0) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
  }
  if (q == 2.0) {
    if (v.size() == 1) return std::abs(v[0]);
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  }
  // Scale by the largest entry so |x|^q cannot overflow or vanish.
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x) / m, q);
  return m * std::pow(s, 1.0 / q);
}

/// ||f||_p = (E ||f||^p)^{1/p}; p = inf gives the max norm.
inline double lp_norm(const CubeFunction& f, double p, const NormedSpace& space) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  std::vector<double> norms(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) norms[i] = vector_norm(f.at(i), space);
  const double m = *std::max_element(norms.begin(), norms.end());
  if (m == 0.0 || std::isinf(p)) return m;
  double s = 0.0;
  for (double x : norms) s += (p == 1.0) ? x / m : (p == 2.0 ? (x / m) * (x / m) : std::pow(x / m, p));
  s /= static_cast<double>(f.size());
  if (p == 1.0) return m * s;
  if (p == 2.0) return m * std::sqrt(s);
  return m * std::pow(s, 1.0 / p);
}

/// Inf_j(f) = P(f(eps) != f(eps^{+j})) for boolean f.
inline double influence(const CubeFunction& f, int j) {
  if (!f.is_boolean()) throw std::invalid_argument("influence: function is not boolean");
  detail::check_coordinate(f.n(), j);
  const std::size_t bit = std::size_t{1} << (j - 1);
  std::size_t flips = 0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f(i) != f(i ^ bit)) ++flips;
  return static_cast<double>(flips) / static_cast<double>(f.size());
}

inline std::vector<double> influences(const CubeFunction& f) {
  std::vector<double> out(static_cast<std::size_t>(f.n()));
  for (int j = 1; j <= f.n(); ++j) out[j - 1] = influence(f, j);
  return out;
}

/// ||D_j f||_p in L^p(X).
inline double derivative_norm(const CubeFunction& f, int j, double p, const NormedSpace& space) {
  return lp_norm(derivative(f, j), p, space);
}

/// Controls for the independent-copy energy above the exact limit.
struct EnergyOptions {
  int exact_limit = 13;
  std::uint64_t samples = 1u << 20;
  std::uint64_t seed = 0;
};

struct VarianceEnergy {
  /// E ||f - Ef||^2.
  double var2;
  /// E ||f(eps) - f(eps')||^2 over independent eps, eps'.
  double energy;
  bool exact = true;
  /// Standard error of the energy estimate when sampled.
  double energy_std_error = 0.0;
};

inline VarianceEnergy variance_and_energy(const CubeFunction& f, const NormedSpace& space,
                                          const EnergyOptions& opts = {}) {
  if (f.d() != space.d()) throw std::invalid_argument("variance_and_energy: dimension mismatch");
  const std::vector<double> mean = f.mean();
  const std::size_t D = static_cast<std::size_t>(f.d());
  std::vector<double> diff(D);
  auto dist_sq = [&](std::span<const double> a, std::span<const double> b) {
    for (std::size_t c = 0; c < D; ++c) diff[c] = a[c] - b[c];
    const double r = vector_norm(diff, space);
    return r * r;
  };

  VarianceEnergy out{};
  double var = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) var += dist_sq(f.at(i), mean);
  out.var2 = var / static_cast<double>(f.size());

  if (f.n() <= opts.exact_limit) {
    double e = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      double row = 0.0;
      for (std::size_t k = 0; k < f.size(); ++k) row += dist_sq(f.at(i), f.at(k));
      e += row;
    }
    const double N = static_cast<double>(f.size());
    out.energy = e / (N * N);
    return out;
  }
  Rng rng(opts.seed);
  const std::size_t mask = f.size() - 1;
  double sum = 0.0, sum_sq = 0.0;
  for (std::uint64_t s = 0; s < opts.samples; ++s) {
    const std::size_t i = static_cast<std::size_t>(rng()) & mask;
    const std::size_t k = static_cast<std::size_t>(rng()) & mask;
    const double x = dist_sq(f.at(i), f.at(k));
    sum += x;
    sum_sq += x * x;
  }
  const double m = static_cast<double>(opts.samples);
  out.energy = sum / m;
  out.energy_std_error = std::sqrt(std::max(0.0, (sum_sq - m * out.energy * out.energy) / (m - 1.0)) / m);
  out.exact = false;
  return out;
}

struct TypeRatioReport {
  std::size_t vector_count;
  double p;
  /// (E ||sum eps_j x_j||^p / sum ||x_j||^p)^{1/p}.
  double ratio;
  bool exact;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Empirical Rademacher type-p ratio of a vector family; a certified lower
/// bound on T_p in exact mode (<= 20 vectors, or a budget forcing sampling).
inline TypeRatioReport empirical_type_ratio(std::span<const std::vector<double>> xs, double p,
                                            const NormedSpace& space,
                                            std::optional<SampleBudget> budget = std::nullopt) {
  if (xs.empty()) throw std::invalid_argument("empirical_type_ratio: no vectors");
  if (!(p >= 1.0)) throw std::invalid_argument("empirical_type_ratio: p must be >= 1");
  double denom = 0.0;
  for (const auto& x : xs) denom += std::pow(vector_norm(x, space), p);
  if (denom == 0.0) throw std::invalid_argument("empirical_type_ratio: all vectors are zero");

  const std::size_t n = xs.size();
  const std::size_t D = static_cast<std::size_t>(space.d());
  std::vector<double> sum(D);
  auto signed_norm_p = [&](std::uint64_t signs) {
    std::fill(sum.begin(), sum.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double s = ((signs >> j) & 1u) ? -1.0 : 1.0;
      for (std::size_t c = 0; c < D; ++c) sum[c] += s * xs[j][c];
    }
    return std::pow(vector_norm(sum, space), p);
  };

  TypeRatioReport out{n, p, 0.0, true};
  double numer = 0.0;
  if (!budget && n <= static_cast<std::size_t>(kExactNoiseLimit)) {
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t s = 0; s < total; ++s) numer += signed_norm_p(s);
    numer /= static_cast<double>(total);
  } else {
    const SampleBudget b = budget.value_or(SampleBudget{});
    Rng rng(b.seed);
    for (std::uint64_t k = 0; k < b.samples; ++k) {
      std::fill(sum.begin(), sum.end(), 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        const double s = coin(rng) ? -1.0 : 1.0;
        for (std::size_t c = 0; c < D; ++c) sum[c] += s * xs[j][c];
      }
      numer += std::pow(vector_norm(sum, space), p);
    }
    numer /= static_cast<double>(b.samples);
    out.exact = false;
    out.samples = b.samples;
    out.seed = b.seed;
  }
  out.ratio = std::pow(numer / denom, 1.0 / p);
  return out;
}

/// Finite metric space given by its distance matrix.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace(std::size_t m, std::vector<double> dist) : m_(m), dist_(std::move(dist)) {
    if (m == 0) throw std::invalid_argument("metric space: m must be >= 1");
    if (dist_.size() != m * m) throw std::invalid_argument("metric space: distance matrix must be m x m");
    const double tol = 1e-12;
    for (std::size_t a = 0; a < m; ++a) {
      if (at(a, a) != 0.0) throw std::invalid_argument("metric space: nonzero diagonal");
      for (std::size_t b = 0; b < m; ++b) {
        if (!(at(a, b) >= 0.0) || !std::isfinite(at(a, b)))
          throw std::invalid_argument("metric space: distances must be finite and nonnegative");
        if (at(a, b) != at(b, a)) throw std::invalid_argument("metric space: matrix is not symmetric");
        for (std::size_t c = 0; c < m; ++c)
          if (at(a, c) > at(a, b) + at(b, c) + tol * (1.0 + at(a, c)))
            throw std::invalid_argument("metric space: triangle inequality fails");
      }
    }
  }

  std::size_t size() const noexcept { return m_; }
  double at(std::size_t a, std::size_t b) const { return dist_[a * m_ + b]; }
  const std::vector<double>& matrix() const noexcept { return dist_; }

  friend bool operator==(const FiniteMetricSpace&, const FiniteMetricSpace&) = default;

 private:
  std::size_t m_;
  std::vector<double> dist_;
};

struct MetricEnergyTerms {
  /// E d(f(eps), f(eps'))^2.
  double lhs;
  /// E d(f(eps), f(eps^{+j}))^2, j = 1..n.
  std::vector<double> edge_terms;
  /// E d(f, f^{+j}) / sqrt(E d(f, f^{+j})^2); 0 where the denominator is 0.
  std::vector<double> ratio_terms;
};

/// Labels of an index-valued cube function, checked against the metric.
inline std::vector<std::size_t> metric_labels(const CubeFunction& f, const FiniteMetricSpace& space) {
  if (f.d() != 1) throw std::invalid_argument("metric labels: function must be scalar");
  std::vector<std::size_t> labels(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = f(i);
    if (!(v >= 0.0) || v != std::floor(v) || v >= static_cast<double>(space.size()))
      throw std::out_of_range("metric labels: value at index " + std::to_string(i) +
                              " is not a point of the metric space");
    labels[i] = static_cast<std::size_t>(v);
  }
  return labels;
}

inline MetricEnergyTerms metric_energy_terms(const CubeFunction& f, const FiniteMetricSpace& space) {
  const std::vector<std::size_t> labels = metric_labels(f, space);
  const std::size_t N = f.size();
  // Label histogram turns the double sum into O(N + m^2).
  std::vector<double> counts(space.size(), 0.0);
  for (std::size_t l : labels) counts[l] += 1.0;
  double lhs = 0.0;
  for (std::size_t a = 0; a < space.size(); ++a)
    for (std::size_t b = 0; b < space.size(); ++b) lhs += counts[a] * counts[b] * space.at(a, b) * space.at(a, b);
  MetricEnergyTerms out{lhs / (static_cast<double>(N) * static_cast<double>(N)), {}, {}};

  for (int j = 1; j <= f.n(); ++j) {
    const std::size_t bit = std::size_t{1} << (j - 1);
    double first = 0.0, second = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double dd = space.at(labels[i], labels[i ^ bit]);
      first += dd;
      second += dd * dd;
    }
    first /= static_cast<double>(N);
    second /= static_cast<double>(N);
    out.edge_terms.push_back(second);
    out.ratio_terms.push_back(second > 0.0 ? first / std::sqrt(second) : 0.0);
  }
  return out;
}

}  // namespace kkltype
