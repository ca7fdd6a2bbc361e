#pragma once

// Functions on the discrete cube {-1,1}^n with values in R^d, their
// Walsh-Fourier spectra, discrete derivatives, and the heat semigroup.
//
// Indexing: point i has coordinate eps_j = +1 when bit (j-1) of i is clear
// and eps_j = -1 when it is set. Coordinates are 1-based everywhere in the
// public interface. Walsh coefficient m is a_S with S = { j : bit (j-1) of m }.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kkltype/random.hpp"

namespace kkltype {

inline constexpr int kMaxDimension = 30;
/// Largest n for which expectations over the noise vector are enumerated.
inline constexpr int kExactNoiseLimit = 20;

namespace detail {

inline void check_dimension(int n) {
  if (n < 0 || n > kMaxDimension)
    throw std::invalid_argument("cube dimension must lie in [0, 30], got " + std::to_string(n));
}

inline void check_coordinate(int n, int j) {
  if (j < 1 || j > n)
    throw std::out_of_range("coordinate " + std::to_string(j) + " outside [1, " +
                            std::to_string(n) + "]");
}

inline std::size_t cube_size(int n) { return std::size_t{1} << n; }

}  // namespace detail

class CubePoint {
 public:
  CubePoint(int n, std::size_t index) : n_(n), index_(index) {
    detail::check_dimension(n);
    if (index >= detail::cube_size(n)) throw std::out_of_range("cube point index out of range");
  }

  int dimension() const noexcept { return n_; }
  std::size_t index() const noexcept { return index_; }

  /// eps_j in {-1, +1}.
  int sign(int j) const {
    detail::check_coordinate(n_, j);
    return ((index_ >> (j - 1)) & 1u) ? -1 : 1;
  }

  /// The point with coordinate j negated.
  CubePoint flip(int j) const {
    detail::check_coordinate(n_, j);
    return CubePoint(n_, index_ ^ (std::size_t{1} << (j - 1)));
  }

  /// Coordinatewise product eps * xi, xi given by its index.
  CubePoint times(std::size_t xi) const { return CubePoint(n_, index_ ^ xi); }

  friend bool operator==(const CubePoint&, const CubePoint&) = default;

 private:
  int n_;
  std::size_t index_;
};

namespace detail {

// Storage shared by functions and spectra: 2^n rows of d doubles, row-major.
class CubeArray {
 public:
  CubeArray(int n, int d, std::vector<double> data) : n_(n), d_(d), data_(std::move(data)) {
    check_dimension(n);
    if (d < 1) throw std::invalid_argument("target dimension d must be >= 1");
    if (data_.size() != cube_size(n) * static_cast<std::size_t>(d))
      throw std::invalid_argument("values length " + std::to_string(data_.size()) +
                                  " does not match 2^n * d = " +
                                  std::to_string(cube_size(n) * static_cast<std::size_t>(d)));
  }

  int n() const noexcept { return n_; }
  int d() const noexcept { return d_; }
  std::size_t size() const noexcept { return cube_size(n_); }

  std::span<const double> at(std::size_t i) const {
    return {data_.data() + i * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }
  std::span<double> at(std::size_t i) {
    return {data_.data() + i * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }

  const std::vector<double>& data() const& noexcept { return data_; }
  std::vector<double>& data() & noexcept { return data_; }
  std::vector<double> data() && noexcept { return std::move(data_); }

  friend bool operator==(const CubeArray&, const CubeArray&) = default;

 protected:
  int n_;
  int d_;
  std::vector<double> data_;
};

}  // namespace detail

/// f : {-1,1}^n -> R^d, stored as its 2^n values.
class CubeFunction : public detail::CubeArray {
 public:
  CubeFunction(int n, int d, std::vector<double> values) : CubeArray(n, d, std::move(values)) {}

  static CubeFunction scalar(int n, std::vector<double> values) {
    return CubeFunction(n, 1, std::move(values));
  }

  static CubeFunction zero(int n, int d) {
    detail::check_dimension(n);
    return CubeFunction(n, d, std::vector<double>(detail::cube_size(n) * static_cast<std::size_t>(d)));
  }

  /// Scalar function from a callable on the point.
  template <class Fn>
  static CubeFunction from(int n, Fn&& fn) {
    detail::check_dimension(n);
    std::vector<double> v(detail::cube_size(n));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(fn(CubePoint(n, i)));
    return scalar(n, std::move(v));
  }

  double operator()(std::size_t i) const { return data_[i * static_cast<std::size_t>(d_)]; }

  /// d == 1 and every value is exactly +1 or -1.
  bool is_boolean() const noexcept {
    if (d_ != 1) return false;
    for (double v : data_)
      if (v != 1.0 && v != -1.0) return false;
    return true;
  }

  /// Coordinatewise mean E f.
  std::vector<double> mean() const {
    std::vector<double> m(static_cast<std::size_t>(d_), 0.0);
    for (std::size_t i = 0; i < size(); ++i) {
      auto row = at(i);
      for (int c = 0; c < d_; ++c) m[c] += row[c];
    }
    const double scale = 1.0 / static_cast<double>(size());
    for (double& x : m) x *= scale;
    return m;
  }

  friend bool operator==(const CubeFunction&, const CubeFunction&) = default;
};

/// Coefficients a_S, one R^d vector per subset mask.
class WalshSpectrum : public detail::CubeArray {
 public:
  WalshSpectrum(int n, int d, std::vector<double> coeffs) : CubeArray(n, d, std::move(coeffs)) {}

  std::span<const double> coeff(std::uint64_t mask) const { return at(mask); }

  friend bool operator==(const WalshSpectrum&, const WalshSpectrum&) = default;
};

namespace detail {

// Unnormalized in-place butterfly over rows; each row holds d components.
inline void fwht_rows(std::vector<double>& data, int n, int d) {
  const std::size_t N = cube_size(n);
  const std::size_t D = static_cast<std::size_t>(d);
  for (std::size_t h = 1; h < N; h <<= 1) {
    for (std::size_t base = 0; base < N; base += 2 * h) {
      for (std::size_t i = base; i < base + h; ++i) {
        double* x = data.data() + i * D;
        double* y = data.data() + (i + h) * D;
        for (std::size_t c = 0; c < D; ++c) {
          const double a = x[c];
          const double b = y[c];
          x[c] = a + b;
          y[c] = a - b;
        }
      }
    }
  }
}

// Replace each pair (u at eps_j = +1, v at eps_j = -1) along coordinate j by
// (same*u + flip*v, same*v + flip*u).
inline void apply_axis(std::vector<double>& data, int n, int d, int j, double same, double flip) {
  const std::size_t N = cube_size(n);
  const std::size_t D = static_cast<std::size_t>(d);
  const std::size_t bit = std::size_t{1} << (j - 1);
  for (std::size_t i = 0; i < N; ++i) {
    if (i & bit) continue;
    double* u = data.data() + i * D;
    double* v = data.data() + (i | bit) * D;
    for (std::size_t c = 0; c < D; ++c) {
      const double a = u[c];
      const double b = v[c];
      u[c] = same * a + flip * b;
      v[c] = same * b + flip * a;
    }
  }
}

}  // namespace detail

inline WalshSpectrum walsh_transform(const CubeFunction& f) {
  std::vector<double> data = f.data();
  detail::fwht_rows(data, f.n(), f.d());
  const double scale = std::ldexp(1.0, -f.n());
  for (double& x : data) x *= scale;
  return WalshSpectrum(f.n(), f.d(), std::move(data));
}

inline CubeFunction inverse_walsh(const WalshSpectrum& s) {
  std::vector<double> data = s.data();
  detail::fwht_rows(data, s.n(), s.d());
  return CubeFunction(s.n(), s.d(), std::move(data));
}

/// D_j f(eps) = (f(eps) - f(eps^{+j})) / 2.
inline CubeFunction derivative(const CubeFunction& f, int j) {
  detail::check_coordinate(f.n(), j);
  std::vector<double> data = f.data();
  detail::apply_axis(data, f.n(), f.d(), j, 0.5, -0.5);
  return CubeFunction(f.n(), f.d(), std::move(data));
}

/// Delta f = -sum_j D_j f.
inline CubeFunction laplacian(const CubeFunction& f) {
  std::vector<double> acc(f.data().size(), 0.0);
  for (int j = 1; j <= f.n(); ++j) {
    const CubeFunction dj = derivative(f, j);
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] -= dj.data()[k];
  }
  return CubeFunction(f.n(), f.d(), std::move(acc));
}

/// Multiply each coefficient a_S by multiplier(|S|).
template <class Multiplier>
WalshSpectrum scale_by_degree(WalshSpectrum s, Multiplier&& multiplier) {
  std::vector<double> by_degree(static_cast<std::size_t>(s.n()) + 1);
  for (int k = 0; k <= s.n(); ++k) by_degree[k] = multiplier(k);
  for (std::size_t m = 0; m < s.size(); ++m) {
    const double w = by_degree[std::popcount(m)];
    for (double& x : s.at(m)) x *= w;
  }
  return s;
}

/// P_t f: Fourier multiplier exp(-t |S|).
inline CubeFunction heat(const CubeFunction& f, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("heat: time must be >= 0");
  if (t == 0.0) return f;
  return inverse_walsh(scale_by_degree(walsh_transform(f), [t](int k) { return std::exp(-t * k); }));
}

/// Law of one coordinate of the noise vector xi(t) and of its standardization
/// delta = (xi - E xi) / sqrt(Var xi).
struct NoiseModel {
  double t;
  double p_plus;
  double p_minus;
  double delta_plus;
  double delta_minus;
  /// sqrt(Var xi) = sqrt(1 - e^{-2t}).
  double sigma;

  static NoiseModel at(double t) {
    if (!(t > 0.0)) throw std::invalid_argument("noise model requires t > 0");
    NoiseModel m{};
    m.t = t;
    m.p_minus = -0.5 * std::expm1(-t);
    m.p_plus = 1.0 - m.p_minus;
    m.sigma = std::sqrt(-std::expm1(-2.0 * t));
    m.delta_plus = 2.0 * m.p_minus / m.sigma;
    m.delta_minus = -2.0 * m.p_plus / m.sigma;
    return m;
  }

  /// 1 / sqrt(e^{2t} - 1).
  double time_weight() const { return 1.0 / std::sqrt(std::expm1(2.0 * t)); }
};

namespace detail {

// E_xi sum_j delta_j(t) D_j g(eps xi(t)) at every eps, without the
// 1/sqrt(e^{2t}-1) factor. Each term is a tensor product of one-coordinate
// operators, so it is applied axis by axis.
inline CubeFunction noise_drift_field(const CubeFunction& g, double t) {
  const NoiseModel noise = NoiseModel::at(t);
  std::vector<double> acc(g.data().size(), 0.0);
  for (int j = 1; j <= g.n(); ++j) {
    std::vector<double> term = derivative(g, j).data();
    for (int i = 1; i <= g.n(); ++i) {
      if (i == j)
        apply_axis(term, g.n(), g.d(), i, noise.p_plus * noise.delta_plus,
                   noise.p_minus * noise.delta_minus);
      else
        apply_axis(term, g.n(), g.d(), i, noise.p_plus, noise.p_minus);
    }
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += term[k];
  }
  return CubeFunction(g.n(), g.d(), std::move(acc));
}

}  // namespace detail

/// Monte Carlo controls for expectations over the noise vector.
struct SampleBudget {
  std::uint64_t samples = 1u << 16;
  std::uint64_t seed = 0;
};

struct DecompositionValue {
  std::vector<double> value;
  /// Per-component standard error; all zeros in exact mode.
  std::vector<double> std_error;
  bool exact = true;
};

/// Right side of the pointwise heat identity
///   -(d/dt) P_t f(eps) = (e^{2t}-1)^{-1/2} E_xi sum_j delta_j(t) D_j f(eps xi(t)).
/// Exact enumeration over xi when no budget is given (requires n <= 20);
/// seeded sampling when a budget is supplied.
inline DecompositionValue decomposition_rhs(const CubeFunction& f, double t, const CubePoint& eps,
                                            std::optional<SampleBudget> budget = std::nullopt) {
  if (!(t > 0.0)) throw std::invalid_argument("decomposition_rhs: t must be > 0");
  if (eps.dimension() != f.n()) throw std::invalid_argument("decomposition_rhs: point dimension mismatch");
  const NoiseModel noise = NoiseModel::at(t);
  const int n = f.n();
  const std::size_t D = static_cast<std::size_t>(f.d());
  DecompositionValue out;
  out.value.assign(D, 0.0);
  out.std_error.assign(D, 0.0);

  // sum_j delta_j D_j f(x) at x = eps * xi, accumulated into `sink`.
  auto drift_at = [&](std::size_t xi, std::vector<double>& sink) {
    const std::size_t x = eps.index() ^ xi;
    auto fx = f.at(x);
    for (int j = 1; j <= n; ++j) {
      const std::size_t bit = std::size_t{1} << (j - 1);
      const double delta = (xi & bit) ? noise.delta_minus : noise.delta_plus;
      auto fy = f.at(x ^ bit);
      for (std::size_t c = 0; c < D; ++c) sink[c] += delta * 0.5 * (fx[c] - fy[c]);
    }
  };

  if (!budget) {
    if (n > kExactNoiseLimit)
      throw std::invalid_argument("decomposition_rhs: n > 20 requires a sample budget");
    const double log_plus = std::log(noise.p_plus);
    const double log_minus = std::log(noise.p_minus);
    std::vector<double> drift(D);
    for (std::size_t xi = 0; xi < f.size(); ++xi) {
      const int flips = std::popcount(xi);
      const double weight = std::exp((n - flips) * log_plus + flips * log_minus);
      std::fill(drift.begin(), drift.end(), 0.0);
      drift_at(xi, drift);
      for (std::size_t c = 0; c < D; ++c) out.value[c] += weight * drift[c];
    }
  } else {
    if (budget->samples < 2) throw std::invalid_argument("decomposition_rhs: need at least 2 samples");
    Rng rng(budget->seed);
    std::vector<double> sum(D, 0.0), sum_sq(D, 0.0), drift(D);
    for (std::uint64_t s = 0; s < budget->samples; ++s) {
      std::size_t xi = 0;
      for (int j = 0; j < n; ++j)
        if (uniform01(rng) >= noise.p_plus) xi |= std::size_t{1} << j;
      std::fill(drift.begin(), drift.end(), 0.0);
      drift_at(xi, drift);
      for (std::size_t c = 0; c < D; ++c) {
        sum[c] += drift[c];
        sum_sq[c] += drift[c] * drift[c];
      }
    }
    const double m = static_cast<double>(budget->samples);
    for (std::size_t c = 0; c < D; ++c) {
      const double mean = sum[c] / m;
      const double var = std::max(0.0, (sum_sq[c] - m * mean * mean) / (m - 1.0));
      out.value[c] = mean;
      out.std_error[c] = std::sqrt(var / m);
    }
    out.exact = false;
  }
  const double w = noise.time_weight();
  for (std::size_t c = 0; c < D; ++c) {
    out.value[c] *= w;
    out.std_error[c] *= w;
  }
  return out;
}

/// The right side of the heat identity at every point (exact, n <= 20).
inline CubeFunction decomposition_field(const CubeFunction& f, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("decomposition_field: t must be > 0");
  if (f.n() > kExactNoiseLimit) throw std::invalid_argument("decomposition_field: n > 20");
  CubeFunction out = detail::noise_drift_field(f, t);
  const double w = NoiseModel::at(t).time_weight();
  for (double& x : out.data()) x *= w;
  return out;
}

/// max_eps | -(P_{t+h} f - P_{t-h} f)/(2h) - decomposition_field(f, t) |_2.
inline double heat_identity_residual(const CubeFunction& f, double t, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("heat_identity_residual: step must be > 0");
  if (!(t - step > 0.0)) throw std::invalid_argument("heat_identity_residual: t - step must be > 0");
  const CubeFunction ahead = heat(f, t + step);
  const CubeFunction behind = heat(f, t - step);
  const CubeFunction rhs = decomposition_field(f, t);
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto a = ahead.at(i);
    auto b = behind.at(i);
    auto r = rhs.at(i);
    double sq = 0.0;
    for (int c = 0; c < f.d(); ++c) {
      const double fd = -(a[c] - b[c]) / (2.0 * step);
      sq += (fd - r[c]) * (fd - r[c]);
    }
    worst = std::max(worst, std::sqrt(sq));
  }
  return worst;
}

}  // namespace kkltype
