#pragma once

// Brute-force reference computations that share no code with the library
// beyond the value layout: direct character sums, explicit noise kernels,
// pointwise enumeration.

#include <bit>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

inline int sign(std::size_t index, int j) { return (index >> (j - 1)) & 1u ? -1 : 1; }

inline int character(std::size_t mask, std::size_t index) { return std::popcount(mask & index) % 2 ? -1 : 1; }

/// a_S = 2^{-n} sum_i eps^S(i) f(i), scalar.
inline std::vector<double> walsh(const std::vector<double>& f) {
  const std::size_t N = f.size();
  std::vector<double> a(N, 0.0);
  for (std::size_t m = 0; m < N; ++m) {
    for (std::size_t i = 0; i < N; ++i) a[m] += character(m, i) * f[i];
    a[m] /= static_cast<double>(N);
  }
  return a;
}

inline std::vector<double> derivative(const std::vector<double>& f, int j) {
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = 0.5 * (f[i] - f[i ^ (std::size_t{1} << (j - 1))]);
  return out;
}

/// P_t f(x) = sum_y prod_j k(x_j, y_j) f(y), k = (1 +- e^{-t})/2.
inline std::vector<double> heat(const std::vector<double>& f, int n, double t) {
  const double same = 0.5 * (1.0 + std::exp(-t)), diff = 0.5 * (1.0 - std::exp(-t));
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t x = 0; x < f.size(); ++x)
    for (std::size_t y = 0; y < f.size(); ++y) {
      const int flips = std::popcount(x ^ y);
      out[x] += std::pow(same, n - flips) * std::pow(diff, flips) * f[y];
    }
  return out;
}

/// (e^{2t}-1)^{-1/2} E_xi sum_j delta_j D_j f(eps xi) by enumeration of xi.
inline double decomposition(const std::vector<double>& f, int n, double t, std::size_t eps) {
  const double pp = 0.5 * (1.0 + std::exp(-t)), pm = 0.5 * (1.0 - std::exp(-t));
  const double sd = std::sqrt(1.0 - std::exp(-2.0 * t));
  const double dp = (1.0 - (pp - pm)) / sd, dm = (-1.0 - (pp - pm)) / sd;
  double total = 0.0;
  for (std::size_t xi = 0; xi < f.size(); ++xi) {
    double weight = 1.0;
    for (int j = 1; j <= n; ++j) weight *= sign(xi, j) == 1 ? pp : pm;
    const std::size_t point = eps ^ xi;
    double s = 0.0;
    for (int j = 1; j <= n; ++j) {
      const double dj = 0.5 * (f[point] - f[point ^ (std::size_t{1} << (j - 1))]);
      s += (sign(xi, j) == 1 ? dp : dm) * dj;
    }
    total += weight * s;
  }
  return total / std::sqrt(std::expm1(2.0 * t));
}

inline double influence(const std::vector<double>& f, int j) {
  double c = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] != f[i ^ (std::size_t{1} << (j - 1))]) c += 1.0;
  return c / static_cast<double>(f.size());
}

inline double variance(const std::vector<double>& f) {
  double m = 0.0, s = 0.0;
  for (double v : f) m += v;
  m /= static_cast<double>(f.size());
  for (double v : f) s += (v - m) * (v - m);
  return s / static_cast<double>(f.size());
}

inline double lp(const std::vector<double>& f, double p) {
  double s = 0.0;
  for (double v : f) s += std::pow(std::abs(v), p);
  return std::pow(s / static_cast<double>(f.size()), 1.0 / p);
}

/// f <= g on every comparable pair, O(4^n).
inline bool monotone_pairs(const std::vector<double>& f) {
  for (std::size_t a = 0; a < f.size(); ++a)
    for (std::size_t b = 0; b < f.size(); ++b)
      // eps_a <= eps_b coordinatewise iff the -1 set of b is inside that of a.
      if ((b & ~a) == 0 && f[a] > f[b]) return false;
  return true;
}

/// Composite Simpson on [lo, hi] with 2m panels.
template <class Fn>
double simpson(Fn&& fn, double lo, double hi, int m) {
  const double h = (hi - lo) / (2.0 * m);
  double s = fn(lo) + fn(hi);
  for (int k = 1; k < 2 * m; ++k) s += (k % 2 ? 4.0 : 2.0) * fn(lo + k * h);
  return s * h / 3.0;
}

}  // namespace oracle
