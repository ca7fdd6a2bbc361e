#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <initializer_list>
#include <stdexcept>
#include <utility>

namespace kkltype {

/// log(sum_i exp(terms[i])), shifted by the maximum term. -inf terms are
/// zero masses; an all -inf input returns -inf.
inline double log_sum_exp(std::span<const double> terms) {
  if (terms.empty()) throw std::invalid_argument("log_sum_exp: empty input");
  const double top = *std::max_element(terms.begin(), terms.end());
  if (std::isinf(top)) return top;
  double s = 0.0;
  for (double x : terms) s += std::exp(x - top);
  return top + std::log(s);
}

inline double log_sum_exp(std::initializer_list<double> terms) {
  return log_sum_exp(std::span<const double>(terms.begin(), terms.size()));
}

/// log(exp(a) + exp(b)).
inline double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (std::isinf(a)) return a;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace kkltype
