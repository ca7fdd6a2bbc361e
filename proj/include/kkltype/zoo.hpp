#pragma once

// Standard boolean and vector-valued test functions, restrictions,
// monotonicity, and the greedy bribery experiment.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kkltype/cube.hpp"
#include "kkltype/normed.hpp"
#include "kkltype/random.hpp"

namespace kkltype {

inline CubeFunction dictator(int n, int j) {
  detail::check_dimension(n);
  detail::check_coordinate(n, j);
  return CubeFunction::from(n, [j](const CubePoint& e) { return e.sign(j); });
}

/// prod_{j in S} eps_j; S given as 1-based coordinates.
inline CubeFunction parity(int n, const std::vector<int>& S) {
  detail::check_dimension(n);
  std::size_t mask = 0;
  for (int j : S) {
    detail::check_coordinate(n, j);
    mask |= std::size_t{1} << (j - 1);
  }
  return CubeFunction::from(n, [mask](const CubePoint& e) { return std::popcount(e.index() & mask) % 2 ? -1 : 1; });
}

inline CubeFunction parity(int n) {
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) all[static_cast<std::size_t>(j)] = j + 1;
  return parity(n, all);
}

inline CubeFunction majority(int n) {
  detail::check_dimension(n);
  if (n % 2 == 0) throw std::invalid_argument("majority needs odd n");
  return CubeFunction::from(n, [n](const CubePoint& e) { return 2 * std::popcount(e.index()) < n ? 1 : -1; });
}

inline CubeFunction constant(int n, double c) {
  detail::check_dimension(n);
  return CubeFunction::scalar(n, std::vector<double>(detail::cube_size(n), c));
}

struct TribesParams {
  int w = 1;
  int s = 1;
  /// Total coordinates; n > w s leaves dummy coordinates at the end.
  int n = 0;

  TribesParams(int w_, int s_, int n_ = 0) : w(w_), s(s_), n(n_ == 0 ? w_ * s_ : n_) {
    if (w < 1 || s < 1) throw std::invalid_argument("tribes: w and s must be >= 1");
    if (n < w * s) throw std::invalid_argument("tribes: n must be >= w s");
  }
};

/// +1 iff some block of w consecutive coordinates is all +1.
inline CubeFunction tribes(const TribesParams& p) {
  detail::check_dimension(p.n);
  const std::size_t block = (std::size_t{1} << p.w) - 1;
  return CubeFunction::from(p.n, [&](const CubePoint& e) {
    for (int b = 0; b < p.s; ++b)
      if (((e.index() >> (b * p.w)) & block) == 0) return 1;
    return -1;
  });
}

/// 2^{-(w-1)} (1 - 2^{-w})^{s-1}, the influence of each non-dummy coordinate.
inline double tribes_influence_formula(const TribesParams& p) {
  return std::ldexp(1.0, -(p.w - 1)) * std::pow(1.0 - std::ldexp(1.0, -p.w), p.s - 1);
}

/// f(eps) = sum_j eps_j x_j.
inline CubeFunction linear_function(const std::vector<std::vector<double>>& xs) {
  if (xs.empty()) throw std::invalid_argument("linear function: no vectors");
  const int n = static_cast<int>(xs.size());
  detail::check_dimension(n);
  const std::size_t d = xs.front().size();
  if (d == 0) throw std::invalid_argument("linear function: empty vectors");
  for (const auto& x : xs)
    if (x.size() != d) throw std::invalid_argument("linear function: vectors differ in dimension");
  CubeFunction f = CubeFunction::zero(n, static_cast<int>(d));
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto row = f.at(i);
    for (int j = 0; j < n; ++j) {
      const double sgn = (i >> j) & 1u ? -1.0 : 1.0;
      for (std::size_t c = 0; c < d; ++c) row[c] += sgn * xs[static_cast<std::size_t>(j)][c];
    }
  }
  return f;
}

/// Pins coordinate j to `value` and re-indexes the rest in order.
inline CubeFunction restrict(const CubeFunction& f, int j, int value) {
  detail::check_coordinate(f.n(), j);
  if (value != 1 && value != -1) throw std::invalid_argument("restrict: value must be +1 or -1");
  if (f.n() == 1) throw std::invalid_argument("restrict: cannot restrict a 1-dimensional function");
  const int m = f.n() - 1;
  const std::size_t low = (std::size_t{1} << (j - 1)) - 1;
  const std::size_t pinned = value == 1 ? 0 : std::size_t{1} << (j - 1);
  const std::size_t D = static_cast<std::size_t>(f.d());
  std::vector<double> out(detail::cube_size(m) * D);
  for (std::size_t k = 0; k < detail::cube_size(m); ++k) {
    const std::size_t src = (k & low) | ((k & ~low) << 1) | pinned;
    auto row = f.at(src);
    std::copy(row.begin(), row.end(), out.begin() + static_cast<std::ptrdiff_t>(k * D));
  }
  return CubeFunction(m, f.d(), std::move(out));
}

/// f(eps) <= f(eps') whenever eps <= eps' coordinatewise, checked on all
/// covering edges.
inline bool is_monotone(const CubeFunction& f) {
  if (!f.is_boolean()) throw std::invalid_argument("is_monotone: function is not boolean");
  for (int j = 0; j < f.n(); ++j) {
    const std::size_t bit = std::size_t{1} << j;
    for (std::size_t i = 0; i < f.size(); ++i)
      if (!(i & bit) && f(i | bit) > f(i)) return false;
  }
  return true;
}

struct BriberyResult {
  int count = 0;
  std::vector<int> fixed;
  /// Mean before any pin, then after each pin.
  std::vector<double> mean_trace;
  bool reached = false;
  bool non_monotone = false;
};

/// Repeatedly pins to +1 the original coordinate of largest influence in
/// the current restriction until the mean reaches `target_mean`.
inline BriberyResult bribery_greedy(const CubeFunction& f, double target_mean, double mean_floor = -0.99) {
  if (!f.is_boolean()) throw std::invalid_argument("bribery: function is not boolean");
  BriberyResult out;
  out.non_monotone = !is_monotone(f);
  CubeFunction cur = f;
  std::vector<int> labels(static_cast<std::size_t>(f.n()));
  for (int j = 0; j < f.n(); ++j) labels[static_cast<std::size_t>(j)] = j + 1;
  double mean = cur.mean()[0];
  if (mean < mean_floor) throw std::invalid_argument("bribery: mean below the configured floor");
  out.mean_trace.push_back(mean);
  while (mean < target_mean) {
    const std::vector<double> inf = influences(cur);
    const auto best = std::max_element(inf.begin(), inf.end());
    if (*best == 0.0) break;
    const int j = static_cast<int>(best - inf.begin()) + 1;
    out.fixed.push_back(labels[static_cast<std::size_t>(j - 1)]);
    ++out.count;
    labels.erase(labels.begin() + (j - 1));
    if (cur.n() == 1) {
      mean = cur(0);
      out.mean_trace.push_back(mean);
      break;
    }
    cur = restrict(cur, j, 1);
    mean = cur.mean()[0];
    out.mean_trace.push_back(mean);
  }
  out.reached = mean >= target_mean;
  return out;
}

inline CubeFunction random_boolean(int n, std::uint64_t seed) {
  if (n < 1 || n > kExactNoiseLimit) throw std::invalid_argument("random_boolean: n must lie in [1, 20]");
  Rng rng(seed);
  return CubeFunction::from(n, [&](const CubePoint&) { return coin(rng) ? -1 : 1; });
}

enum class ValueModel { cube, sphere };

inline CubeFunction random_vector(int n, int d, std::uint64_t seed, ValueModel model = ValueModel::cube) {
  if (n < 1 || n > kExactNoiseLimit) throw std::invalid_argument("random_vector: n must lie in [1, 20]");
  if (d < 1) throw std::invalid_argument("random_vector: d must be >= 1");
  Rng rng(seed);
  CubeFunction f = CubeFunction::zero(n, d);
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto row = f.at(i);
    if (model == ValueModel::cube) {
      for (double& v : row) v = uniform(rng, -1.0, 1.0);
    } else {
      double norm = 0.0;
      while (norm == 0.0) {
        norm = 0.0;
        for (double& v : row) {
          v = standard_normal(rng);
          norm += v * v;
        }
      }
      norm = std::sqrt(norm);
      for (double& v : row) v /= norm;
    }
  }
  return f;
}

/// Zoo functions by name: dictator:n=3,j=2  parity:n=2,S=1+2  majority:n=3
/// tribes:w=2,s=4[,n=9]  random:n=6,seed=7  randvec:n=3,d=2,seed=1[,model=sphere]
/// const:n=2,c=1  linear:n=3 (standard basis of R^n).
inline CubeFunction zoo_function(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  std::map<std::string, std::string> kv;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("zoo spec '" + spec + "': expected key=value");
      kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }
  auto take = [&](const std::string& key) -> std::string {
    const auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument("zoo spec '" + spec + "': missing " + key);
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto integer = [&](const std::string& key) { return std::stoi(take(key)); };
  auto integer_or = [&](const std::string& key, int dflt) { return kv.count(key) ? integer(key) : dflt; };
  auto finish = [&](CubeFunction f) {
    if (!kv.empty()) throw std::invalid_argument("zoo spec '" + spec + "': unknown key " + kv.begin()->first);
    return f;
  };

  if (name == "dictator") {
    const int n = integer("n");
    return finish(dictator(n, integer_or("j", 1)));
  }
  if (name == "parity") {
    const int n = integer("n");
    if (!kv.count("S")) return finish(parity(n));
    std::vector<int> S;
    std::stringstream ss(take("S"));
    std::string tok;
    while (std::getline(ss, tok, '+')) S.push_back(std::stoi(tok));
    return finish(parity(n, S));
  }
  if (name == "majority") return finish(majority(integer("n")));
  if (name == "tribes") {
    const int w = integer("w");
    const int s = integer("s");
    return finish(tribes(TribesParams(w, s, integer_or("n", 0))));
  }
  if (name == "random") {
    const int n = integer("n");
    return finish(random_boolean(n, std::stoull(take("seed"))));
  }
  if (name == "randvec") {
    const int n = integer("n");
    const int d = integer("d");
    const std::uint64_t seed = std::stoull(take("seed"));
    ValueModel model = ValueModel::cube;
    if (kv.count("model")) {
      const std::string m = take("model");
      if (m == "sphere") model = ValueModel::sphere;
      else if (m != "cube") throw std::invalid_argument("zoo spec '" + spec + "': unknown model " + m);
    }
    return finish(random_vector(n, d, seed, model));
  }
  if (name == "const") {
    const int n = integer("n");
    return finish(constant(n, kv.count("c") ? std::stod(take("c")) : 1.0));
  }
  if (name == "linear") {
    const int n = integer("n");
    std::vector<std::vector<double>> xs(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
    for (int j = 0; j < n; ++j) xs[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] = 1.0;
    return finish(linear_function(xs));
  }
  throw std::invalid_argument("unknown zoo function '" + spec + "'");
}

}  // namespace kkltype
