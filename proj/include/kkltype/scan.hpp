#pragma once

// Evaluators addressable by id, and exhaustive scans over every boolean
// function on n <= 4 coordinates.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "kkltype/cube.hpp"
#include "kkltype/inequalities.hpp"
#include "kkltype/normed.hpp"
#include "kkltype/quadrature.hpp"
#include "kkltype/report.hpp"
#include "kkltype/weights.hpp"

namespace kkltype {

/// One evaluator with its parameters. Unused fields are ignored.
struct EvaluatorSpec {
  std::string id;
  double p = 2.0;
  double q = 2.0;
  double t = 1.0;
  double eps = 0.5;
  /// Type constant; when absent the space's bound is used (error if none).
  std::optional<double> type_bound;
  std::string weight = "one";
};

inline const std::vector<std::string>& evaluator_ids() {
  static const std::vector<std::string> ids{"poincare",      "kkl_vector",   "type_p",
                                            "talagrand",     "talagrand_eps", "kkl_boolean",
                                            "kkl_corollary", "hypercontractivity"};
  return ids;
}

inline bool is_evaluator(const std::string& id) {
  const auto& ids = evaluator_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

namespace detail {

inline double resolve_type2(const EvaluatorSpec& e, const NormedSpace& space) {
  if (e.type_bound) return *e.type_bound;
  if (auto b = space.type2_bound()) return *b;
  throw std::invalid_argument(e.id + ": no type-2 bound for " + space.describe() + "; supply one");
}

inline double resolve_typep(const EvaluatorSpec& e, const NormedSpace& space) {
  if (e.type_bound) return *e.type_bound;
  if (auto b = space.typep_bound(e.p)) return *b;
  throw std::invalid_argument(e.id + ": no type-p bound for " + space.describe() + "; supply one");
}

}  // namespace detail

inline InequalityReport evaluate(const EvaluatorSpec& e, const CubeFunction& f, const NormedSpace& space,
                                 const QuadratureSpec& quad = {}) {
  if (e.id == "poincare") return eval_poincare(f, space);
  if (e.id == "kkl_vector") return eval_kkl_vector(f, space, detail::resolve_type2(e, space));
  if (e.id == "type_p") return eval_type_p(f, space, e.p, detail::resolve_typep(e, space));
  if (e.id == "talagrand")
    return eval_talagrand_general(f, space, WeightFunction::parse(e.weight), detail::resolve_type2(e, space), quad);
  if (e.id == "talagrand_eps") return eval_talagrand_eps_ratio(f, space, e.eps);
  if (e.id == "kkl_boolean") return eval_kkl_boolean(f);
  if (e.id == "kkl_corollary") return eval_kkl_corollary(f);
  if (e.id == "hypercontractivity") return check_hypercontractivity(f, e.p, e.q, e.t, space);
  throw std::invalid_argument("unknown evaluator '" + e.id + "'");
}

inline constexpr int kScanDimensionLimit = 4;

/// Boolean function whose truth table has bit i set iff f(point i) = -1.
inline CubeFunction from_truth_table(int n, std::uint64_t table) {
  return CubeFunction::from(n, [table](const CubePoint& e) { return (table >> e.index()) & 1u ? -1 : 1; });
}

inline std::uint64_t truth_table(const CubeFunction& f) {
  if (!f.is_boolean() || f.n() > 6) throw std::invalid_argument("truth_table: need boolean f with n <= 6");
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f(i) == -1.0) t |= std::uint64_t{1} << i;
  return t;
}

struct ScanResult {
  InequalityReport worst;
  std::uint64_t argmin = 0;
  std::uint64_t functions = 0;
  std::uint64_t failures = 0;
};

/// Every nonconstant boolean function on n coordinates, in truth-table
/// order. The minimum slack wins; ties go to the smaller truth table.
inline ScanResult exhaustive_scan(int n, const EvaluatorSpec& e, unsigned threads = 1,
                                  const QuadratureSpec& quad = {}) {
  if (n < 1 || n > kScanDimensionLimit) throw std::invalid_argument("exhaustive_scan: n must lie in [1, 4]");
  const std::uint64_t count = std::uint64_t{1} << (std::uint64_t{1} << n);
  const NormedSpace space = NormedSpace::euclidean(1);
  const std::uint64_t first = 1, last = count - 1;  // [first, last) skips both constants
  threads = std::max(1u, std::min<unsigned>(threads, 64));

  std::vector<std::optional<ScanResult>> partial(threads);
  auto work = [&](unsigned k) {
    const std::uint64_t span = last - first;
    const std::uint64_t lo = first + span * k / threads, hi = first + span * (k + 1) / threads;
    std::optional<ScanResult> best;
    for (std::uint64_t tt = lo; tt < hi; ++tt) {
      InequalityReport r = evaluate(e, from_truth_table(n, tt), space, quad);
      const bool failed = r.is_failure();
      if (!best || r.slack < best->worst.slack) {
        const std::uint64_t fails = best ? best->failures : 0, seen = best ? best->functions : 0;
        best = ScanResult{std::move(r), tt, seen, fails};
      }
      ++best->functions;
      if (failed) ++best->failures;
    }
    partial[k] = std::move(best);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(work, k);
  }

  std::optional<ScanResult> out;
  for (auto& p : partial) {
    if (!p) continue;
    if (!out) {
      out = std::move(p);
      continue;
    }
    out->functions += p->functions;
    out->failures += p->failures;
    if (p->worst.slack < out->worst.slack) {
      out->worst = std::move(p->worst);
      out->argmin = p->argmin;
    }
  }
  out->worst.inputs.params = "argmin_table=" + std::to_string(out->argmin) +
                             (out->worst.inputs.params.empty() ? "" : ";" + out->worst.inputs.params);
  return *out;
}

}  // namespace kkltype
