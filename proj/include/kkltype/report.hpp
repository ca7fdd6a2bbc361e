#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace kkltype {

/// Relative grace when deciding lhs <= rhs.
inline constexpr double kPassGrace = 1e-12;

struct ReportInputs {
  int n = 0;
  int d = 1;
  std::string space;
  /// Free-form "key=value;..." list of evaluator parameters.
  std::string params;

  friend bool operator==(const ReportInputs&, const ReportInputs&) = default;
};

/// One inequality evaluated on one input. `lhs` is always the side claimed
/// to be smaller: pass <=> lhs <= rhs (up to kPassGrace), slack = rhs / lhs.
struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double constant_used = 0.0;
  double slack = std::numeric_limits<double>::infinity();
  bool pass = true;
  /// False for evaluators whose constant is not known (empirical constants
  /// only); those never affect the exit status.
  bool constant_specified = true;
  ReportInputs inputs;
  /// Why rhs is infinite, or other remarks. Empty when nothing to say.
  std::string note;
  /// Auxiliary named values (alternate forms, measured bounds, ...).
  std::vector<std::pair<std::string, double>> extras;

  double extra(const std::string& key) const {
    for (const auto& [k, v] : extras)
      if (k == key) return v;
    return std::numeric_limits<double>::quiet_NaN();
  }

  /// Fails the run: a specified-constant inequality that does not hold.
  bool is_failure() const { return constant_specified && !pass; }

  friend bool operator==(const InequalityReport&, const InequalityReport&) = default;
};

inline double slack_of(double lhs, double rhs) {
  if (lhs == 0.0) return std::numeric_limits<double>::infinity();
  return rhs / lhs;
}

inline bool holds(double lhs, double rhs) {
  if (lhs == 0.0) return true;
  if (std::isinf(rhs) && rhs > 0.0) return true;
  return lhs <= rhs * (1.0 + kPassGrace);
}

inline InequalityReport make_report(std::string name, double lhs, double rhs, double constant,
                                    ReportInputs inputs) {
  InequalityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.constant_used = constant;
  r.slack = slack_of(lhs, rhs);
  r.pass = holds(lhs, rhs);
  r.inputs = std::move(inputs);
  return r;
}

}  // namespace kkltype
