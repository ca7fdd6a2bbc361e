#pragma once

// Declarative evaluator suites.
//
//   {"version": 1, "name": "smoke",
//    "space": {"d": 1, "q": 2},
//    "functions": [{"zoo": "parity:n=2"}, {"random": {"n": 6, "seed": 7}},
//                  {"file": "f.json"}],
//    "evaluators": [{"id": "kkl_boolean"},
//                   {"id": "hypercontractivity", "p": "4/3", "q": 2, "t": 0.35}],
//    "scans": [{"n": 4, "evaluator": "kkl_boolean"}],
//    "sharpness": [{"kind": "utv1", "g": "one", "K": 6},
//                  {"kind": "utv2", "K": 8},
//                  {"kind": "lemma", "g": "sqrt", "log_atoms": [-1, -4], "probs": [0.5, 0.5]}],
//    "quadrature": {"rel_tol": 1e-9},
//    "format": "rows"}
//
// Reports come out in order: functions x evaluators, then scans, then
// sharpness experiments.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kkltype/io.hpp"
#include "kkltype/scan.hpp"
#include "kkltype/sharpness.hpp"
#include "kkltype/zoo.hpp"

namespace kkltype {

struct FunctionSource {
  enum class Kind { file, zoo, random };
  Kind kind = Kind::zoo;
  /// Zoo spec or file path.
  std::string text;
  int n = 0;
  /// Vector dimension for random sources; 1 means boolean.
  int d = 1;
  std::optional<std::uint64_t> seed;
  ValueModel model = ValueModel::cube;
};

struct ScanRequest {
  int n = 1;
  std::string evaluator;
};

struct SharpnessRequest {
  std::string kind;
  std::string weight = "one";
  int K = 1;
  std::vector<double> log_atoms;
  std::vector<double> probs;
};

struct SuiteConfig {
  std::string name;
  std::vector<FunctionSource> functions;
  NormedSpace space = NormedSpace::euclidean(1);
  std::vector<EvaluatorSpec> evaluators;
  std::vector<ScanRequest> scans;
  std::vector<SharpnessRequest> sharpness;
  QuadratureSpec quad;
  ReportFormat format = ReportFormat::rows;
  /// Seed for random sources that carry none.
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  /// Directory that relative file sources resolve against.
  std::string base_dir;
};

namespace detail {

inline std::string string_from(const Json& j, const std::string& field) {
  if (!j.is_string()) throw FormatError(field, "expected a string");
  return j.get<std::string>();
}

inline std::uint64_t seed_from(const Json& j, const std::string& field) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    throw FormatError(field, "expected a nonnegative integer");
  return j.get<std::uint64_t>();
}

inline std::vector<double> numbers_from(const Json& j, const std::string& field) {
  if (!j.is_array()) throw FormatError(field, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number_from(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

inline EvaluatorSpec evaluator_from(const Json& j, const std::string& p) {
  EvaluatorSpec e;
  e.id = string_from(member(j, "id", p), p + ".id");
  if (!is_evaluator(e.id)) throw FormatError(p + ".id", "unknown evaluator '" + e.id + "'");
  if (j.contains("p")) e.p = number_from(j.at("p"), p + ".p");
  if (j.contains("q")) e.q = number_from(j.at("q"), p + ".q");
  if (j.contains("t")) e.t = number_from(j.at("t"), p + ".t");
  if (j.contains("eps")) e.eps = number_from(j.at("eps"), p + ".eps");
  if (j.contains("T")) e.type_bound = number_from(j.at("T"), p + ".T");
  if (j.contains("h")) {
    e.weight = string_from(j.at("h"), p + ".h");
    try {
      (void)WeightFunction::parse(e.weight);
    } catch (const std::invalid_argument& ex) {
      throw FormatError(p + ".h", ex.what());
    }
  }
  return e;
}

}  // namespace detail

inline SuiteConfig suite_from_text(const std::string& text) {
  using detail::member;
  const detail::Json root = detail::parse_json(text);
  detail::check_version(root);
  SuiteConfig c;
  c.name = root.contains("name") ? detail::string_from(root.at("name"), "name") : "suite";
  if (root.contains("space")) c.space = space_from_json(root.at("space"));
  if (root.contains("seed")) c.seed = detail::seed_from(root.at("seed"), "seed");

  if (root.contains("functions")) {
    const auto& fs = root.at("functions");
    if (!fs.is_array()) throw FormatError("functions", "expected an array");
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const std::string p = "functions[" + std::to_string(i) + "]";
      const auto& f = fs[i];
      FunctionSource src;
      if (f.contains("zoo")) {
        src.kind = FunctionSource::Kind::zoo;
        src.text = detail::string_from(f.at("zoo"), p + ".zoo");
      } else if (f.contains("file")) {
        src.kind = FunctionSource::Kind::file;
        src.text = detail::string_from(f.at("file"), p + ".file");
      } else if (f.contains("random")) {
        const auto& r = f.at("random");
        src.kind = FunctionSource::Kind::random;
        src.n = detail::integer_from(member(r, "n", p + ".random"), p + ".random.n");
        if (r.contains("d")) src.d = detail::integer_from(r.at("d"), p + ".random.d");
        if (r.contains("seed")) src.seed = detail::seed_from(r.at("seed"), p + ".random.seed");
        if (r.contains("model")) {
          const std::string m = detail::string_from(r.at("model"), p + ".random.model");
          if (m == "sphere") src.model = ValueModel::sphere;
          else if (m != "cube") throw FormatError(p + ".random.model", "expected cube or sphere");
        }
        if (!src.seed && !c.seed) throw FormatError(p + ".random.seed", "random sources need a seed");
      } else {
        throw FormatError(p, "expected one of zoo, file, random");
      }
      c.functions.push_back(std::move(src));
    }
  }
  if (root.contains("evaluators")) {
    const auto& es = root.at("evaluators");
    if (!es.is_array()) throw FormatError("evaluators", "expected an array");
    for (std::size_t i = 0; i < es.size(); ++i)
      c.evaluators.push_back(detail::evaluator_from(es[i], "evaluators[" + std::to_string(i) + "]"));
  }
  if (root.contains("scans")) {
    const auto& ss = root.at("scans");
    if (!ss.is_array()) throw FormatError("scans", "expected an array");
    for (std::size_t i = 0; i < ss.size(); ++i) {
      const std::string p = "scans[" + std::to_string(i) + "]";
      ScanRequest s;
      s.n = detail::integer_from(member(ss[i], "n", p), p + ".n");
      if (s.n < 1 || s.n > kScanDimensionLimit) throw FormatError(p + ".n", "must lie in [1, 4]");
      s.evaluator = detail::string_from(member(ss[i], "evaluator", p), p + ".evaluator");
      if (!is_evaluator(s.evaluator)) throw FormatError(p + ".evaluator", "unknown evaluator '" + s.evaluator + "'");
      c.scans.push_back(std::move(s));
    }
  }
  if (root.contains("sharpness")) {
    const auto& xs = root.at("sharpness");
    if (!xs.is_array()) throw FormatError("sharpness", "expected an array");
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const std::string p = "sharpness[" + std::to_string(i) + "]";
      SharpnessRequest s;
      s.kind = detail::string_from(member(xs[i], "kind", p), p + ".kind");
      if (xs[i].contains("g")) s.weight = detail::string_from(xs[i].at("g"), p + ".g");
      if (xs[i].contains("K")) s.K = detail::integer_from(xs[i].at("K"), p + ".K");
      if (s.kind == "lemma") {
        s.log_atoms = detail::numbers_from(member(xs[i], "log_atoms", p), p + ".log_atoms");
        s.probs = detail::numbers_from(member(xs[i], "probs", p), p + ".probs");
      } else if (s.kind != "utv1" && s.kind != "utv2") {
        throw FormatError(p + ".kind", "expected lemma, utv1 or utv2");
      }
      c.sharpness.push_back(std::move(s));
    }
  }
  if (root.contains("quadrature")) {
    const auto& q = root.at("quadrature");
    if (q.contains("rel_tol")) c.quad.rel_tol = detail::number_from(q.at("rel_tol"), "quadrature.rel_tol");
    if (q.contains("abs_tol")) c.quad.abs_tol = detail::number_from(q.at("abs_tol"), "quadrature.abs_tol");
    if (q.contains("max_panels"))
      c.quad.max_panels = static_cast<std::size_t>(detail::integer_from(q.at("max_panels"), "quadrature.max_panels"));
    try {
      c.quad.validate();
    } catch (const std::invalid_argument& e) {
      throw FormatError("quadrature", e.what());
    }
  }
  if (root.contains("format")) {
    try {
      c.format = parse_report_format(detail::string_from(root.at("format"), "format"));
    } catch (const std::invalid_argument& e) {
      throw FormatError("format", e.what());
    }
  }
  return c;
}

inline SuiteConfig load_suite(const std::string& path) {
  SuiteConfig c = suite_from_text(detail::read_file(path));
  c.base_dir = std::filesystem::path(path).parent_path().string();
  return c;
}

inline CubeFunction materialize(const FunctionSource& src, const SuiteConfig& c) {
  switch (src.kind) {
    case FunctionSource::Kind::zoo:
      return zoo_function(src.text);
    case FunctionSource::Kind::file: {
      std::filesystem::path p(src.text);
      if (p.is_relative() && !c.base_dir.empty()) p = std::filesystem::path(c.base_dir) / p;
      return load_function(p.string());
    }
    case FunctionSource::Kind::random: {
      const std::uint64_t seed = src.seed ? *src.seed : c.seed.value();
      if (src.d == 1 && src.model == ValueModel::cube) return random_boolean(src.n, seed);
      return random_vector(src.n, src.d, seed, src.model);
    }
  }
  throw std::logic_error("unreachable function source");
}

inline std::vector<InequalityReport> run_suite(const SuiteConfig& c) {
  std::vector<InequalityReport> out;
  for (const auto& src : c.functions) {
    const CubeFunction f = materialize(src, c);
    const NormedSpace space = f.d() == c.space.d() ? c.space : NormedSpace::euclidean(f.d());
    for (const auto& e : c.evaluators) out.push_back(evaluate(e, f, space, c.quad));
  }
  for (const auto& s : c.scans) {
    EvaluatorSpec e;
    e.id = s.evaluator;
    out.push_back(exhaustive_scan(s.n, e, c.threads, c.quad).worst);
  }
  for (const auto& s : c.sharpness) {
    if (s.kind == "utv2") {
      out.push_back(utv2_report(s.K, c.quad));
      continue;
    }
    const WeightFunction w = WeightFunction::parse(s.weight);
    if (s.kind == "utv1") {
      out.push_back(utv1_check(w, s.K, c.quad));
    } else {
      out.push_back(lemma_check(DiscreteRandomVariable::from_probabilities(s.log_atoms, s.probs), w, c.quad));
    }
  }
  return out;
}

inline bool any_failure(const std::vector<InequalityReport>& reports) {
  for (const auto& r : reports)
    if (r.is_failure()) return true;
  return false;
}

}  // namespace kkltype
