#pragma once

// Function, metric and report files. Every format starts with a version.
//
// Function file (JSON):
//   {"version": 1, "n": 2, "d": 1, "boolean": true,
//    "space": {"d": 1, "q": 2, "type2": 1, "typep": {"1.5": 1}},
//    "values": [1, -1, -1, 1]}
// For d > 1 each entry of "values" is an array of d numbers. q = infinity
// is written as the string "inf".

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kkltype/cube.hpp"
#include "kkltype/errors.hpp"
#include "kkltype/normed.hpp"
#include "kkltype/report.hpp"

namespace kkltype {

inline constexpr int kFormatVersion = 1;

namespace detail {

using Json = nlohmann::ordered_json;

inline Json number_json(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline double number_from(const Json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInfinity;
    if (s == "-inf") return -kInfinity;
    // a/b fractions keep configs exact for values like 4/3.
    const auto slash = s.find('/');
    try {
      if (slash != std::string::npos) return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
  }
  throw FormatError(field, "expected a number");
}

inline const Json& member(const Json& obj, const std::string& key, const std::string& prefix = {}) {
  const std::string field = prefix.empty() ? key : prefix + "." + key;
  if (!obj.is_object() || !obj.contains(key)) throw FormatError(field, "missing");
  return obj.at(key);
}

inline int integer_from(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) throw FormatError(field, "expected an integer");
  return j.get<int>();
}

inline void check_version(const Json& root) {
  const int v = integer_from(member(root, "version"), "version");
  if (v != kFormatVersion) throw FormatError("version", "unsupported version " + std::to_string(v));
}

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError("<document>", std::string("malformed JSON at byte ") + std::to_string(e.byte));
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace detail

inline nlohmann::ordered_json space_to_json(const NormedSpace& s) {
  nlohmann::ordered_json j = {{"d", s.d()}, {"q", detail::number_json(s.q())}};
  if (auto t = s.supplied_type2_bound()) j["type2"] = *t;
  if (!s.typep_bounds().empty()) {
    nlohmann::ordered_json tp = nlohmann::ordered_json::object();
    for (const auto& [p, b] : s.typep_bounds()) tp[nlohmann::ordered_json(p).dump()] = b;
    j["typep"] = tp;
  }
  return j;
}

inline NormedSpace space_from_json(const nlohmann::ordered_json& j, const std::string& prefix = "space") {
  const int d = detail::integer_from(detail::member(j, "d", prefix), prefix + ".d");
  const double q = detail::number_from(detail::member(j, "q", prefix), prefix + ".q");
  std::optional<double> t2;
  if (j.contains("type2")) t2 = detail::number_from(j.at("type2"), prefix + ".type2");
  std::map<double, double> tp;
  if (j.contains("typep")) {
    if (!j.at("typep").is_object()) throw FormatError(prefix + ".typep", "expected an object");
    for (const auto& [k, v] : j.at("typep").items())
      tp[detail::number_from(nlohmann::ordered_json(k), prefix + ".typep")] = detail::number_from(v, prefix + ".typep." + k);
  }
  try {
    return NormedSpace(d, q, t2, tp);
  } catch (const std::invalid_argument& e) {
    throw FormatError(prefix, e.what());
  }
}

struct FunctionFile {
  CubeFunction f;
  NormedSpace space;
};

inline std::string function_to_text(const CubeFunction& f, const NormedSpace& space) {
  nlohmann::ordered_json values = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto row = f.at(i);
    if (f.d() == 1) {
      values.push_back(row[0]);
    } else {
      values.push_back(nlohmann::ordered_json(std::vector<double>(row.begin(), row.end())));
    }
  }
  nlohmann::ordered_json root;
  root["version"] = kFormatVersion;
  root["n"] = f.n();
  root["d"] = f.d();
  root["boolean"] = f.is_boolean();
  root["space"] = space_to_json(space);
  root["values"] = values;
  return root.dump() + "\n";
}

inline FunctionFile function_from_text(const std::string& text) {
  const nlohmann::ordered_json root = detail::parse_json(text);
  detail::check_version(root);
  const int n = detail::integer_from(detail::member(root, "n"), "n");
  const int d = detail::integer_from(detail::member(root, "d"), "d");
  if (n < 1 || n > kMaxDimension) throw FormatError("n", "must lie in [1, 30]");
  if (d < 1) throw FormatError("d", "must be >= 1");
  const NormedSpace space =
      root.contains("space") ? space_from_json(root.at("space")) : NormedSpace::euclidean(d);
  if (space.d() != d) throw FormatError("space.d", "does not match d");

  const auto& vals = detail::member(root, "values");
  if (!vals.is_array()) throw FormatError("values", "expected an array");
  const std::size_t N = detail::cube_size(n);
  if (vals.size() != N)
    throw FormatError("values", "expected 2^n = " + std::to_string(N) + " entries, found " + std::to_string(vals.size()));
  std::vector<double> data;
  data.reserve(N * static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < N; ++i) {
    const std::string field = "values[" + std::to_string(i) + "]";
    const auto& v = vals[i];
    if (d == 1 && !v.is_array()) {
      data.push_back(detail::number_from(v, field));
      continue;
    }
    if (!v.is_array() || v.size() != static_cast<std::size_t>(d))
      throw FormatError(field, "expected an array of " + std::to_string(d) + " numbers");
    for (std::size_t c = 0; c < v.size(); ++c) data.push_back(detail::number_from(v[c], field));
  }
  CubeFunction f(n, d, std::move(data));
  if (root.contains("boolean") && root.at("boolean").is_boolean() && root.at("boolean").get<bool>() &&
      !f.is_boolean())
    throw FormatError("boolean", "flag set but values are not all +-1");
  return {std::move(f), space};
}

inline void save_function(const CubeFunction& f, const std::string& path, const NormedSpace& space) {
  if (space.d() != f.d()) throw std::invalid_argument("save_function: space dimension differs from d");
  detail::write_file(path, function_to_text(f, space));
}

inline void save_function(const CubeFunction& f, const std::string& path) {
  save_function(f, path, NormedSpace::euclidean(f.d()));
}

inline FunctionFile load_function_file(const std::string& path) { return function_from_text(detail::read_file(path)); }

inline CubeFunction load_function(const std::string& path) { return load_function_file(path).f; }

/// {"version": 1, "m": 2, "dist": [0, 1, 1, 0]} (row-major).
inline FiniteMetricSpace metric_from_text(const std::string& text) {
  const nlohmann::ordered_json root = detail::parse_json(text);
  detail::check_version(root);
  const int m = detail::integer_from(detail::member(root, "m"), "m");
  if (m < 1) throw FormatError("m", "must be >= 1");
  const auto& dist = detail::member(root, "dist");
  const std::size_t M = static_cast<std::size_t>(m);
  if (!dist.is_array() || dist.size() != M * M) throw FormatError("dist", "expected m*m numbers");
  std::vector<double> v;
  for (std::size_t i = 0; i < dist.size(); ++i) v.push_back(detail::number_from(dist[i], "dist[" + std::to_string(i) + "]"));
  try {
    return FiniteMetricSpace(M, std::move(v));
  } catch (const std::invalid_argument& e) {
    throw FormatError("dist", e.what());
  }
}

inline std::string metric_to_text(const FiniteMetricSpace& s) {
  nlohmann::ordered_json root;
  root["version"] = kFormatVersion;
  root["m"] = s.size();
  root["dist"] = s.matrix();
  return root.dump() + "\n";
}

// ---------------------------------------------------------------------------
// Reports

enum class ReportFormat { rows, structured };

inline ReportFormat parse_report_format(const std::string& s) {
  if (s == "rows") return ReportFormat::rows;
  if (s == "structured") return ReportFormat::structured;
  throw std::invalid_argument("unknown report format '" + s + "' (rows | structured)");
}

namespace detail {

inline std::string fmt17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string json_string(const std::string& s) { return nlohmann::ordered_json(s).dump(); }

inline std::string json_number(double x) {
  if (std::isfinite(x)) return fmt17(x);
  return json_string(fmt17(x));
}

}  // namespace detail

inline const char* kRowsHeader =
    "version,name,lhs,rhs,constant,slack,pass,constant_specified,n,d,space,params,note";

inline std::string format_rows(const std::vector<InequalityReport>& reports) {
  std::string out = std::string(kRowsHeader) + "\n";
  for (const auto& r : reports) {
    out += std::to_string(kFormatVersion) + "," + detail::csv_field(r.name) + "," + detail::fmt17(r.lhs) + "," +
           detail::fmt17(r.rhs) + "," + detail::fmt17(r.constant_used) + "," + detail::fmt17(r.slack) + "," +
           (r.pass ? "true" : "false") + "," + (r.constant_specified ? "true" : "false") + "," +
           std::to_string(r.inputs.n) + "," + std::to_string(r.inputs.d) + "," + detail::csv_field(r.inputs.space) +
           "," + detail::csv_field(r.inputs.params) + "," + detail::csv_field(r.note) + "\n";
  }
  return out;
}

/// {"version": 1, "reports": [{name, lhs, rhs, constant, slack, pass,
/// constant_specified, inputs: {n, d, space, params}, note, extras}]}.
inline std::string format_structured(const std::vector<InequalityReport>& reports) {
  std::string out = "{\"version\": " + std::to_string(kFormatVersion) + ", \"reports\": [";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    out += i ? ",\n  " : "\n  ";
    out += "{\"name\": " + detail::json_string(r.name) + ", \"lhs\": " + detail::json_number(r.lhs) +
           ", \"rhs\": " + detail::json_number(r.rhs) + ", \"constant\": " + detail::json_number(r.constant_used) +
           ", \"slack\": " + detail::json_number(r.slack) + ", \"pass\": " + (r.pass ? "true" : "false") +
           ", \"constant_specified\": " + (r.constant_specified ? "true" : "false") +
           ", \"inputs\": {\"n\": " + std::to_string(r.inputs.n) + ", \"d\": " + std::to_string(r.inputs.d) +
           ", \"space\": " + detail::json_string(r.inputs.space) + ", \"params\": " +
           detail::json_string(r.inputs.params) + "}, \"note\": " + detail::json_string(r.note) + ", \"extras\": {";
    for (std::size_t k = 0; k < r.extras.size(); ++k) {
      if (k) out += ", ";
      out += detail::json_string(r.extras[k].first) + ": " + detail::json_number(r.extras[k].second);
    }
    out += "}}";
  }
  out += reports.empty() ? "]}\n" : "\n]}\n";
  return out;
}

inline std::string format_reports(const std::vector<InequalityReport>& reports, ReportFormat fmt) {
  return fmt == ReportFormat::rows ? format_rows(reports) : format_structured(reports);
}

inline void emit_report(const std::vector<InequalityReport>& reports, ReportFormat fmt, const std::string& path) {
  detail::write_file(path, format_reports(reports, fmt));
}

/// Inverse of format_structured.
inline std::vector<InequalityReport> parse_structured(const std::string& text) {
  const nlohmann::ordered_json root = detail::parse_json(text);
  detail::check_version(root);
  const auto& arr = detail::member(root, "reports");
  if (!arr.is_array()) throw FormatError("reports", "expected an array");
  std::vector<InequalityReport> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = "reports[" + std::to_string(i) + "]";
    const auto& o = arr[i];
    InequalityReport r;
    r.name = detail::member(o, "name", p).get<std::string>();
    r.lhs = detail::number_from(detail::member(o, "lhs", p), p + ".lhs");
    r.rhs = detail::number_from(detail::member(o, "rhs", p), p + ".rhs");
    r.constant_used = detail::number_from(detail::member(o, "constant", p), p + ".constant");
    r.slack = detail::number_from(detail::member(o, "slack", p), p + ".slack");
    r.pass = detail::member(o, "pass", p).get<bool>();
    r.constant_specified = detail::member(o, "constant_specified", p).get<bool>();
    const auto& in = detail::member(o, "inputs", p);
    r.inputs.n = detail::integer_from(detail::member(in, "n", p + ".inputs"), p + ".inputs.n");
    r.inputs.d = detail::integer_from(detail::member(in, "d", p + ".inputs"), p + ".inputs.d");
    r.inputs.space = detail::member(in, "space", p + ".inputs").get<std::string>();
    r.inputs.params = detail::member(in, "params", p + ".inputs").get<std::string>();
    r.note = detail::member(o, "note", p).get<std::string>();
    if (o.contains("extras"))
      for (const auto& [k, v] : o.at("extras").items()) r.extras.emplace_back(k, detail::number_from(v, p + ".extras." + k));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace kkltype
