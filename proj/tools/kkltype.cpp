// kkltype: run inequality suites, exhaustive scans, zoo inspection,
// sharpness experiments and heat-chain reconstructions.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "kkltype/kkltype.hpp"

namespace {

using namespace kkltype;

struct Common {
  std::string out;
  std::string format = "rows";
  double tol = 0.0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  unsigned threads = 0;
};

unsigned default_threads() {
  if (const char* env = std::getenv("KKL_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    std::cerr << "kkltype: ignoring malformed KKL_THREADS='" << env << "'\n";
  }
  return 1;
}

QuadratureSpec quad_of(const Common& c, QuadratureSpec q = {}) {
  if (c.tol > 0.0) q.rel_tol = c.tol;
  return q;
}

int emit(const std::vector<InequalityReport>& reports, const Common& c, ReportFormat fmt) {
  const std::string text = format_reports(reports, fmt);
  if (c.out.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    detail::write_file(c.out, text);
  }
  return any_failure(reports) ? 1 : 0;
}

CubeFunction function_arg(const std::string& spec) {
  if (spec.rfind("file:", 0) == 0) return load_function(spec.substr(5));
  return zoo_function(spec);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Influence and type-constant inequalities on the discrete cube"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  common.threads = default_threads();
  app.add_option("--out", common.out, "Write output here instead of stdout");
  app.add_option("--format", common.format, "Report format")->check(CLI::IsMember({"rows", "structured"}));
  app.add_option("--tol", common.tol, "Relative quadrature tolerance")->check(CLI::PositiveNumber);
  app.add_option_function<std::uint64_t>(
      "--seed", [&](std::uint64_t s) { common.seed = s, common.seed_set = true; }, "Seed for random sources");
  app.add_option("--threads", common.threads, "Worker threads (default: KKL_THREADS or 1)")
      ->check(CLI::Range(1u, 64u));

  auto* verify = app.add_subcommand("verify", "Run a suite file");
  std::string suite_path;
  verify->add_option("--suite", suite_path, "Suite configuration")->required()->check(CLI::ExistingFile);

  auto* scan = app.add_subcommand("scan", "Worst case over all boolean functions on n <= 4 coordinates");
  int scan_n = 4;
  std::vector<std::string> scan_ids{"kkl_boolean", "kkl_corollary"};
  scan->add_option("-n", scan_n, "Dimension")->check(CLI::Range(1, kScanDimensionLimit));
  scan->add_option("--evaluator", scan_ids, "Evaluator ids");

  auto* zoo = app.add_subcommand("zoo", "Describe or export a zoo function");
  std::string zoo_spec;
  std::string zoo_save;
  zoo->add_option("spec", zoo_spec, "e.g. tribes:w=2,s=4 or file:path.json")->required();
  zoo->add_option("--save", zoo_save, "Write the function file here");

  auto* sharp = app.add_subcommand("sharpness", "One-dimensional extremal experiments");
  std::string sharp_kind = "utv2";
  std::vector<int> sharp_K{1, 2, 4, 8, 16, 32};
  std::string sharp_g = "one";
  sharp->add_option("kind", sharp_kind, "utv1 | utv2")->check(CLI::IsMember({"utv1", "utv2"}));
  sharp->add_option("-K", sharp_K, "Levels")->delimiter(',');
  sharp->add_option("-g", sharp_g, "Weight label for utv1");

  auto* recon = app.add_subcommand("reconstruct", "Rebuild f - Ef from the integrated heat identity");
  std::string recon_spec = "majority:n=3";
  recon->add_option("spec", recon_spec, "Zoo spec or file:path.json");

  CLI11_PARSE(app, argc, argv);

  try {
    const ReportFormat fmt = parse_report_format(common.format);
    if (*verify) {
      SuiteConfig cfg = load_suite(suite_path);
      cfg.quad = quad_of(common, cfg.quad);
      if (common.seed_set) cfg.seed = common.seed;
      cfg.threads = common.threads;
      if (!app.get_option("--format")->empty()) cfg.format = fmt;
      return emit(run_suite(cfg), common, cfg.format);
    }
    if (*scan) {
      std::vector<InequalityReport> reports;
      for (const auto& id : scan_ids) {
        if (!is_evaluator(id)) throw std::invalid_argument("unknown evaluator '" + id + "'");
        EvaluatorSpec e;
        e.id = id;
        reports.push_back(exhaustive_scan(scan_n, e, common.threads, quad_of(common)).worst);
      }
      return emit(reports, common, fmt);
    }
    if (*zoo) {
      const CubeFunction f = function_arg(zoo_spec);
      if (!zoo_save.empty()) save_function(f, zoo_save);
      std::printf("n %d\nd %d\nboolean %s\n", f.n(), f.d(), f.is_boolean() ? "true" : "false");
      const NormedSpace space = NormedSpace::euclidean(f.d());
      const VarianceEnergy ve = variance_and_energy(f, space);
      std::printf("variance %.17g\nenergy %.17g\n", ve.var2, ve.energy);
      if (f.is_boolean()) {
        std::printf("monotone %s\ninfluences", is_monotone(f) ? "true" : "false");
        for (double x : influences(f)) std::printf(" %.17g", x);
        std::printf("\n");
      }
      return 0;
    }
    if (*sharp) {
      std::vector<InequalityReport> reports;
      for (int K : sharp_K) {
        if (sharp_kind == "utv2") {
          reports.push_back(utv2_report(K, quad_of(common)));
        } else {
          reports.push_back(utv1_check(WeightFunction::parse(sharp_g), K, quad_of(common)));
        }
      }
      return emit(reports, common, fmt);
    }
    if (*recon) {
      const CubeFunction f = function_arg(recon_spec);
      const Reconstruction r = chain_reconstruct(f, quad_of(common, {1e-8, 1e-14, 4000}));
      const std::vector<double> m = f.mean();
      double err = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i)
        for (int c = 0; c < f.d(); ++c)
          err = std::max(err, std::abs(r.value.at(i)[c] - (f.at(i)[c] - m[c])));
      std::printf("max_error %.17g\nquadrature_error %.17g\npanels %zu\n", err, r.error_estimate, r.panels);
      return 0;
    }
  } catch (const FormatError& e) {
    std::cerr << "kkltype: format error in " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "kkltype: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
