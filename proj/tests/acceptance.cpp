// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--allow-fail N]...
//
// Exit status is 0 when every criterion passes, or fails only where listed
// with --allow-fail.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kkltype/kkltype.hpp"

namespace {

using namespace kkltype;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Check {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok && out_.pass) {
      out_.pass = false;
      out_.detail = what;
    }
  }
  Outcome done(std::string summary) {
    if (out_.pass) out_.detail = std::move(summary);
    return out_;
  }

 private:
  Outcome out_;
};

double rel_err(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Corpus shared by the vector KKL, type-p and Talagrand checks.
struct Corpus {
  std::vector<std::pair<CubeFunction, NormedSpace>> items;
  std::size_t scalar_count = 0;
};

std::vector<CubeFunction> zoo() {
  std::vector<CubeFunction> z;
  for (int n : {1, 3, 6}) z.push_back(dictator(n, n));
  for (int n : {2, 4, 7}) z.push_back(parity(n));
  z.push_back(parity(5, {1, 3}));
  for (int n : {3, 5, 7, 9}) z.push_back(majority(n));
  for (auto [w, s] : {std::pair{1, 3}, {2, 2}, {2, 4}, {3, 3}, {4, 2}}) z.push_back(tribes({w, s}));
  z.push_back(tribes({2, 3, 8}));
  z.push_back(constant(3, 1.0));
  z.push_back(linear_function({{1.0}, {0.5}, {-2.0}, {0.25}}));
  return z;
}

Corpus build_corpus() {
  Corpus c;
  for (auto& f : zoo()) c.items.emplace_back(std::move(f), NormedSpace::euclidean(1));
  Rng rng(7001);
  for (int i = 0; i < 200; ++i) {
    const int n = 1 + static_cast<int>(rng() % 10);
    c.items.emplace_back(random_boolean(n, 1000 + i), NormedSpace::euclidean(1));
  }
  c.scalar_count = c.items.size();
  for (int i = 0; i < 50; ++i) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const int d = 2 + static_cast<int>(rng() % 4);
    const double q = i % 2 ? 4.0 : 2.0;
    const auto model = i % 3 ? ValueModel::cube : ValueModel::sphere;
    c.items.emplace_back(random_vector(n, d, 5000 + i, model), NormedSpace(d, q));
  }
  return c;
}

const Corpus& corpus() {
  static const Corpus c = build_corpus();
  return c;
}

Outcome c1() {
  Check ck;
  const auto start = Clock::now();
  Rng rng(101);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + static_cast<int>(rng() % 12);
    const int d = 1 + static_cast<int>(rng() % 4);
    const CubeFunction f = random_vector(n, d, 200 + i);
    const CubeFunction g = inverse_walsh(walsh_transform(f));
    double scale = 0.0, err = 0.0;
    for (std::size_t k = 0; k < f.data().size(); ++k) {
      scale = std::max(scale, std::abs(f.data()[k]));
      err = std::max(err, std::abs(f.data()[k] - g.data()[k]));
    }
    worst = std::max(worst, err / scale);
    const WalshSpectrum s = walsh_transform(f);
    double spec = 0.0, vals = 0.0;
    for (std::size_t k = 0; k < f.data().size(); ++k) vals += f.data()[k] * f.data()[k];
    for (std::size_t m = 0; m < f.size(); ++m)
      for (double v : s.coeff(m)) spec += v * v;
    worst = std::max(worst, rel_err(spec, vals / static_cast<double>(f.size())));
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  ck.require(worst <= 1e-12, "relative error " + fmt(worst));
  ck.require(secs < 5.0, "runtime " + fmt(secs) + " s");
  return ck.done("max rel error " + fmt(worst) + ", " + fmt(secs) + " s");
}

Outcome c2() {
  Check ck;
  double worst = 0.0;
  Rng rng(202);
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + static_cast<int>(rng() % 10);
    const CubeFunction f = i % 2 ? random_boolean(n, 300 + i) : random_vector(n, 1, 300 + i);
    const WalshSpectrum s = walsh_transform(f);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t m = 0; m < f.size(); ++m) lhs += std::popcount(m) * s.coeff(m)[0] * s.coeff(m)[0];
    for (int j = 1; j <= n; ++j)
      for (double v : derivative(f, j).data()) rhs += v * v / static_cast<double>(f.size());
    worst = std::max(worst, rel_err(lhs, rhs));
  }
  ck.require(worst <= 1e-12, "relative error " + fmt(worst));
  return ck.done("max rel error " + fmt(worst));
}

Outcome c3() {
  Check ck;
  Rng rng(303);
  double worst = 0.0, lo = 1e9, hi = 0.0;
  int ratios = 0, floored = 0;
  for (int i = 0; i < 20; ++i) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const CubeFunction f = i % 2 ? random_boolean(n, 400 + i) : random_vector(n, 1 + i % 3, 400 + i);
    for (double t : {0.1, 0.5, 1.0, 2.0}) {
      const double r1 = heat_identity_residual(f, t, 1e-4);
      const double r2 = heat_identity_residual(f, t, 5e-5);
      worst = std::max(worst, r1);
      // Below this the central difference is dominated by cancellation.
      double sup = 0.0;
      for (double v : f.data()) sup = std::max(sup, std::abs(v));
      if (r1 <= 10.0 * std::numeric_limits<double>::epsilon() * sup / 1e-4) {
        ++floored;
        continue;
      }
      ++ratios;
      const double ratio = r1 / r2;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      ck.require(ratio >= 3.5 && ratio <= 4.5,
                 "halving ratio " + fmt(ratio) + " at n=" + std::to_string(n) + " t=" + fmt(t));
    }
  }
  ck.require(worst <= 1e-6, "residual " + fmt(worst));
  return ck.done("max residual " + fmt(worst) + ", " + std::to_string(ratios) + " halving ratios in [" + fmt(lo) +
                 ", " + fmt(hi) + "], " + std::to_string(floored) + " at roundoff");
}

Outcome c4() {
  Check ck;
  double worst = 0.0;
  const QuadratureSpec tight{1e-8, 1e-14, 4000};
  for (const auto& f : zoo()) {
    if (f.n() > 6) continue;
    const Reconstruction r = chain_reconstruct(f, tight);
    const auto mean = f.mean();
    for (std::size_t i = 0; i < f.size(); ++i)
      for (int c = 0; c < f.d(); ++c)
        worst = std::max(worst, std::abs(r.value.at(i)[c] - (f.at(i)[c] - mean[c])));
  }
  const Reconstruction e1 = chain_reconstruct(dictator(1, 1), {1e-10, 1e-15, 4000});
  const double e1err = std::max(std::abs(e1.value(0) - 1.0), std::abs(e1.value(1) + 1.0));
  ck.require(worst <= 1e-6, "zoo max error " + fmt(worst));
  ck.require(e1err <= 1e-9, "eps_1 error " + fmt(e1err));
  return ck.done("zoo max error " + fmt(worst) + ", eps_1 error " + fmt(e1err));
}

Outcome scan_criterion(const std::string& id) {
  Check ck;
  EvaluatorSpec e;
  e.id = id;
  const auto start = Clock::now();
  double min_slack = kInfinity;
  std::uint64_t total = 0, failures = 0;
  for (int n = 1; n <= 4; ++n) {
    const ScanResult r = exhaustive_scan(n, e, 1);
    min_slack = std::min(min_slack, r.worst.slack);
    total += r.functions;
    failures += r.failures;
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  ck.require(failures == 0, std::to_string(failures) + " failing functions");
  ck.require(min_slack >= 1.0, "min slack " + fmt(min_slack));
  ck.require(secs < 60.0, "runtime " + fmt(secs) + " s");
  return ck.done(std::to_string(total) + " functions, min slack " + fmt(min_slack) + ", " + fmt(secs) + " s");
}

Outcome c7() {
  Check ck;
  double min_slack = kInfinity;
  for (const auto& [f, space] : corpus().items) {
    const auto r = eval_kkl_vector(f, space, *space.type2_bound());
    ck.require(r.pass, "kkl_vector fails on n=" + std::to_string(f.n()) + " " + space.describe());
    min_slack = std::min(min_slack, r.slack);
  }
  double worst_grid = 0.0;
  for (int k = 0; k <= 120; ++k) {
    const double a = std::pow(10.0, -12.0 * k / 120.0);
    const double v = kernel_integral(a, 2.0), b = kernel_gaussian_bound(a);
    worst_grid = std::max(worst_grid, v / b);
    ck.require(v <= b * (1 + 1e-9), "kernel exceeds bound at a=" + fmt(a));
  }
  return ck.done(std::to_string(corpus().items.size()) + " inputs, min slack " + fmt(min_slack) +
                 ", kernel/bound max " + fmt(worst_grid));
}

Outcome c8() {
  Check ck;
  const double v = kernel_integral(1.0, 2.0);
  ck.require(std::abs(v - std::numbers::pi / 2) <= 1e-9, "kernel(1,2) = " + fmt(v));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15f", v);
  return ck.done(std::string("kernel(1,2) = ") + buf);
}

Outcome c9() {
  Check ck;
  double min_slack = kInfinity, agree = 0.0;
  const auto& items = corpus().items;
  for (std::size_t i = 0; i < corpus().scalar_count; ++i) {
    const auto& [f, space] = items[i];
    for (double p : {1.0, 1.25, 1.5, 2.0}) {
      const auto r = eval_type_p(f, space, p, 1.0);
      ck.require(r.pass, "type_p fails at p=" + fmt(p) + " n=" + std::to_string(f.n()));
      min_slack = std::min(min_slack, r.slack);
      if (p == 2.0) {
        const auto v = eval_kkl_vector(f, space, 1.0);
        agree = std::max({agree, rel_err(r.lhs, v.lhs), rel_err(r.rhs, v.rhs)});
      }
    }
  }
  ck.require(agree <= 1e-12, "p=2 disagrees with kkl_vector by " + fmt(agree));
  return ck.done("min slack " + fmt(min_slack) + ", p=2 agreement " + fmt(agree));
}

Outcome c10() {
  Check ck;
  double min_slack = kInfinity;
  const std::vector<WeightFunction> hs{WeightFunction::one(), WeightFunction::sqrt(), WeightFunction::power(0.9),
                                       WeightFunction::t_over_log(0.5)};
  for (const auto& h : hs)
    for (const auto& [f, space] : corpus().items) {
      const auto r = eval_talagrand_general(f, space, h, *space.type2_bound());
      ck.require(r.pass, "talagrand fails for h=" + h.label() + " n=" + std::to_string(f.n()));
      min_slack = std::min(min_slack, r.slack);
    }
  return ck.done("4 weights x " + std::to_string(corpus().items.size()) + " inputs, min slack " + fmt(min_slack));
}

Outcome c11() {
  Check ck;
  Rng rng(1111);
  const std::vector<WeightFunction> gs{WeightFunction::one(), WeightFunction::power(0.25), WeightFunction::sqrt()};
  double min_slack = kInfinity;
  int count = 0;
  for (int i = 0; i < 1000; ++i) {
    const int m = 1 + static_cast<int>(rng() % 12);
    std::vector<double> atoms, probs;
    double total = 0.0;
    for (int k = 0; k < m; ++k) {
      atoms.push_back(-std::exp(uniform(rng, -6.0, 14.0)));
      probs.push_back(uniform01(rng) + 1e-6);
      total += probs.back();
    }
    for (double& p : probs) p /= total;
    const auto x = DiscreteRandomVariable::from_probabilities(atoms, probs);
    for (const auto& g : gs) {
      const auto r = lemma_check(x, g);
      ++count;
      ck.require(r.pass, "lemma fails for g=" + g.label() + " at variable " + std::to_string(i));
      min_slack = std::min(min_slack, r.slack);
    }
  }
  const double single = lemma_lhs(DiscreteRandomVariable::from_probabilities({-1.0}, {1.0}), WeightFunction::one());
  const double expect = std::sqrt(std::numbers::pi / 2.0) * std::erf(1.0 / std::sqrt(2.0));
  ck.require(std::abs(single - expect) <= 1e-6, "single atom " + fmt(single));
  return ck.done(std::to_string(count) + " checks, min slack " + fmt(min_slack) + ", single atom " + fmt(single));
}

Outcome c12() {
  Check ck;
  double min_slack = kInfinity;
  for (const auto& g : {WeightFunction::one(), WeightFunction::power(0.25), WeightFunction::sqrt()})
    for (int K = 2; K <= 8; ++K) {
      const auto r = utv1_check(g, K);
      ck.require(r.pass, "utv1 fails for g=" + g.label() + " K=" + std::to_string(K));
      min_slack = std::min(min_slack, r.slack);
    }
  return ck.done("21 cases, min slack " + fmt(min_slack));
}

Outcome c13() {
  Check ck;
  const int Ks[] = {1, 2, 4, 8, 16, 32};
  std::vector<double> ratios;
  for (int K : Ks) {
    const LevelWeights lv = utv2_levels(K);
    const Utv2Sides s = utv2_sides(lv);
    ck.require(std::isfinite(s.integral) && std::isfinite(s.root_sum) && s.integral > 0.0,
               "non-finite sides at K=" + std::to_string(K));
    ratios.push_back(s.integral / s.root_sum);
  }
  for (std::size_t i = 1; i < ratios.size(); ++i)
    ck.require(ratios[i] >= ratios[i - 1], "ratio decreases at K=" + std::to_string(Ks[i]));
  double direct = 0.0;
  for (int K : {1, 2}) direct = std::max(direct, rel_err(utv2_ratio(K), utv2_ratio_direct(K)));
  ck.require(direct <= 1e-10, "log vs direct " + fmt(direct));
  const double growth = ratios[4] / ratios[2];
  ck.require(growth >= 1.8, "ratio(16)/ratio(4) = " + fmt(growth) + " < 1.8 (ratios " + fmt(ratios[0]) + " .. " +
                                fmt(ratios[5]) + ", monotone, finite, direct agreement " + fmt(direct) + ")");
  return ck.done("ratios " + fmt(ratios[0]) + " .. " + fmt(ratios[5]) + ", ratio(16)/ratio(4) = " + fmt(growth));
}

Outcome c14() {
  Check ck;
  double worst = 0.0;
  for (int w = 1; w <= 16; ++w)
    for (int s = 1; w * s <= 16; ++s) {
      const CubeFunction f = tribes({w, s});
      const double formula = tribes_influence_formula({w, s});
      for (int j = 1; j <= w * s; ++j) worst = std::max(worst, std::abs(influence(f, j) - formula));
    }
  ck.require(worst <= 1e-12, "formula vs enumeration " + fmt(worst));
  double lo = kInfinity, hi = 0.0;
  for (int k = 4; k <= 20; ++k) {
    const double n = std::ldexp(1.0, k);
    const int w = static_cast<int>(std::ceil(std::log2(n) - std::log2(std::log(n))));
    const int s = static_cast<int>(n) / w;
    const double v = tribes_influence_formula({w, s}) * n / std::log(n);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  ck.require(lo >= 0.1 && hi <= 10.0, "band [" + fmt(lo) + ", " + fmt(hi) + "]");
  const CubeFunction t = tribes({2, 2});
  const double mean = t.mean()[0];
  ck.require(1.0 - mean * mean == 63.0 / 64.0, "Var(tribes(2,2)) = " + fmt(1.0 - mean * mean));
  return ck.done("enumeration error " + fmt(worst) + ", Inf*n/log n in [" + fmt(lo) + ", " + fmt(hi) +
                 "], Var = 63/64");
}

Outcome c15() {
  Check ck;
  Rng rng(1515);
  int passed = 0, refused = 0;
  for (int i = 0; i < 500; ++i) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const int d = 1 + static_cast<int>(rng() % 3);
    const CubeFunction f = d == 1 && i % 2 ? random_boolean(n, 6000 + i) : random_vector(n, d, 6000 + i);
    const double p = uniform(rng, 1.05, 4.0);
    const double q = p + uniform(rng, 0.0, 6.0);
    const double t0 = q > p ? -0.5 * std::log((p - 1.0) / (q - 1.0)) : 0.0;
    const double t = i % 10 == 0 ? t0 : t0 + uniform(rng, 0.0, 2.0);
    const auto r = check_hypercontractivity(f, p, q, t, NormedSpace(d, 2.0));
    if (r.pass) ++passed;
    ck.require(r.pass, "fails inside the region at p=" + fmt(p) + " q=" + fmt(q) + " t=" + fmt(t));
  }
  for (int i = 0; i < 20; ++i) {
    const CubeFunction f = random_boolean(4, 7000 + i);
    const double p = uniform(rng, 1.1, 3.0);
    const double q = p + uniform(rng, 0.5, 4.0);
    const double t0 = -0.5 * std::log((p - 1.0) / (q - 1.0));
    try {
      (void)check_hypercontractivity(f, p, q, t0 * (1.0 - 1e-3), NormedSpace::euclidean(1));
      ck.require(false, "evaluated outside the region at p=" + fmt(p) + " q=" + fmt(q));
    } catch (const HypercontractivityRegionError&) {
      ++refused;
    }
  }
  return ck.done(std::to_string(passed) + "/500 inside pass, " + std::to_string(refused) + "/20 outside refused");
}

Outcome c16() {
  Check ck;
  const std::string suite = std::string(KKL_SUITES_DIR) + "/full.json";
  const auto dir = std::filesystem::temp_directory_path();
  const std::string a = (dir / "kkltype_acceptance_a.json").string();
  const std::string b = (dir / "kkltype_acceptance_b.json").string();
  for (const auto& path : {a, b}) {
    const SuiteConfig c = load_suite(suite);
    emit_report(run_suite(c), c.format, path);
  }
  const std::string ta = detail::read_file(a), tb = detail::read_file(b);
  ck.require(!ta.empty() && ta == tb, "report files differ");
  std::filesystem::remove(a);
  std::filesystem::remove(b);
  return ck.done("two runs of full.json, " + std::to_string(ta.size()) + " identical bytes");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> allow;
  app.add_option("--allow-fail", allow, "Criterion whose failure does not affect the exit status")
      ->check(CLI::Range(1, 16));
  CLI11_PARSE(app, argc, argv);
  const std::set<int> allowed(allow.begin(), allow.end());

  const std::vector<std::function<Outcome()>> criteria{
      c1, c2, c3, c4, [] { return scan_criterion("kkl_boolean"); }, [] { return scan_criterion("kkl_corollary"); },
      c7, c8, c9, c10, c11, c12, c13, c14, c15, c16};

  int hard_failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    const auto start = Clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("criterion %d: %s %s [%.2f s]%s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs,
                !o.pass && allowed.count(id) ? " (allowed)" : "");
    std::fflush(stdout);
    if (!o.pass && !allowed.count(id)) ++hard_failures;
  }
  return hard_failures == 0 ? 0 : 1;
}
