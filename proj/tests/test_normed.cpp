#include <gtest/gtest.h>

#include <cmath>

#include "kkltype/normed.hpp"
#include "kkltype/zoo.hpp"
#include "oracles.hpp"

using namespace kkltype;

TEST(NormedSpace, ValidationAndDefaults) {
  EXPECT_THROW(NormedSpace(0, 2.0), std::invalid_argument);
  EXPECT_THROW(NormedSpace(2, 0.5), std::invalid_argument);
  EXPECT_THROW(NormedSpace(2, 2.0, 0.5), std::invalid_argument);
  EXPECT_EQ(NormedSpace(3, 2.0).type2_bound(), 1.0);
  EXPECT_DOUBLE_EQ(*NormedSpace(3, 4.0).type2_bound(), std::sqrt(3.0));
  EXPECT_FALSE(NormedSpace(3, kInfinity).type2_bound());
  EXPECT_FALSE(NormedSpace(3, 1.5).type2_bound());
  EXPECT_EQ(NormedSpace(3, 1.0, 2.0).type2_bound(), 2.0);
  EXPECT_EQ(NormedSpace(2, kInfinity).describe(), "l_inf^2");
}

TEST(VectorNorm, Examples) {
  const std::vector<double> a{3, 4}, b{1, -1}, c{1, 1, 1};
  EXPECT_DOUBLE_EQ(vector_norm(a, NormedSpace(2, 2.0)), 5.0);
  EXPECT_DOUBLE_EQ(vector_norm(b, NormedSpace(2, kInfinity)), 1.0);
  EXPECT_DOUBLE_EQ(vector_norm(c, NormedSpace(3, 1.0)), 3.0);
  EXPECT_THROW(vector_norm(c, NormedSpace(2, 2.0)), std::invalid_argument);
  const std::vector<double> big{1e200, 1e200};
  EXPECT_NEAR(vector_norm(big, NormedSpace(2, 3.0)), 1e200 * std::cbrt(2.0), 1e186);
}

TEST(LpNorm, Examples) {
  const NormedSpace r = NormedSpace::euclidean(1);
  for (double p : {1.0, 1.5, 2.0, 7.0}) EXPECT_DOUBLE_EQ(lp_norm(majority(3), p, r), 1.0);
  const CubeFunction f = linear_function({{1.0}, {1.0}});
  EXPECT_DOUBLE_EQ(lp_norm(f, 2.0, r), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(lp_norm(f, 1.0, r), 1.0);
}

TEST(LpNorm, NondecreasingInP) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const CubeFunction f = random_vector(5, 2, seed);
    const NormedSpace s(2, 3.0);
    double prev = 0.0;
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      const double v = lp_norm(f, p, s);
      EXPECT_GE(v, prev * (1 - 1e-15));
      prev = v;
    }
  }
}

TEST(Influence, Examples) {
  for (int j = 1; j <= 3; ++j) EXPECT_DOUBLE_EQ(influence(parity(3), j), 1.0);
  EXPECT_DOUBLE_EQ(influence(dictator(2, 1), 1), 1.0);
  EXPECT_DOUBLE_EQ(influence(dictator(2, 1), 2), 0.0);
  for (int j = 1; j <= 3; ++j) EXPECT_DOUBLE_EQ(influence(majority(3), j), 0.5);
  EXPECT_THROW(influence(linear_function({{1.0}, {2.0}}), 1), std::invalid_argument);
}

TEST(Influence, BooleanDerivativeNorms) {
  const NormedSpace r = NormedSpace::euclidean(1);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const CubeFunction f = random_boolean(6, seed);
    for (int j = 1; j <= 6; ++j) {
      const double inf = influence(f, j);
      EXPECT_EQ(inf, oracle::influence(f.data(), j));
      EXPECT_DOUBLE_EQ(std::pow(derivative_norm(f, j, 2.0, r), 2.0), inf);
      EXPECT_DOUBLE_EQ(derivative_norm(f, j, 1.0, r), inf);
    }
  }
}

TEST(DerivativeNorm, Examples) {
  const NormedSpace r = NormedSpace::euclidean(1);
  EXPECT_DOUBLE_EQ(derivative_norm(majority(3), 1, 1.0, r), 0.5);
  EXPECT_DOUBLE_EQ(derivative_norm(majority(3), 1, 2.0, r), std::sqrt(0.5));
  const CubeFunction f = linear_function({{0.6, -0.8}});
  const NormedSpace e(2, 2.0);
  for (double p : {1.0, 2.0, 5.0}) EXPECT_DOUBLE_EQ(derivative_norm(f, 1, p, e), 1.0);
}

TEST(Energy, Examples) {
  const NormedSpace r = NormedSpace::euclidean(1);
  const auto c = variance_and_energy(constant(3, 2.0), r);
  EXPECT_EQ(c.var2, 0.0);
  EXPECT_EQ(c.energy, 0.0);
  const auto p = variance_and_energy(parity(3), r);
  EXPECT_DOUBLE_EQ(p.var2, 1.0);
  EXPECT_DOUBLE_EQ(p.energy, 2.0);
  const auto m = variance_and_energy(majority(3), r);
  EXPECT_DOUBLE_EQ(m.var2, 1.0);
  EXPECT_DOUBLE_EQ(m.energy, 2.0);
}

TEST(Energy, BracketsVariance) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const CubeFunction f = random_vector(6, 3, seed, seed % 2 ? ValueModel::sphere : ValueModel::cube);
    for (double q : {1.0, 2.0, 4.0, kInfinity}) {
      const NormedSpace s(3, q);
      const auto ve = variance_and_energy(f, s);
      EXPECT_LE(ve.var2, ve.energy * (1 + 1e-12));
      EXPECT_LE(std::sqrt(ve.energy), 2.0 * std::sqrt(ve.var2) * (1 + 1e-12));
    }
  }
}

TEST(Energy, SampledAboveExactLimit) {
  const CubeFunction f = random_boolean(8, 1);
  EnergyOptions opts;
  opts.exact_limit = 4;
  opts.samples = 1u << 18;
  const auto s = variance_and_energy(f, NormedSpace::euclidean(1), opts);
  const auto e = variance_and_energy(f, NormedSpace::euclidean(1));
  EXPECT_FALSE(s.exact);
  EXPECT_LE(std::abs(s.energy - e.energy), 5.0 * s.energy_std_error);
}

TEST(TypeRatio, Examples) {
  const std::vector<std::vector<double>> basis{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  EXPECT_NEAR(empirical_type_ratio(basis, 2.0, NormedSpace(3, 2.0)).ratio, 1.0, 1e-15);
  const std::vector<std::vector<double>> xs{{1, 1}, {1, -1}};
  EXPECT_NEAR(empirical_type_ratio(xs, 2.0, NormedSpace(2, kInfinity)).ratio, std::sqrt(2.0), 1e-15);
  const std::vector<std::vector<double>> same(7, std::vector<double>{2.5});
  const auto r = empirical_type_ratio(same, 2.0, NormedSpace(1, 2.0));
  EXPECT_NEAR(r.ratio, 1.0, 1e-14);
  EXPECT_TRUE(r.exact);
  const std::vector<std::vector<double>> zeros(3, std::vector<double>{0.0});
  EXPECT_THROW(empirical_type_ratio(zeros, 2.0, NormedSpace(1, 2.0)), std::invalid_argument);
}

TEST(TypeRatio, NeverExceedsKnownBound) {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::vector<double>> xs(1 + trial % 8, std::vector<double>(4));
    for (auto& x : xs)
      for (double& v : x) v = standard_normal(rng);
    const NormedSpace s(4, 2.0);
    EXPECT_LE(empirical_type_ratio(xs, 2.0, s).ratio, *s.type2_bound() * (1 + 1e-12));
    const auto one = std::vector<std::vector<double>>{xs.front()};
    EXPECT_NEAR(empirical_type_ratio(one, 2.0, NormedSpace(4, 4.0)).ratio, 1.0, 1e-14);
  }
}

TEST(TypeRatio, SampledModeReproducible) {
  const std::vector<std::vector<double>> xs(25, std::vector<double>{1.0, -0.5});
  const auto a = empirical_type_ratio(xs, 2.0, NormedSpace(2, 2.0), SampleBudget{4096, 3});
  const auto b = empirical_type_ratio(xs, 2.0, NormedSpace(2, 2.0), SampleBudget{4096, 3});
  EXPECT_EQ(a.ratio, b.ratio);
  EXPECT_FALSE(a.exact);
}

TEST(Metric, ValidatesAxioms) {
  EXPECT_THROW(FiniteMetricSpace(2, {0, 1, 2, 0}), std::invalid_argument);
  EXPECT_THROW(FiniteMetricSpace(2, {1, 1, 1, 0}), std::invalid_argument);
  EXPECT_THROW(FiniteMetricSpace(3, {0, 1, 5, 1, 0, 1, 5, 1, 0}), std::invalid_argument);
  EXPECT_NO_THROW(FiniteMetricSpace(3, {0, 1, 2, 1, 0, 1, 2, 1, 0}));
}

TEST(Metric, EnergyTerms) {
  const FiniteMetricSpace two(2, {0, 1, 1, 0});
  const auto c = metric_energy_terms(constant(2, 1.0), two);
  EXPECT_EQ(c.lhs, 0.0);
  for (double x : c.edge_terms) EXPECT_EQ(x, 0.0);

  // Dictator with labels 0 / 1.
  const CubeFunction d = CubeFunction::from(3, [](const CubePoint& p) { return p.sign(1) == 1 ? 0 : 1; });
  const auto t = metric_energy_terms(d, two);
  EXPECT_DOUBLE_EQ(t.lhs, 0.5);
  EXPECT_DOUBLE_EQ(t.edge_terms[0], 1.0);
  EXPECT_DOUBLE_EQ(t.edge_terms[1], 0.0);
  EXPECT_DOUBLE_EQ(t.ratio_terms[0], 1.0);
  EXPECT_DOUBLE_EQ(t.ratio_terms[2], 0.0);
  EXPECT_THROW(metric_energy_terms(constant(2, 2.0), two), std::out_of_range);
}

TEST(Metric, MatchesEuclideanEmbedding) {
  // {-1, 1} in l_2 at distance 2.
  const FiniteMetricSpace line(2, {0, 2, 2, 0});
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const CubeFunction f = random_boolean(5, seed);
    const CubeFunction labels = CubeFunction::from(5, [&](const CubePoint& p) { return f(p.index()) == 1 ? 0 : 1; });
    const auto m = metric_energy_terms(labels, line);
    const NormedSpace r = NormedSpace::euclidean(1);
    EXPECT_DOUBLE_EQ(m.lhs, variance_and_energy(f, r).energy);
    for (int j = 1; j <= 5; ++j) EXPECT_DOUBLE_EQ(m.edge_terms[j - 1], 4.0 * std::pow(derivative_norm(f, j, 2.0, r), 2));
  }
}
