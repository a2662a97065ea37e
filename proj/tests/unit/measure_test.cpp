#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "radonlik/measure.hpp"

using namespace radonlik;

namespace {

ScalarFamily bernoulli_family(std::vector<double> grid) {
  SampleSpace<double> space{"{0,1}", [](double x) { return x == 0.0 || x == 1.0; }, {0.0, 1.0}};
  ScalarFamily f(ThetaGrid::scalar(grid), space);
  f.register_kernel(DominatingMeasure::counting("counting", {0.0, 1.0}),
                    [](const Theta& t, double x) {
                      return safe_log(x == 1.0 ? t[0] : 1.0 - t[0]);
                    });
  return f;
}

ScalarFamily point_mass_family() {
  // Members delta_0 and delta_1, indexed by theta in {0, 1}.
  SampleSpace<double> space{"{0,1}", [](double x) { return x == 0.0 || x == 1.0; }, {0.0, 1.0}};
  ScalarFamily f(ThetaGrid::scalar(std::vector<double>{0.0, 1.0}), space);
  f.register_kernel(DominatingMeasure::counting("counting", {0.0, 1.0}),
                    [](const Theta& t, double x) { return x == t[0] ? 0.0 : kNegInf; });
  return f;
}

ScalarFamily gaussian_family() {
  SampleSpace<double> space{"R", [](double x) { return std::isfinite(x); }, {}};
  ScalarFamily f(ThetaGrid::scalar(std::vector<double>{0.0}), space);
  f.register_kernel(DominatingMeasure::lebesgue("lebesgue", Box::interval(-kInf, kInf)),
                    [](const Theta& t, double x) { return normal_log_pdf(x, t[0], 1.0); });
  return f;
}

LogLikelihoodCurve curve(std::vector<double> values, std::string id = "a") {
  std::vector<double> grid(values.size());
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = static_cast<double>(i);
  return LogLikelihoodCurve{std::move(id), "omega", ThetaGrid::scalar(grid), std::move(values)};
}

}  // namespace

TEST(DominatingMeasure, RejectsDuplicateAtoms) {
  EXPECT_THROW(DominatingMeasure::counting("c", {0.0, 1.0, 0.0}), PreconditionError);
}

TEST(DominatingMeasure, RejectsZeroVolumeRegion) {
  EXPECT_THROW(DominatingMeasure::lebesgue("l", Box::interval(1.0, 1.0)), PreconditionError);
}

TEST(DominatingMeasure, BallMassOfCountingPlusLebesgue) {
  const auto m = DominatingMeasure::counting_lebesgue_sum("m", {0.0}, Interval{-kInf, kInf});
  EXPECT_NEAR(m.ball_mass(0.0, 0.25), 1.5, 1e-14);
  EXPECT_NEAR(m.ball_mass(1.0, 0.25), 0.5, 1e-14);
  EXPECT_EQ(m.atom_mass(0.0), 1.0);
  EXPECT_EQ(m.atom_mass(0.5), 0.0);
}

TEST(EvalLogDensity, UniformUnderLebesgueIsZero) {
  SampleSpace<double> space{"[0,1]", [](double x) { return x >= 0.0 && x <= 1.0; }, {}};
  ScalarFamily f(ThetaGrid::scalar(std::vector<double>{0.0}), space);
  f.register_kernel(DominatingMeasure::lebesgue("lebesgue", Box::unit(1)),
                    [](const Theta&, double) { return 0.0; });
  EXPECT_EQ(eval_log_density(f, "lebesgue", Theta{0.0}, 0.5), 0.0);
}

TEST(EvalLogDensity, BernoulliAtomMass) {
  const auto f = bernoulli_family({0.2});
  EXPECT_DOUBLE_EQ(eval_log_density(f, "counting", Theta{0.2}, 1.0), std::log(0.2));
}

TEST(EvalLogDensity, UnknownMeasureAndOutsideSpace) {
  const auto f = bernoulli_family({0.2});
  EXPECT_THROW(eval_log_density(f, "lebesgue", Theta{0.2}, 1.0), UnknownMeasureError);
  EXPECT_THROW(eval_log_density(f, "counting", Theta{0.2}, 0.5), DomainError);
}

TEST(ModelFamily, RejectsDuplicateAndVanishingKernels) {
  auto f = bernoulli_family({0.5});
  EXPECT_THROW(f.register_kernel(DominatingMeasure::counting("counting", {0.0, 1.0}),
                                 [](const Theta&, double) { return 0.0; }),
               PreconditionError);
  EXPECT_THROW(f.register_kernel(DominatingMeasure::counting("zero", {0.0, 1.0}),
                                 [](const Theta&, double) { return kNegInf; }),
               PreconditionError);
}

TEST(LikelihoodCurve, BernoulliGrid) {
  const auto f = bernoulli_family({0.2, 0.5, 0.8});
  const auto c = likelihood_curve(f, "counting", 1.0);
  ASSERT_EQ(c.values.size(), 3u);
  EXPECT_DOUBLE_EQ(c.values[0], std::log(0.2));
  EXPECT_DOUBLE_EQ(c.values[1], std::log(0.5));
  EXPECT_DOUBLE_EQ(c.values[2], std::log(0.8));
}

TEST(Proportionality, CurveAgainstItself) {
  const auto c = curve({-1.0, -0.5, -2.0});
  const auto r = check_proportionality(c, c, 1e-10);
  EXPECT_TRUE(r.pass);
  ASSERT_TRUE(r.constant_log_ratio);
  EXPECT_EQ(*r.constant_log_ratio, 0.0);
}

TEST(Proportionality, ShiftedCurvePasses) {
  const auto a = curve({-1.0, -0.5, kNegInf, -2.0});
  const auto b = curve({-4.0, -3.5, kNegInf, -5.0}, "b");
  const auto r = check_proportionality(a, b, 1e-12);
  EXPECT_TRUE(r.pass);
  EXPECT_DOUBLE_EQ(*r.constant_log_ratio, 3.0);
  EXPECT_EQ(r.finite_points, 3u);
}

TEST(Proportionality, MismatchedInfinityPatternFails) {
  const auto a = curve({-1.0, -0.5, kNegInf});
  const auto b = curve({-1.0, -0.5, -0.2}, "b");
  const auto r = check_proportionality(a, b, 1e-8);
  EXPECT_FALSE(r.finiteness_match);
  EXPECT_FALSE(r.pass);
}

TEST(Proportionality, AllNegInfIsUndefined) {
  const auto a = curve({kNegInf, kNegInf});
  const auto r = check_proportionality(a, a, 1e-8);
  EXPECT_FALSE(r.constant_log_ratio);
  EXPECT_FALSE(r.pass);
}

TEST(Proportionality, DifferentGridsRejected) {
  auto a = curve({-1.0, -2.0});
  auto b = curve({-1.0, -2.0, -3.0});
  EXPECT_THROW(check_proportionality(a, b, 1e-8), PreconditionError);
  auto c = curve({-1.0, -2.0});
  c.observation_id = "other";
  EXPECT_THROW(check_proportionality(a, c, 1e-8), PreconditionError);
}

TEST(ArgmaxInvariance, ShiftAndNegation) {
  const auto a = curve({-2.0, -1.0, -3.0});
  const auto b = curve({5.0, 6.0, 4.0}, "b");
  const auto c = curve({2.0, 1.0, 3.0}, "c");
  EXPECT_TRUE(argmax_invariance(a, b));
  EXPECT_FALSE(argmax_invariance(a, c));
}

TEST(ArgmaxSet, TiesWithinTolerance) {
  const std::vector<double> v{1.0, 1.0 + 1e-13, 0.5, kNegInf};
  EXPECT_EQ(argmax_set(v), (std::vector<std::size_t>{0, 1}));
  EXPECT_THROW(grid_argmax(std::vector<double>{kNegInf, kNegInf}), DegenerateError);
}

TEST(MinimalDominatingMeasure, TwoBernoulliMembers) {
  const auto f = bernoulli_family({0.2, 0.5});
  const std::vector<std::size_t> sel{0, 1};
  const auto q = build_minimal_dominating_measure(f, sel);
  EXPECT_NEAR(q.mass(f, 1.0), 0.35, 1e-15);
  EXPECT_NEAR(q.mass(f, 0.0), 0.65, 1e-15);
  EXPECT_TRUE(verify_dominance(q, f));
}

TEST(MinimalDominatingMeasure, SingleMemberIsThatMember) {
  const auto f = bernoulli_family({0.2, 0.5});
  const std::vector<std::size_t> sel{1};
  const auto q = build_minimal_dominating_measure(f, sel);
  EXPECT_DOUBLE_EQ(q.mass(f, 1.0), 0.5);
}

TEST(MinimalDominatingMeasure, PointMassesSplitEvenly) {
  const auto f = point_mass_family();
  const std::vector<std::size_t> sel{0, 1};
  const auto q = build_minimal_dominating_measure(f, sel);
  EXPECT_DOUBLE_EQ(q.mass(f, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(q.mass(f, 1.0), 0.5);
}

TEST(MinimalDominatingMeasure, Errors) {
  const auto f = bernoulli_family({0.2});
  EXPECT_THROW(build_minimal_dominating_measure(f, std::vector<std::size_t>{}), PreconditionError);
  EXPECT_THROW(build_minimal_dominating_measure(f, std::vector<std::size_t>{3}),
               PreconditionError);
  EXPECT_THROW(build_minimal_dominating_measure(gaussian_family(), std::vector<std::size_t>{0}),
               DomainError);
}

TEST(VerifyDominance, CountingAndPointMass) {
  const auto f = bernoulli_family({0.5});
  EXPECT_TRUE(verify_dominance(DominatingMeasure::counting("c", {0.0, 1.0}), f));
  EXPECT_FALSE(verify_dominance(DominatingMeasure::counting("delta0", {0.0}), f));
}

TEST(NeighborhoodLimit, GaussianConvergesMonotonically) {
  const auto f = gaussian_family();
  std::vector<double> radii;
  for (int j = 4; j <= 14; ++j) radii.push_back(std::ldexp(1.0, -j));
  const auto ratios =
      neighborhood_density_limit(f, f.measure("lebesgue"), Theta{0.0}, 0.0, radii);
  const double target = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  for (std::size_t j = 0; j < ratios.size(); ++j) {
    const double r = radii[j];
    const double exact = (oracle::normal_cdf(r) - oracle::normal_cdf(-r)) / (2.0 * r);
    EXPECT_NEAR(ratios[j], exact, 1e-12);
    if (j > 0) EXPECT_LT(std::abs(ratios[j] - target), std::abs(ratios[j - 1] - target));
  }
  EXPECT_LT(std::abs(ratios.back() - 0.3989423), 1e-3);
}

TEST(NeighborhoodLimit, UniformRatioIsOne) {
  SampleSpace<double> space{"[0,1]", [](double x) { return x >= 0.0 && x <= 1.0; }, {}};
  ScalarFamily f(ThetaGrid::scalar(std::vector<double>{0.0}), space);
  f.register_kernel(DominatingMeasure::lebesgue("lebesgue", Box::unit(1)),
                    [](const Theta&, double) { return 0.0; });
  const std::vector<double> radii{0.4, 0.1, 0.01};
  for (double r : neighborhood_density_limit(f, f.measure("lebesgue"), Theta{0.0}, 0.5, radii)) {
    EXPECT_NEAR(r, 1.0, 1e-13);
  }
}

TEST(NeighborhoodLimit, AtomRatioTendsToAtomMass) {
  // 0.3 delta_0 + 0.7 Exp(1) against counting{0} + Lebesgue.
  const auto nu = DominatingMeasure::counting_lebesgue_sum("c+l", {0.0}, Interval{-kInf, kInf});
  SampleSpace<double> space{"R", [](double x) { return std::isfinite(x); }, {}};
  ScalarFamily f(ThetaGrid::scalar(std::vector<double>{0.3}), space);
  f.register_kernel(nu, [](const Theta& t, double x) {
    if (x == 0.0) return std::log(t[0]);
    return x > 0.0 ? std::log(1.0 - t[0]) - x : kNegInf;
  });
  std::vector<double> radii;
  for (int j = 1; j <= 14; ++j) radii.push_back(std::ldexp(1.0, -j));
  const auto ratios = neighborhood_density_limit(f, nu, Theta{0.3}, 0.0, radii);
  for (std::size_t j = 0; j < radii.size(); ++j) {
    const double r = radii[j];
    EXPECT_NEAR(ratios[j], (0.3 + 0.7 * (1.0 - std::exp(-r))) / (1.0 + 2.0 * r), 1e-12);
  }
  EXPECT_LT(std::abs(ratios.back() - 0.3), 1e-3);
}

TEST(NeighborhoodLimit, RejectsBadRadiiAndNullBalls) {
  const auto f = gaussian_family();
  EXPECT_THROW(neighborhood_density_limit(f, f.measure("lebesgue"), Theta{0.0}, 0.0,
                                          std::vector<double>{0.1, 0.2}),
               PreconditionError);
  const auto atom = DominatingMeasure::counting("delta0", {0.0});
  EXPECT_THROW(
      neighborhood_density_limit(f, atom, Theta{0.0}, 5.0, std::vector<double>{0.1}),
      DomainError);
}

TEST(Support, CountingAndDegenerateBernoulli) {
  EXPECT_EQ(support_of(DominatingMeasure::counting("c", {0.0, 1.0, 2.0})).atoms,
            (std::vector<double>{0.0, 1.0, 2.0}));
  const auto f = bernoulli_family({1.0});
  EXPECT_EQ(support_of(f, Theta{1.0}).atoms, std::vector<double>{1.0});
}

TEST(Support, AtomPlusUniform) {
  const auto q = DominatingMeasure::counting_lebesgue_sum("q", {0.0}, Interval{0.0, 1.0}, 0.5,
                                                          {0.5});
  const auto s = support_of(q);
  EXPECT_EQ(s.atoms, std::vector<double>{0.0});
  ASSERT_TRUE(s.continuous_region);
  EXPECT_EQ(s.continuous_region->sides[0], (Interval{0.0, 1.0}));
}

TEST(KernelTotalMass, GaussianAndBernoulli) {
  EXPECT_NEAR(kernel_total_mass(gaussian_family(), "lebesgue", Theta{0.0}), 1.0, 1e-9);
  EXPECT_NEAR(kernel_total_mass(bernoulli_family({0.3}), "counting", Theta{0.3}), 1.0, 1e-15);
}
