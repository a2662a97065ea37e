#include <gtest/gtest.h>

#include <cmath>

#include "radonlik/mixture.hpp"

using namespace radonlik;
using namespace radonlik::mixture;

namespace {

PointMassMixture atom_plus_exponential(double p = 0.3) {
  return PointMassMixture({{0.0, p}}, {{1.0 - p, exponential(1.0)}});
}

}  // namespace

TEST(MixtureDensity, CorrectDensityValues) {
  const auto mix = atom_plus_exponential();
  EXPECT_DOUBLE_EQ(density_correct(mix, 0.0), 0.3);
  EXPECT_NEAR(density_correct(mix, 1.0), 0.7 * std::exp(-1.0), 1e-16);
  EXPECT_NEAR(density_correct(mix, 1.0), 0.257516, 1e-6);
  EXPECT_EQ(density_correct(mix, -1.0), 0.0);
}

TEST(MixtureDensity, NaiveDensityValues) {
  const auto mix = atom_plus_exponential();
  EXPECT_DOUBLE_EQ(density_naive(mix, 0.0), 1.0);
  EXPECT_EQ(density_naive(mix, 1.0), density_correct(mix, 1.0));
  EXPECT_EQ(density_naive(mix, -1.0), 0.0);
}

TEST(MixtureDensity, LebesguePartVanishesOnAtoms) {
  const auto mix = atom_plus_exponential();
  EXPECT_EQ(density_lebesgue_part(mix, 0.0), 0.0);
  EXPECT_EQ(density_lebesgue_part(mix, 2.0), density_correct(mix, 2.0));
}

TEST(MixtureDensity, TotalMassIsOne) {
  const PointMassMixture mix({{0.0, 0.2}, {1.0, 0.1}},
                             {{0.4, exponential(2.0)},
                              {0.2, uniform(-1.0, 1.0)},
                              {0.1, truncated_gaussian(0.5, 1.0, -2.0, 3.0)}});
  double total = 0.0;
  for (double a : mix.atom_locations()) total += density_correct(mix, a);
  const auto cuts = mix.breakpoints();
  total += integrate_split([&](double y) { return density_lebesgue_part(mix, y); }, -kInf, kInf,
                           cuts);
  EXPECT_NEAR(total, 1.0, 1e-9);
  EXPECT_EQ(cuts, (std::vector<double>{-2.0, -1.0, 0.0, 1.0, 3.0}));
}

TEST(MixtureDensity, MassFunctionConsistency) {
  const PointMassMixture mix({{0.5, 0.25}},
                             {{0.5, uniform(0.0, 1.0)}, {0.25, truncated_gaussian(0, 1, -3, 3)}});
  const auto nu = DominatingMeasure::counting_lebesgue_sum("c+l", {0.5}, Interval{-kInf, kInf});
  for (double eps : {0.3, 0.05, 1e-3}) {
    const Interval ball{0.5 - eps, 0.5 + eps};
    const double mass = nu.integrate([&](double y) { return density_correct(mix, y); }, ball);
    // CDF increment over the closed ball includes the atom at its centre.
    const double increment = mix.cdf(ball.hi) - mix.cdf(std::nextafter(ball.lo, -kInf));
    EXPECT_NEAR(mass, increment, 1e-6);
  }
}

TEST(MixtureValidation, RejectsBadMasses) {
  EXPECT_THROW(PointMassMixture({{0.0, 0.5}}, {{0.4, exponential(1.0)}}), PreconditionError);
  EXPECT_THROW(PointMassMixture({{0.0, 0.3}, {0.0, 0.2}}, {{0.5, exponential(1.0)}}),
               PreconditionError);
  EXPECT_THROW(PointMassMixture({{0.0, -0.1}}, {{1.1, exponential(1.0)}}), PreconditionError);
}

TEST(MixtureSimulate, SingleAtom) {
  const PointMassMixture mix({{2.5, 1.0}}, {});
  for (double y : simulate(mix, 100, 1)) EXPECT_EQ(y, 2.5);
}

TEST(MixtureSimulate, AtomFrequency) {
  const auto sample = simulate(atom_plus_exponential(), 10000, 11);
  double atoms = 0.0;
  for (double y : sample) {
    atoms += y == 0.0;
    EXPECT_GE(y, 0.0);
  }
  EXPECT_NEAR(atoms / 1e4, 0.3, 3.0 * std::sqrt(0.3 * 0.7 / 1e4));
}

TEST(MixtureSimulate, SeedDeterminismAndErrors) {
  const auto mix = atom_plus_exponential();
  EXPECT_EQ(simulate(mix, 500, 5), simulate(mix, 500, 5));
  EXPECT_NE(simulate(mix, 500, 5), simulate(mix, 500, 6));
  EXPECT_THROW(simulate(mix, 0, 5), PreconditionError);
  auto comp = exponential(1.0);
  comp.quantile = nullptr;
  EXPECT_THROW(simulate(PointMassMixture({{0.0, 0.5}}, {{0.5, comp}}), 10, 1),
               PreconditionError);
}

TEST(MixtureMle, AtomsOnlyPicksLargestMass) {
  const auto grid = ThetaGrid::linspace(0.1, 0.9, 9);
  const std::vector<double> sample(20, 0.0);
  const auto best = grid_mle(atom_plus_exponential(), grid, sample, DensityVariant::correct);
  ASSERT_EQ(best.indices.size(), 1u);
  EXPECT_NEAR(grid[best.indices[0]][0], 0.9, 1e-15);
}

TEST(MixtureMle, CorrectDensityIsConsistentNaiveIsNot) {
  const auto base = atom_plus_exponential();
  const auto sample = simulate(base, 10000, 2024);
  const auto grid = ThetaGrid::linspace(0.01, 0.99, 99);
  const auto correct = grid_mle(base, grid, sample, DensityVariant::correct);
  const auto naive = grid_mle(base, grid, sample, DensityVariant::naive);
  EXPECT_NEAR(grid[correct.indices[0]][0], 0.3, 0.05);
  EXPECT_GT(std::abs(grid[naive.indices[0]][0] - 0.3), 0.05);
}

TEST(MixtureFamily, TwiceLebesgueIsProportional) {
  const auto base = atom_plus_exponential();
  const auto family = atom_weight_family(base, ThetaGrid::linspace(0.05, 0.95, 19));
  const auto sample = simulate(base, 200, 3);
  const auto c1 = likelihood_curve(family, kCountingLebesgue, sample);
  const auto c2 = likelihood_curve(family, kCountingTwiceLebesgue, sample);
  const auto r = check_proportionality(c1, c2, 1e-10);
  EXPECT_TRUE(r.pass);
  std::size_t continuous = 0;
  for (double y : sample) continuous += y != 0.0;
  EXPECT_NEAR(*r.constant_log_ratio, static_cast<double>(continuous) * std::log(2.0), 1e-9);
  EXPECT_TRUE(argmax_invariance(c1, c2));
}

TEST(MixtureFamily, NaiveFailsProportionality) {
  const auto base = atom_plus_exponential();
  const auto family = atom_weight_family(base, ThetaGrid::linspace(0.05, 0.95, 19));
  const std::vector<double> sample{0.0, 1.2, 0.4};
  const auto r = check_proportionality(likelihood_curve(family, kCountingLebesgue, sample),
                                       likelihood_curve(family, kNaive, sample), 1e-8);
  EXPECT_FALSE(r.pass);
}

TEST(MixtureFamily, PureLebesgueKernelIsNegInfAtAtom) {
  const auto mix = atom_plus_exponential();
  EXPECT_EQ(safe_log(density_lebesgue_part(mix, 0.0)), kNegInf);
}
