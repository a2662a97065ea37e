#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "oracles.hpp"
#include "radonlik/bayes.hpp"
#include "radonlik/expfam.hpp"
#include "radonlik/mixture.hpp"
#include "radonlik/poisson.hpp"

using namespace radonlik;

namespace {

constexpr int kCases = 200;

// Reweighted copy of the first registered counting kernel: density p / w
// against the counting measure with weights w.
void add_reweighted(gen::FiniteFamily& f, gen::Gen& g, std::vector<double>& weights) {
  const auto& atoms = f.family.sample_space().atoms;
  weights.clear();
  for (std::size_t i = 0; i < atoms.size(); ++i) weights.push_back(g.uniform(0.1, 10.0));
  auto table = f.table;
  auto w = weights;
  f.family.register_kernel(DominatingMeasure::counting("weighted", atoms, weights),
                           [table, w](const Theta& t, double x) {
                             const auto i = static_cast<std::size_t>(x);
                             return safe_log(table[static_cast<std::size_t>(t[0])][i]) -
                                    std::log(w[i]);
                           });
}

}  // namespace

TEST(Property, MinimalDominatingMixtureDominates) {
  gen::Gen g(1);
  for (int c = 0; c < kCases; ++c) {
    auto f = gen::finite_family(g);
    const auto& grid = f.family.theta_grid();
    std::vector<std::size_t> all(grid.size());
    for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
    const auto q = build_minimal_dominating_measure(f.family, all);
    EXPECT_TRUE(verify_dominance(q, f.family)) << "case " << c;
    EXPECT_TRUE(mixture_dominated_by(q, f.family, f.family.measure("counting")));
    for (double x : f.family.sample_space().atoms) {
      bool any = false;
      for (const auto& row : f.table) any = any || row[static_cast<std::size_t>(x)] > 0.0;
      EXPECT_EQ(q.mass(f.family, x) > 0.0, any) << "case " << c << " atom " << x;
    }
  }
}

TEST(Property, SubMixtureDominatesOnlyWhenSupportCovered) {
  gen::Gen g(2);
  for (int c = 0; c < kCases; ++c) {
    auto f = gen::finite_family(g);
    const std::size_t members = f.table.size();
    std::vector<std::size_t> pick{static_cast<std::size_t>(g.integer(0, static_cast<int>(members) - 1))};
    const auto q = build_minimal_dominating_measure(f.family, pick);
    bool covered = true;
    for (std::size_t x = 0; x < f.table[0].size(); ++x) {
      bool any = false;
      for (const auto& row : f.table) any = any || row[x] > 0.0;
      if (any && f.table[pick[0]][x] == 0.0) covered = false;
    }
    EXPECT_EQ(verify_dominance(q, f.family), covered) << "case " << c;
  }
}

TEST(Property, MemberSupportInsideMeasureSupport) {
  gen::Gen g(3);
  for (int c = 0; c < kCases; ++c) {
    auto f = gen::finite_family(g);
    const auto outer = support_of(f.family.measure("counting"));
    for (const auto& t : f.family.theta_grid().points()) {
      for (double a : support_of(f.family, t).atoms) EXPECT_TRUE(outer.has_atom(a));
    }
  }
}

TEST(Property, FiniteKernelsNormalize) {
  gen::Gen g(4);
  for (int c = 0; c < 50; ++c) {
    auto f = gen::finite_family(g);
    std::vector<double> w;
    add_reweighted(f, g, w);
    for (const auto& t : f.family.theta_grid().points()) {
      EXPECT_NEAR(kernel_total_mass(f.family, "counting", t), 1.0, 1e-12);
      EXPECT_NEAR(kernel_total_mass(f.family, "weighted", t), 1.0, 1e-12);
    }
  }
}

TEST(Property, ReweightedCountingIsProportional) {
  gen::Gen g(5);
  for (int c = 0; c < kCases; ++c) {
    auto f = gen::finite_family(g);
    std::vector<double> w;
    add_reweighted(f, g, w);
    const double x = g.integer(0, static_cast<int>(w.size()) - 1);
    const auto c1 = likelihood_curve(f.family, "counting", x);
    const auto c2 = likelihood_curve(f.family, "weighted", x);
    const auto r = check_proportionality(c1, c2, 1e-10);
    EXPECT_TRUE(r.finiteness_match);
    if (r.finite_points == 0) continue;
    EXPECT_TRUE(r.pass) << "case " << c;
    EXPECT_NEAR(*r.constant_log_ratio, std::log(w[static_cast<std::size_t>(x)]), 1e-12);
    EXPECT_TRUE(argmax_invariance(c1, c2));
  }
}

TEST(Property, ConstantSupportImpliesDominance) {
  gen::Gen g(6);
  int constant = 0;
  for (int c = 0; c < kCases; ++c) {
    auto f = gen::finite_family(g, 6, 4, c % 2 == 0 ? 0.0 : 0.4);
    const auto& grid = f.family.theta_grid();
    std::vector<double> nodes;
    for (const auto& t : grid.points()) nodes.push_back(t[0]);
    std::vector<double> weights = g.simplex(static_cast<int>(nodes.size()), 0.3);
    const auto prior = bayes::Prior::discrete("random", nodes, weights);
    bayes::DominanceReport r;
    ASSERT_NO_THROW(r = bayes::dominance_check(f.family, "counting", prior)) << "case " << c;
    if (r.support_constant) {
      ++constant;
      EXPECT_TRUE(r.dominated);
    }
    bool positive = std::all_of(weights.begin(), weights.end(), [](double v) { return v > 0; });
    if (positive) EXPECT_TRUE(r.dominated);
  }
  EXPECT_GT(constant, 0);
}

TEST(Property, PoissonIdentityOnRandomPatterns) {
  gen::Gen g(7);
  for (int c = 0; c < kCases; ++c) {
    const int dim = g.integer(1, 2);
    std::vector<Interval> sides;
    for (int d = 0; d < dim; ++d) {
      const double lo = g.uniform(-2.0, 2.0);
      sides.push_back(Interval{lo, lo + g.uniform(0.2, 3.0)});
    }
    const Box region{sides};
    const Theta t = dim == 1 ? Theta{g.uniform(0.1, 2.0), g.uniform(-1.0, 1.0)}
                             : Theta{g.uniform(0.1, 2.0), g.uniform(-1.0, 1.0)};
    const auto model = c % 2 == 0 ? poisson::log_linear_intensity(region, ThetaGrid({t}))
                                  : poisson::sinusoidal_intensity(region, ThetaGrid({t}));
    const int n = g.integer(0, 12);
    poisson::PointPattern p{region, {}};
    for (int i = 0; i < n; ++i) {
      std::vector<double> pt;
      for (const auto& s : sides) pt.push_back(g.uniform(s.lo, s.hi));
      p.points.push_back(pt);
    }
    const double diff = poisson::loglik_product_measure(model, t, p) - poisson::loglik_jacod(model, t, p);
    const double expected = -region.volume() - std::lgamma(n + 1.0);
    EXPECT_NEAR(diff, expected, 1e-10 * std::max(1.0, std::abs(expected))) << "case " << c;
  }
}

TEST(Property, MixtureBasesProportional) {
  gen::Gen g(8);
  for (int c = 0; c < 50; ++c) {
    const double p = g.uniform(0.1, 0.9);
    const mixture::PointMassMixture base({{0.0, p}}, {{1.0 - p, mixture::exponential(g.uniform(0.5, 3.0))}});
    const auto fam = mixture::atom_weight_family(base, ThetaGrid::linspace(0.05, 0.95, 19));
    const auto sample = mixture::simulate(base, static_cast<std::size_t>(g.integer(1, 300)),
                                          static_cast<std::uint64_t>(c));
    const auto r = check_proportionality(likelihood_curve(fam, mixture::kCountingLebesgue, sample),
                                         likelihood_curve(fam, mixture::kCountingTwiceLebesgue, sample),
                                         1e-8);
    EXPECT_TRUE(r.pass) << "case " << c;
  }
}

TEST(Property, ExpFamRebasesProportional) {
  gen::Gen g(9);
  const auto f = expfam::poisson(std::nullopt, 60);
  const auto grid = ThetaGrid::linspace(0.3, 6.0, 20);
  for (int c = 0; c < 30; ++c) {
    std::vector<double> atoms;
    std::vector<double> w;
    for (int x = 0; x <= 60; ++x) {
      atoms.push_back(x);
      w.push_back(g.uniform(0.1, 5.0));
    }
    const auto mu = DominatingMeasure::counting("random", atoms, w);
    const auto fam = expfam::representation_family({f, expfam::rebase(f, mu, {Theta{2.0}})}, grid);
    std::vector<double> sample;
    for (int i = 0, n = g.integer(1, 8); i < n; ++i) sample.push_back(g.integer(0, 10));
    const auto r = check_proportionality(likelihood_curve(fam, "counting", sample),
                                         likelihood_curve(fam, "random", sample), 1e-8);
    EXPECT_TRUE(r.pass) << "case " << c << " deviation " << r.max_deviation;
  }
}
