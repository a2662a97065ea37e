#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "radonlik/diffusion.hpp"
#include "radonlik/parallel.hpp"

using namespace radonlik;
using namespace radonlik::diffusion;

namespace {

SDESpec constant_sigma(double s0) {
  SDESpec s;
  s.name = "const-sigma";
  s.drift = [](double, const Theta&) { return 0.0; };
  s.diffusion = [s0](double, const Theta&) { return s0; };
  s.diffusion_derivative = [](double, const Theta&) { return 0.0; };
  s.state_space = Interval{kNegInf, kInf};
  s.base_point = 1.0;
  return s;
}

SDESpec driftless_geometric() {
  auto s = without_closed_forms(logistic_geometric());
  s.drift = [](double, const Theta&) { return 0.0; };
  return s;
}

ObservationSet grid_obs(std::vector<double> values, double dt) {
  ObservationSet o;
  for (std::size_t i = 0; i < values.size(); ++i) o.times.push_back(dt * static_cast<double>(i));
  o.values = std::move(values);
  return o;
}

}  // namespace

TEST(Lamperti, UnitDiffusionIsIdentity) {
  const auto ou = ornstein_uhlenbeck();
  EXPECT_EQ(lamperti(ou, 1.7, Theta{1.0}), 1.7);
  EXPECT_NEAR(lamperti(without_closed_forms(ou), 1.7, Theta{1.0}), 1.7, 1e-12);
}

TEST(Lamperti, ConstantSigmaIsLinear) {
  const auto s = constant_sigma(2.0);
  EXPECT_NEAR(lamperti(s, 3.0, Theta{0.0}), 1.0, 1e-12);
  EXPECT_NEAR(lamperti(s, -1.0, Theta{0.0}), -1.0, 1e-12);
  EXPECT_EQ(lamperti_derivative(s, 0.3, Theta{0.0}), 0.5);
}

TEST(Lamperti, GeometricSigmaIsLog) {
  const auto s = without_closed_forms(logistic_geometric());
  for (double y : {0.1, 0.9, 4.0, 30.0}) {
    EXPECT_NEAR(lamperti(s, y, Theta{1.0}), std::log(y), 1e-10);
  }
  EXPECT_EQ(lamperti_derivative(s, 4.0, Theta{1.0}), 0.25);
  EXPECT_THROW(lamperti(s, -1.0, Theta{1.0}), DomainError);
}

TEST(Lamperti, InverseRoundTrip) {
  const auto s = without_closed_forms(logistic_geometric());
  for (double x : {-3.0, -0.2, 0.0, 0.7, 2.5}) {
    EXPECT_NEAR(lamperti_inverse(s, x, Theta{1.0}), std::exp(x), 1e-9 * std::exp(x));
  }
}

TEST(Lamperti, BoundedTransformHasNoBracket) {
  auto s = constant_sigma(1.0);
  s.diffusion = [](double u, const Theta&) { return 1.0 + u * u; };
  s.base_point = 0.0;
  EXPECT_THROW(lamperti_inverse(s, 2.0, Theta{0.0}), NumericalError);
}

TEST(Lamperti, NonPositiveSigmaDetected) {
  auto s = constant_sigma(1.0);
  s.diffusion = [](double u, const Theta&) { return u; };
  s.base_point = 1.0;
  EXPECT_THROW(lamperti(s, -1.0, Theta{0.0}), NumericalError);
}

TEST(Alpha, UnitDriftExamples) {
  EXPECT_NEAR(unit_drift_alpha(ornstein_uhlenbeck(), 0.8, Theta{1.5}), -1.2, 1e-15);
  EXPECT_NEAR(unit_drift_alpha(without_closed_forms(brownian_with_drift()), 0.8, Theta{1.5}),
              1.5, 1e-15);
  for (double x : {-1.0, 0.0, 1.3}) {
    EXPECT_NEAR(unit_drift_alpha(driftless_geometric(), x, Theta{0.0}), -0.5, 1e-15);
  }
}

TEST(Alpha, NumericRouteMatchesClosedForms) {
  const auto closed = logistic_geometric();
  const auto numeric = without_closed_forms(closed);
  const Theta t{0.7};
  for (double x : {-1.0, 0.2, 1.1}) {
    EXPECT_NEAR(unit_drift_alpha(numeric, x, t), unit_drift_alpha(closed, x, t), 1e-9);
    EXPECT_NEAR(unit_drift_alpha_derivative(numeric, x, t),
                unit_drift_alpha_derivative(closed, x, t), 1e-5);
    EXPECT_NEAR(drift_potential(numeric, x, t), drift_potential(closed, x, t), 1e-9);
  }
}

TEST(Alpha, SuppliedDerivativesMatchFiniteDifferences) {
  const std::vector<double> ys{0.2, 0.9, 1.7, 3.0};
  for (const auto& s : {ornstein_uhlenbeck(), brownian_with_drift(), logistic_geometric()}) {
    EXPECT_LT(derivative_mismatch(s, Theta{0.8}, ys), 1e-5) << s.name;
  }
}

TEST(DriftPotential, Examples) {
  EXPECT_DOUBLE_EQ(drift_potential(ornstein_uhlenbeck(), 2.0, Theta{1.0}), -2.0);
  EXPECT_NEAR(drift_potential(without_closed_forms(ornstein_uhlenbeck()), 2.0, Theta{1.0}), -2.0,
              1e-10);
  EXPECT_EQ(drift_potential(ornstein_uhlenbeck(), 0.0, Theta{1.0}), 0.0);
  EXPECT_EQ(drift_potential(brownian_with_drift(), 1.7, Theta{0.0}), 0.0);
}

TEST(BridgeTransform, LinearPathAndZeroEndpoints) {
  const std::vector<double> linear{1.0, 1.5, 2.0, 2.5, 3.0};
  for (double v : bridge_from_path(linear, 1.0, 3.0)) EXPECT_NEAR(v, 0.0, 1e-15);
  const std::vector<double> path{0.0, 0.4, -0.3, 0.0};
  EXPECT_EQ(bridge_from_path(path, 0.0, 0.0), path);
  EXPECT_THROW(bridge_from_path(std::vector<double>{1.0}, 0.0, 0.0), PreconditionError);
}

TEST(BridgeTransform, RoundTrip) {
  Rng rng = make_stream(5);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> path(257);
  for (auto& v : path) v = n(rng);
  const auto back = path_from_bridge(bridge_from_path(path, path.front(), path.back()),
                                     path.front(), path.back());
  for (std::size_t i = 0; i < path.size(); ++i) EXPECT_NEAR(back[i], path[i], 1e-14);
}

TEST(BrownianBridge, EndpointsAndDeterminism) {
  const auto b = sample_brownian_bridge(2.0, 0.01, 7);
  ASSERT_EQ(b.size(), 201u);
  EXPECT_EQ(b.front(), 0.0);
  EXPECT_EQ(b.back(), 0.0);
  EXPECT_EQ(b, sample_brownian_bridge(2.0, 0.01, 7));
  EXPECT_EQ(sample_brownian_bridge(1.0, 1.0, 3), (std::vector<double>{0.0, 0.0}));
  EXPECT_THROW(sample_brownian_bridge(1.0, 0.3, 3), PreconditionError);
}

TEST(BrownianBridge, MidpointVariance) {
  Rng rng = make_stream(11);
  const int n = 100000;
  double s = 0.0;
  double q = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = sample_brownian_bridge(1.0, 0.5, rng)[1];
    s += v;
    q += v * v;
  }
  const double var = (q - s * s / n) / (n - 1);
  EXPECT_NEAR(var, 0.25, 3.0 * 0.25 * std::sqrt(2.0 / n));
}

TEST(BrownianBridge, SetCoversIntervals) {
  const auto obs = grid_obs({0.0, 0.3, 0.1}, 0.5);
  const auto set = sample_bridges(obs, 0.01, 3);
  ASSERT_EQ(set.segments.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(set.segments[i].t0, obs.times[i]);
    EXPECT_EQ(set.segments[i].t1, obs.times[i + 1]);
    EXPECT_EQ(set.segments[i].values.size(), 51u);
    EXPECT_EQ(set.segments[i].values.front(), 0.0);
    EXPECT_EQ(set.segments[i].values.back(), 0.0);
  }
}

TEST(Gt1, ZeroDriftIsGaussianIncrementSum) {
  const auto obs = grid_obs({0.0, 0.4, -0.2, 0.1}, 0.25);
  const auto bridges = sample_bridges(obs, 0.01, 1);
  double expected = 0.0;
  for (std::size_t i = 1; i < obs.values.size(); ++i) {
    const double z = (obs.values[i] - obs.values[i - 1]) / std::sqrt(0.25);
    expected += std::log(oracle::normal_pdf(z, 0.0, 1.0));
  }
  EXPECT_NEAR(gt1_log_density(brownian_with_drift(), obs, bridges, Theta{0.0}), expected, 1e-14);
}

TEST(Gt1, OuSmallThetaLimit) {
  const auto obs = grid_obs({0.0, 0.4, -0.2, 0.1}, 0.25);
  const auto bridges = sample_bridges(obs, 0.01, 1);
  EXPECT_NEAR(gt1_log_density(ornstein_uhlenbeck(), obs, bridges, Theta{1e-12}),
              gt1_log_density(brownian_with_drift(), obs, bridges, Theta{0.0}), 1e-8);
}

TEST(Gt1, MissingSegmentRejected) {
  const auto obs = grid_obs({0.0, 0.4, -0.2}, 0.25);
  auto bridges = sample_bridges(obs, 0.01, 1);
  bridges.segments.pop_back();
  EXPECT_THROW(gt1_log_density(ornstein_uhlenbeck(), obs, bridges, Theta{1.0}),
               PreconditionError);
}

TEST(Gt1, TiltedReferenceIsProportional) {
  const auto obs = grid_obs({1.0, 1.3, 0.8, 1.1, 1.6}, 0.5);
  const PathData data{obs, sample_bridges(obs, 0.005, 9)};
  const auto fam = to_model_family(logistic_geometric(), ThetaGrid::linspace(0.1, 3.0, 15),
                                   obs.times);
  const auto base = likelihood_curve(fam, kBridgeMeasureId, data);
  for (const char* id : {kTiltedBridgeMeasureId, kUnstandardizedMeasureId}) {
    const auto other = likelihood_curve(fam, id, data);
    const auto r = check_proportionality(base, other, 1e-10);
    EXPECT_TRUE(r.pass) << id << " deviation " << r.max_deviation;
    EXPECT_TRUE(argmax_invariance(base, other));
  }
  const auto r = check_proportionality(base, likelihood_curve(fam, kTiltedBridgeMeasureId, data),
                                       1e-10);
  EXPECT_NEAR(*r.constant_log_ratio, bridge_tilt_log_weight(data.bridges), 1e-10);
}

TEST(Gt1, TrapezoidRefinement) {
  const auto spec = logistic_geometric();
  const Theta t{0.6};
  auto smooth = [](std::size_t k) {
    std::vector<double> b(k + 1);
    for (std::size_t j = 0; j <= k; ++j) {
      const double s = static_cast<double>(j) / static_cast<double>(k);
      b[j] = 0.3 * std::sin(std::numbers::pi * s);
    }
    return b;
  };
  const double coarse = bridge_path_integral(spec, t, smooth(100), 0.1, 0.5, 1.0 / 100);
  const double fine = bridge_path_integral(spec, t, smooth(200), 0.1, 0.5, 1.0 / 200);
  EXPECT_LT(std::abs(coarse - fine), 1e-4);
}

TEST(TransitionMc, ZeroDriftIsExact) {
  const auto est = transition_density_mc(brownian_with_drift(), Theta{0.0}, 0.7, 0.1, -0.4, 200,
                                         0.01, 3);
  EXPECT_NEAR(est.value, oracle::normal_pdf(-0.4, 0.1, 0.7), 1e-15);
  EXPECT_EQ(est.standard_error, 0.0);
  EXPECT_THROW(transition_density_mc(brownian_with_drift(), Theta{0.0}, 1.0, 0.0, 0.0, 99, 0.01,
                                     3),
               PreconditionError);
}

TEST(TransitionMc, OuMatchesClosedForm) {
  const auto est =
      transition_density_mc(ornstein_uhlenbeck(), Theta{1.0}, 1.0, 0.0, 0.5, 20000, 0.005, 21);
  const double exact = oracle::ou_transition(1.0, 1.0, 0.0, 0.5);
  EXPECT_LT(std::abs(est.value - exact), 3.0 * est.standard_error);
  EXPECT_NEAR(std::exp(ou_transition_log_density(1.0, 1.0, 0.0, 0.5)), exact, 1e-15);
}

TEST(TransitionMc, OuSymmetry) {
  const auto a =
      transition_density_mc(ornstein_uhlenbeck(), Theta{1.0}, 1.0, 0.3, -0.2, 10000, 0.01, 1);
  const auto b =
      transition_density_mc(ornstein_uhlenbeck(), Theta{1.0}, 1.0, -0.3, 0.2, 10000, 0.01, 2);
  EXPECT_LT(std::abs(a.value - b.value),
            3.0 * std::hypot(a.standard_error, b.standard_error));
}

TEST(TransitionMc, IndependentOfThreadCount) {
  set_thread_count(1);
  const auto a =
      transition_density_mc(ornstein_uhlenbeck(), Theta{1.0}, 1.0, 0.0, 0.5, 5000, 0.01, 8);
  set_thread_count(4);
  const auto b =
      transition_density_mc(ornstein_uhlenbeck(), Theta{1.0}, 1.0, 0.0, 0.5, 5000, 0.01, 8);
  set_thread_count(0);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.standard_error, b.standard_error);
}

TEST(MleTheta, OuAgreesWithExactDensityArgmax) {
  std::vector<double> times;
  for (int i = 0; i <= 50; ++i) times.push_back(0.5 * i);
  const auto obs = simulate_ou(1.0, times, 0.0, 77);
  std::vector<double> pts;
  for (int k = 1; k <= 8; ++k) pts.push_back(0.25 * k);
  const auto grid = ThetaGrid::scalar(pts);

  std::vector<double> exact(grid.size(), 0.0);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
      exact[j] += std::log(oracle::ou_transition(pts[j], 0.5, obs.values[i], obs.values[i + 1]));
    }
  }
  const std::size_t exact_best =
      static_cast<std::size_t>(std::max_element(exact.begin(), exact.end()) - exact.begin());

  const auto mc = mle_theta(ornstein_uhlenbeck(), obs, grid, 200, 5, 0.005);
  ASSERT_FALSE(mc.best.indices.empty());
  const auto best = mc.best.indices.front();
  EXPECT_LE(best > exact_best ? best - exact_best : exact_best - best, 1u);

  const auto doubled = mle_theta(ornstein_uhlenbeck(), obs, grid, 400, 5, 0.005);
  EXPECT_EQ(doubled.best.indices, mc.best.indices);
}

TEST(MleTheta, SinglePointGrid) {
  const auto obs = grid_obs({0.0, 0.3}, 1.0);
  const auto r = mle_theta(ornstein_uhlenbeck(), obs, ThetaGrid::scalar(std::vector<double>{0.7}),
                           10, 1, 0.01);
  EXPECT_EQ(r.best.indices, std::vector<std::size_t>{0});
}

TEST(Observations, CsvRoundTripAndErrors) {
  const auto obs = grid_obs({0.1, -0.25, 1.0 / 3.0}, 0.5);
  std::stringstream ss;
  write_observations_csv(ss, obs);
  const auto back = read_observations_csv(ss);
  EXPECT_EQ(back.times, obs.times);
  EXPECT_EQ(back.values, obs.values);
  std::stringstream bad("t,y\n0,1\n0,2\n");
  EXPECT_THROW(read_observations_csv(bad), PreconditionError);
  std::stringstream junk("t,y\n0,abc\n");
  EXPECT_THROW(read_observations_csv(junk), PreconditionError);
}

TEST(Catalog, Lookup) {
  EXPECT_EQ(from_catalog("ou").name, "ou");
  EXPECT_EQ(from_catalog("logistic").name, "logistic");
  EXPECT_THROW(from_catalog("cir"), PreconditionError);
}

TEST(Simulation, LampertiEulerMatchesOuMoments) {
  const std::vector<double> times{0.0, 1.0};
  const double theta = 1.0;
  const int reps = 4000;
  double sum = 0.0;
  double sumsq = 0.0;
  for (int r = 0; r < reps; ++r) {
    const auto obs = simulate_lamperti_euler(ornstein_uhlenbeck(), Theta{theta}, times, 1.0,
                                             0.01, 300 + r);
    sum += obs.values[1];
    sumsq += obs.values[1] * obs.values[1];
  }
  const double mean = sum / reps;
  const double var = sumsq / reps - mean * mean;
  const double exact_var = -std::expm1(-2.0) / 2.0;
  EXPECT_NEAR(mean, std::exp(-1.0), 4.0 * std::sqrt(exact_var / reps) + 0.01);
  EXPECT_NEAR(var, exact_var, 0.05);
}

TEST(Simulation, LogisticStaysPositive) {
  std::vector<double> times;
  for (int i = 0; i <= 20; ++i) times.push_back(0.5 * i);
  const auto obs = simulate_lamperti_euler(logistic_geometric(), Theta{1.5}, times, 0.2, 1e-3, 4);
  for (double y : obs.values) EXPECT_GT(y, 0.0);
}
