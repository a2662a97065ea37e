#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "radonlik/measure.hpp"
#include "radonlik/mixture.hpp"
#include "radonlik/poisson.hpp"

namespace radonlik::harness {

/// Experiment names accepted on the command line, in "all" order.
const std::vector<std::string>& experiment_names();

struct ProportionalityConfig {
  std::size_t instances = 100;        // per model class
  std::size_t dominance_families = 200;
  int max_atoms = 10;
  int max_members = 5;
  std::size_t dominating_measures_per_family = 3;
  bool include_diffusion = true;
  double bridge_step = 0.01;
  int limit_j_min = 4;
  int limit_j_max = 14;
  double limit_error = 1e-3;
};

struct MixtureConfig {
  mixture::PointMassMixture base{{{0.0, 0.3}}, {{0.7, mixture::exponential(1.0)}}};
  std::size_t samples = 10000;
  ThetaGrid grid = ThetaGrid::linspace(0.01, 0.99, 99);
  double mle_tolerance = 0.05;
};

struct ExpfamConfig {
  std::string family = "poisson";
  ThetaGrid grid = ThetaGrid::linspace(0.2, 6.0, 30);
  std::vector<double> sample{1.0, 4.0, 2.0, 0.0, 3.0};
  int atom_cap = 60;
};

struct PoissonConfig {
  std::string intensity = "constant";
  Box region = Box::unit(1);
  ThetaGrid grid = ThetaGrid::linspace(0.25, 6.0, 24);
  // Explicit patterns, checked before the simulated ones. Dropped when the
  // config sets `region` without `patterns`.
  std::vector<poisson::PointPattern> patterns{{Box::unit(1), {{0.3}, {0.7}}}};
  std::size_t simulated_patterns = 20;
  Theta simulate_theta{3.0};
  double identity_tol = 1e-10;
};

struct DiffusionOracleConfig {
  double theta = 1.0;
  double t = 1.0;
  std::size_t mc_size = 100000;
  double step = 1e-3;
  std::vector<std::pair<double, double>> points{{0.0, 0.5}, {0.0, 0.0}, {0.5, -0.5},
                                                {-1.0, 0.3}, {1.0, 1.5}};
  double max_standard_errors = 3.0;
  double max_relative_error = 0.02;
};

struct DiffusionConfig {
  std::string model = "ou";
  ThetaGrid grid = ThetaGrid::linspace(0.25, 3.0, 12);
  double theta_true = 1.0;
  std::size_t observations = 10;
  double dt = 0.5;
  double y0 = 0.5;
  double bridge_step = 0.01;
  std::size_t mle_bridges = 200;
  DiffusionOracleConfig oracle;
};

struct PriorSpec {
  std::string type = "uniform";  // uniform | beta | point-mass
  double a = 1.0;
  double b = 1.0;
  double theta = 0.5;
};

struct BayesConfig {
  int n_max = 10;
  std::vector<PriorSpec> priors{PriorSpec{}, PriorSpec{"beta", 2.0, 3.0, 0.5}};
  std::size_t nodes = 64;
};

struct TiltSpec {
  std::string type = "gaussian";  // gaussian | identity
  double scale = 2.0;
};

struct McemConfig {
  double observed = 1.3;
  double rho = 0.5;
  std::size_t iterations = 20;
  std::size_t mc_size = 10000;
  double init = 0.0;
  double search_radius = 10.0;
  TiltSpec tilt;
};

struct Config {
  std::uint64_t seed = 20240917;
  double tol = 1e-8;
  std::size_t threads = 0;
  std::optional<std::filesystem::path> output_dir;
  ProportionalityConfig proportionality;
  MixtureConfig mixture;
  ExpfamConfig expfam;
  PoissonConfig poisson;
  DiffusionConfig diffusion;
  BayesConfig bayes;
  McemConfig mcem;
};

/// Parses a YAML document. Every key is optional; unknown keys, wrong types
/// and unknown catalog names raise ConfigError naming the offending path,
/// e.g. "mixture.components[0].name".
Config parse_config(const std::string& text);
Config load_config(const std::filesystem::path& path);

}  // namespace radonlik::harness
