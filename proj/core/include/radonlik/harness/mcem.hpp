#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "radonlik/harness/config.hpp"
#include "radonlik/measure.hpp"

namespace radonlik::harness {

/// Bivariate Gaussian (w1, w2) with mean (theta, theta), unit variances and
/// correlation rho; w1 observed, w2 missing.
struct MissingDataModel {
  double rho;
  TiltSpec tilt;

  /// log pi_1: density against 2-D Lebesgue.
  double log_joint_lebesgue(double theta, double w1, double w2) const;
  /// log g, the theta-free reference density of the tilted measure.
  double log_tilt(double w1, double w2) const;
  /// log pi_2 = log pi_1 - log g: density against g * Lebesgue.
  double log_joint_tilted(double theta, double w1, double w2) const;
};

inline constexpr const char* kMcemLebesgueId = "lebesgue2";
inline constexpr const char* kMcemTiltedId = "tilted-lebesgue2";

struct McemRun {
  std::string measure_id;
  std::vector<double> trajectory;  // theta_0, ..., theta_T
  double estimate = 0.0;
  double standard_error = 0.0;     // stationary MC-EM spread
  double effective_sample_size = 0.0;
  std::vector<double> final_draws; // conditional sampler output, last iteration
};

struct McemReport {
  McemRun lebesgue;
  McemRun tilted;
  double difference = 0.0;
  double marginal_mle = 0.0;
  double ks_distance = 0.0;
  std::vector<LogLikelihoodCurve> complete_data_curves;  // at w2 = E[w2 | w1, theta_hat]
};

/// MC-EM under both dominating measures with common random numbers. Measure
/// 1 draws w2 from the exact conditional; measure 2 draws from its own
/// conditional kernel (proportional to pi_1 / g) by importance resampling of
/// the same proposals, then reweights the M-step by g. Throws DegenerateError
/// when an importance effective sample size falls below 10% of mc_size.
McemReport mcem_missing_data(const McemConfig& config, std::uint64_t seed);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_distance(std::vector<double> a, std::vector<double> b);

}  // namespace radonlik::harness
