#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "radonlik/measure.hpp"

namespace radonlik::poisson {

/// Realization (N, s_1..s_N) of a point process on a bounded box.
struct PointPattern {
  Box region;
  std::vector<std::vector<double>> points;

  std::size_t count() const { return points.size(); }
  /// Throws PreconditionError if a point lies outside the region or has the
  /// wrong dimension.
  void validate() const;
};

using Intensity = std::function<double(const Theta&, std::span<const double>)>;

/// Parametric intensity lambda_theta(s) on a box, d in {1, 2}.
class IntensityModel {
 public:
  /// `closed_integral` may be empty; the integral is then computed by
  /// adaptive quadrature (nested for d = 2).
  IntensityModel(std::string name, ThetaGrid grid, Box region, Intensity intensity,
                 std::function<double(const Theta&)> closed_integral = {});

  const std::string& name() const { return name_; }
  const ThetaGrid& theta_grid() const { return grid_; }
  const Box& region() const { return region_; }
  double intensity(const Theta& theta, std::span<const double> s) const;
  /// Lambda(theta) = int_S lambda_theta(s) ds.
  double integral(const Theta& theta) const;
  bool has_closed_integral() const { return static_cast<bool>(closed_integral_); }

 private:
  std::string name_;
  ThetaGrid grid_;
  Box region_;
  Intensity intensity_;
  std::function<double(const Theta&)> closed_integral_;
};

/// lambda_theta(s) = theta[0].
IntensityModel constant_intensity(Box region, ThetaGrid grid, bool closed_form = true);
/// lambda_theta(s) = exp(theta[0] + theta[1] * s_1).
IntensityModel log_linear_intensity(Box region, ThetaGrid grid, bool closed_form = true);
/// lambda_theta(s) = theta[0] * (1 + theta[1] * sin(2 pi s_1)), |theta[1]| <= 1.
IntensityModel sinusoidal_intensity(Box region, ThetaGrid grid, bool closed_form = true);
/// Catalog lookup: "constant", "log-linear", "sinusoidal".
IntensityModel intensity_from_catalog(const std::string& name, Box region, ThetaGrid grid);

/// Thinning of a homogeneous Poisson(bound * |S|) proposal. Throws
/// PreconditionError if the intensity exceeds `bound` at a proposal point.
PointPattern simulate_thinning(const IntensityModel& model, const Theta& theta, double bound,
                               std::uint64_t seed);

/// Log of the density w.r.t. counting (x) N-dimensional Lebesgue:
///   -log N! - Lambda + N log Lambda + sum_j [log lambda(s_j) - log Lambda].
double loglik_product_measure(const IntensityModel& model, const Theta& theta,
                              const PointPattern& pattern);

/// Log of the density w.r.t. the unit-rate Poisson process law (Jacod):
///   -(Lambda - |S|) + sum_j log lambda(s_j).
double loglik_jacod(const IntensityModel& model, const Theta& theta,
                    const PointPattern& pattern);

enum class Measure { product, jacod };

inline constexpr const char* kProductMeasureId = "counting*lebesgue";
inline constexpr const char* kUnitPoissonId = "unit-poisson";

/// Argmax of the chosen log-likelihood over the model grid.
GridArgmax mle_intensity(const IntensityModel& model, const PointPattern& pattern,
                         Measure measure);

/// Family over the model grid with both kernels registered.
ModelFamily<PointPattern> to_model_family(const IntensityModel& model);

/// {"region": [[lo, hi], ...], "points": [[x, ...], ...]}
nlohmann::json pattern_to_json(const PointPattern& pattern);
/// Throws PreconditionError on malformed input.
PointPattern pattern_from_json(const nlohmann::json& j);

}  // namespace radonlik::poisson
