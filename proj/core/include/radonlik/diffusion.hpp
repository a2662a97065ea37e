#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "radonlik/measure.hpp"
#include "radonlik/random.hpp"

namespace radonlik::diffusion {

/// f(value, theta).
using ScalarFn = std::function<double(double, const Theta&)>;

/// dY = a(Y, theta) ds + sigma(Y, theta) dW on an open state interval.
/// Closed forms are optional; when absent the quantity is computed
/// numerically (quadrature, bisection, central differences).
struct SDESpec {
  std::string name;
  ScalarFn drift;
  ScalarFn diffusion;
  ScalarFn diffusion_derivative;  // d sigma / dy
  Interval state_space;           // interior is the state space
  double base_point = 0.0;        // lower limit of the Lamperti integral

  ScalarFn lamperti;          // eta(y, theta)
  ScalarFn lamperti_inverse;  // eta^{-1}(x, theta)
  ScalarFn alpha;             // unit-diffusion drift alpha(x, theta)
  ScalarFn alpha_derivative;  // d alpha / dx
  ScalarFn alpha_potential;   // A(u, theta) = int_0^u alpha
};

/// a = -theta y, sigma = 1.
SDESpec ornstein_uhlenbeck();
/// a = theta, sigma = 1.
SDESpec brownian_with_drift();
/// a = theta y (1 - y), sigma = y on (0, inf), base point 1.
SDESpec logistic_geometric();
/// "ou", "brownian-drift", "logistic".
SDESpec from_catalog(const std::string& name);
/// Copy with every closed form removed, forcing the numerical routes.
SDESpec without_closed_forms(SDESpec spec);

/// Largest relative gap between the supplied sigma' and a central finite
/// difference of sigma (h = 1e-6 * max(1, |y|)) over the points, plus the
/// same for a closed-form alpha' against alpha, if supplied.
double derivative_mismatch(const SDESpec& spec, const Theta& theta,
                           std::span<const double> y_points);

/// eta(y) = int_{base}^{y} du / sigma(u, theta). Throws DomainError outside
/// the state space and NumericalError if sigma <= 0 on the way.
double lamperti(const SDESpec& spec, double y, const Theta& theta);
/// 1 / sigma(y, theta).
double lamperti_derivative(const SDESpec& spec, double y, const Theta& theta);
/// Monotone inversion of eta by bracketing and bisection (tolerance 1e-12).
/// Throws NumericalError when no bracket is found.
double lamperti_inverse(const SDESpec& spec, double x, const Theta& theta);
/// alpha(x) = a(u)/sigma(u) - sigma'(u)/2 with u = eta^{-1}(x).
double unit_drift_alpha(const SDESpec& spec, double x, const Theta& theta);
/// d alpha / dx, central difference with h = 1e-5 when not in closed form.
double unit_drift_alpha_derivative(const SDESpec& spec, double x, const Theta& theta);
/// A(u) = int_0^u alpha(z) dz.
double drift_potential(const SDESpec& spec, double u, const Theta& theta);
/// (alpha^2 + alpha') / 2 at x.
double path_integrand(const SDESpec& spec, double x, const Theta& theta);

struct ObservationSet {
  std::vector<double> times;
  std::vector<double> values;

  std::size_t intervals() const { return times.empty() ? 0 : times.size() - 1; }
  /// Throws PreconditionError unless times strictly increase and n >= 1.
  void validate() const;
};

/// Transformed bridge Xdot on a uniform grid over [t0, t1]; values.front()
/// and values.back() are exactly zero.
struct BridgeSegment {
  double t0 = 0.0;
  double t1 = 0.0;
  std::vector<double> values;

  std::size_t steps() const { return values.size() - 1; }
  double step() const { return (t1 - t0) / static_cast<double>(steps()); }
};

struct BridgeSet {
  std::vector<BridgeSegment> segments;
};

/// Xdot = X - linear interpolation of (x_start, x_end) on the path grid.
std::vector<double> bridge_from_path(std::span<const double> path, double x_start, double x_end);
/// Inverse of bridge_from_path.
std::vector<double> path_from_bridge(std::span<const double> bridge, double x_start,
                                     double x_end);

/// Trapezoid integral of (alpha^2 + alpha')/2 along the path obtained by
/// adding the endpoint interpolation back to `bridge`.
double bridge_path_integral(const SDESpec& spec, const Theta& theta,
                            std::span<const double> bridge, double x_start, double x_end,
                            double step);

/// Log of the joint density of (Y_obs, Xdot) against n-dimensional Lebesgue
/// times the product of standard Brownian bridges, with the time integral
/// discretised by the trapezoid rule on each bridge grid. phi is the
/// standard normal density applied to (x_i - x_{i-1}) / sqrt(dt).
double gt1_log_density(const SDESpec& spec, const ObservationSet& obs, const BridgeSet& bridges,
                       const Theta& theta);

/// Standard Brownian bridge on [0, length] with step `step`, via
/// W_s - (s / length) W_length. Throws PreconditionError unless `step`
/// divides `length` within 1e-12.
std::vector<double> sample_brownian_bridge(double length, double step, Rng& rng);
std::vector<double> sample_brownian_bridge(double length, double step, std::uint64_t seed);

/// One bridge per observation interval with the uniform step closest to
/// `step` that divides the interval. Interval i uses stream (seed, i).
BridgeSet sample_bridges(const ObservationSet& obs, double step, std::uint64_t seed);

struct McEstimate {
  double value = 0.0;
  double standard_error = 0.0;
};

/// Transition density of the unit-diffusion process X from x0 to x1 over
/// time t:
///   N(x1; x0, t) * E[exp{A(x1) - A(x0) - int (alpha^2 + alpha')/2}]
/// with the expectation over Brownian bridges from x0 to x1. Replicates are
/// generated in fixed-size chunks with independent streams, so the estimate
/// does not depend on the thread count. Throws PreconditionError if
/// replicates < 100.
McEstimate transition_density_mc(const SDESpec& spec, const Theta& theta, double t, double x0,
                                 double x1, std::size_t replicates, double step,
                                 std::uint64_t seed);

struct ThetaMle {
  GridArgmax best;
  std::vector<double> log_likelihood;  // MC observed-data log-likelihood per grid point
};

/// Argmax over the grid of the Monte Carlo observed-data likelihood
/// prod_i eta'(y_i) p_X(x_i | x_{i-1}). The same bridges (common random
/// numbers) are used for every theta. Default step: 1e-3 times the
/// shortest interval.
ThetaMle mle_theta(const SDESpec& spec, const ObservationSet& obs, const ThetaGrid& grid,
                   std::size_t bridges_per_interval, std::uint64_t seed, double step = 0.0);

/// Exact OU transition log-density N(x1; x0 e^{-theta t}, (1 - e^{-2 theta t}) / (2 theta)).
double ou_transition_log_density(double theta, double t, double x0, double x1);

/// Exact OU path at the given times starting from y0.
ObservationSet simulate_ou(double theta, std::span<const double> times, double y0,
                           std::uint64_t seed);

/// Euler scheme for the Lamperti-transformed process X = eta(Y) with step at
/// most `step`, mapped back through eta^{-1}. Stays inside the state space.
ObservationSet simulate_lamperti_euler(const SDESpec& spec, const Theta& theta,
                                       std::span<const double> times, double y0, double step,
                                       std::uint64_t seed);

/// CSV with header "t,y".
ObservationSet read_observations_csv(std::istream& in);
void write_observations_csv(std::ostream& out, const ObservationSet& obs);

/// Observation set with fixed bridges: the sample point of the joint model.
struct PathData {
  ObservationSet obs;
  BridgeSet bridges;
};

inline constexpr const char* kBridgeMeasureId = "lebesgue^n*bridges";
inline constexpr const char* kTiltedBridgeMeasureId = "tilted-bridges";
inline constexpr const char* kUnstandardizedMeasureId = "lebesgue^n*bridges/unstd";

/// Theta-free positive functional used to reweight the bridge reference:
/// log g(Xdot) = -1/2 sum_i int Xdot^2 ds (trapezoid).
double bridge_tilt_log_weight(const BridgeSet& bridges);

/// Family over `grid` for paths observed at `times`, with three kernels:
///   lebesgue^n*bridges        gt1_log_density
///   tilted-bridges            gt1_log_density - log g(Xdot)
///   lebesgue^n*bridges/unstd  gt1 with the full N(0, dt) increment density
ModelFamily<PathData> to_model_family(const SDESpec& spec, const ThetaGrid& grid,
                                      std::vector<double> times);

}  // namespace radonlik::diffusion
