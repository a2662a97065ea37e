#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "radonlik/measure.hpp"

namespace radonlik::bayes {

enum class QuadratureRule { trapezoid, gauss_legendre };

/// Prior R on a finite set of nodes. For priors with a Lebesgue density the
/// weights are quadrature weights times the density, renormalized to total
/// mass 1; `density` then holds the density at each node.
struct Prior {
  std::string label;
  ThetaGrid nodes;
  std::vector<double> weights;
  std::vector<double> density;      // empty for purely discrete priors
  double quadrature_residual = 0.0;  // raw weight sum minus 1, before renormalizing

  static Prior uniform(double lo, double hi, std::size_t nodes,
                       QuadratureRule rule = QuadratureRule::gauss_legendre);
  /// Beta(a, b) on (0, 1). The trapezoid rule needs a, b >= 1.
  static Prior beta(double a, double b, std::size_t nodes,
                    QuadratureRule rule = QuadratureRule::gauss_legendre);
  static Prior point_mass(double theta);
  /// Weights must be non-negative with total 1 +- 1e-10 and at least one
  /// positive weight.
  static Prior discrete(std::string label, std::vector<double> points,
                        std::vector<double> weights);
  /// Density on [lo, hi]; nodes include the endpoints for the trapezoid rule.
  static Prior from_density(std::string label, double lo, double hi,
                            const std::function<double(double)>& density, std::size_t nodes,
                            QuadratureRule rule);
};

/// Gauss-Legendre nodes and weights on [lo, hi].
void gauss_legendre(std::size_t n, double lo, double hi, std::vector<double>& nodes,
                    std::vector<double>& weights);

/// log m(x) = log sum_k w_k f_{theta_k}(x) for the kernel registered under
/// `base_id`. The prior nodes must coincide with the family grid.
double log_marginal(const ScalarFamily& family, const std::string& base_id, const Prior& prior,
                    double x);
double marginal_m(const ScalarFamily& family, const std::string& base_id, const Prior& prior,
                  double x);

struct PosteriorCurve {
  std::string measure_id;
  double observation = 0.0;
  ThetaGrid nodes;
  std::vector<double> density;          // dP_{theta|x}/dR at each node
  std::vector<double> lebesgue_density; // density times the prior density, if any
  double normalization_residual = 0.0;  // sum_k w_k density_k - 1
};

/// f_theta(x) / m(x) on the prior nodes. Throws VanishingLikelihoodError
/// when m(x) = 0.
PosteriorCurve posterior(const ScalarFamily& family, const std::string& base_id,
                         const Prior& prior, double x);

/// Finite set of points or a closed interval of the line.
using TestSet = std::variant<std::vector<double>, Interval>;

/// lambda(A) = int_A m d(base).
class PredictiveMeasure {
 public:
  PredictiveMeasure(const ScalarFamily& family, std::string base_id, Prior prior);

  double m(double x) const;
  double mass(const TestSet& set) const;
  /// Mass of the whole line.
  double total_mass() const;
  /// {x in sample-space atoms : m(x) <= eps}.
  std::vector<double> zero_set(double eps = 1e-12) const;
  /// This measure as a dominating-measure descriptor.
  DominatingMeasure as_measure() const;
  const DominatingMeasure& base() const { return family_->measure(base_id_); }

 private:
  const ScalarFamily* family_;
  std::string base_id_;
  Prior prior_;
};

struct InvarianceReport {
  std::vector<double> masses_first;
  std::vector<double> masses_second;
  double max_difference = 0.0;
  bool pass = false;
};

/// Predictive masses of each test set under two registered bases.
InvarianceReport predictive_invariance(const ScalarFamily& family, const std::string& first_id,
                                       const std::string& second_id, const Prior& prior,
                                       const std::vector<TestSet>& sets, double tol = 1e-8);

struct DominanceReport {
  std::vector<double> zero_set;
  std::vector<bool> zero_set_hit;  // per prior node: P_theta(N) > eps
  bool dominated = false;
  bool support_constant = false;
};

/// Zero set N = {x : m(x) <= eps} over `points` (the sample-space atoms when
/// empty). For atomic bases P_theta(N) is summed exactly; for gridded
/// continuous spaces a hit is any x in N with f_theta(x) > eps. Throws
/// NumericalError if support_constant holds without dominance.
DominanceReport dominance_check(const ScalarFamily& family, const std::string& base_id,
                                const Prior& prior, std::span<const double> points = {},
                                double eps = 1e-12);

/// Binomial(n, theta) on {0..n} with kernels "counting" and "counting-x2"
/// (weight-2 counting measure, density halved).
ScalarFamily binomial_family(int n, const ThetaGrid& grid);

/// Closed form C(n, x) B(x + a, n - x + b) / B(a, b).
double beta_binomial_marginal(int n, int x, double a, double b);

/// Beta(a, b) density.
double beta_density(double theta, double a, double b);

}  // namespace radonlik::bayes
