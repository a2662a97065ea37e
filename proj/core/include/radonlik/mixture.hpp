#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "radonlik/measure.hpp"

namespace radonlik::mixture {

/// Continuous component Z_j with a closed-form Lebesgue density on the closed
/// interval `region`. The density formula is continuous on the region and is
/// what the naive kernel evaluates at atoms.
struct ContinuousComponent {
  std::string name;
  Interval region;
  std::function<double(double)> pdf;       // formula, valid on the closed region
  std::function<double(double)> cdf;       // P(Z_j <= y)
  std::function<double(double)> quantile;  // optional: inverse CDF on (0, 1)
};

ContinuousComponent exponential(double rate);
ContinuousComponent uniform(double lo, double hi);
ContinuousComponent truncated_gaussian(double mean, double sd, double lo, double hi);

struct Atom {
  double location;
  double mass;
};

struct WeightedComponent {
  double weight;
  ContinuousComponent component;
};

/// Y = a_i with probability p_i, otherwise Y = Z_j with probability q_j.
class PointMassMixture {
 public:
  PointMassMixture(std::vector<Atom> atoms, std::vector<WeightedComponent> components);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<WeightedComponent>& components() const { return components_; }
  std::vector<double> atom_locations() const;
  double atom_total() const;
  bool is_atom(double y) const;
  /// Sorted atoms and finite component region endpoints.
  std::vector<double> breakpoints() const;

  /// Same shape with total atom mass `p`: atom masses and component weights
  /// are rescaled proportionally to p and 1 - p.
  PointMassMixture with_atom_mass(double p) const;

  /// P(Y <= y).
  double cdf(double y) const;

 private:
  std::vector<Atom> atoms_;
  std::vector<WeightedComponent> components_;
};

/// dP/d(counting + Lebesgue): atom mass on A, sum_j q_j f_j(y) 1{y in B_j \ A}
/// elsewhere.
double density_correct(const PointMassMixture& mix, double y);

/// The same sum with the indicators dropped: atom masses plus every
/// component's formula wherever y lies in the closed region B_j. Not a
/// Radon-Nikodym derivative of P; kept to show the misspecification.
double density_naive(const PointMassMixture& mix, double y);

/// Continuous part only, zero on A (a density w.r.t. Lebesgue that ignores
/// the atoms entirely).
double density_lebesgue_part(const PointMassMixture& mix, double y);

/// Seeded i.i.d. draws. Throws PreconditionError for n == 0 and when a
/// component that may be selected has no quantile function.
std::vector<double> simulate(const PointMassMixture& mix, std::size_t n, std::uint64_t seed);

enum class DensityVariant { correct, naive };

/// Measure ids registered by `atom_weight_family`.
inline constexpr const char* kCountingLebesgue = "counting+lebesgue";
inline constexpr const char* kCountingTwiceLebesgue = "counting+2lebesgue";
inline constexpr const char* kNaive = "naive";

/// Family over the total atom mass p (the grid) for i.i.d. samples. Kernels:
///   counting+lebesgue   correct density (product over the sample)
///   counting+2lebesgue  correct density against counting + 2 Lebesgue
///                       (continuous part halved)
///   naive               the indicator-free sum
ModelFamily<std::vector<double>> atom_weight_family(const PointMassMixture& base,
                                                    ThetaGrid p_grid);

/// Sum of log densities of a sample at atom mass p.
double sample_log_likelihood(const PointMassMixture& base, double p,
                             const std::vector<double>& sample, DensityVariant variant);

/// Argmax over the p-grid of the sample log-likelihood under `variant`.
/// Throws DegenerateError if every grid point gives -inf.
GridArgmax grid_mle(const PointMassMixture& base, const ThetaGrid& p_grid,
                    const std::vector<double>& sample, DensityVariant variant);

}  // namespace radonlik::mixture
