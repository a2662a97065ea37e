#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "radonlik/error.hpp"
#include "radonlik/numeric.hpp"

namespace radonlik {

/// Closed interval [lo, hi]; either end may be infinite.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
  bool operator==(const Interval&) const = default;
};

/// Axis-aligned box in R^d.
struct Box {
  std::vector<Interval> sides;

  static Box unit(std::size_t dimension);
  static Box interval(double lo, double hi) { return Box{{Interval{lo, hi}}}; }

  std::size_t dimension() const { return sides.size(); }
  double volume() const;
  bool contains(std::span<const double> point) const;
  bool operator==(const Box&) const = default;
};

/// Where a measure puts mass: a finite set of atoms plus an optional
/// continuous region.
struct SupportDescriptor {
  std::vector<double> atoms;  // sorted, distinct
  std::optional<Box> continuous_region;

  bool has_atom(double x) const;
  bool operator==(const SupportDescriptor&) const = default;
};

class DominatingMeasure;

/// Weighted counting measure on finitely many atoms. An empty weight list
/// means unit weights; weights are stored as logs so tiny masses survive.
struct CountingKind {
  std::vector<double> atoms;
  std::vector<double> log_weights;
};

/// Lebesgue measure on a box, optionally reweighted by a strictly positive
/// density (log_density empty means the plain measure).
struct LebesgueKind {
  Box region;
  std::function<double(std::span<const double>)> log_density;
};

/// counting + Lebesgue on the real line.
struct CountingLebesgueSumKind {
  CountingKind counting;
  LebesgueKind lebesgue;
};

struct ProductKind {
  std::vector<DominatingMeasure> factors;
};

/// Law of the unit-rate Poisson process on a region.
struct UnitPoissonLawKind {
  Box region;
};

/// Product of n Gaussian increments and n standard Brownian bridges on the
/// intervals between consecutive observation times.
struct GaussianBridgeProductKind {
  std::vector<double> observation_times;
};

/// The prior predictive measure built from a named prior and base measure.
struct PredictiveKind {
  std::string prior_label;
  std::string base_id;
};

class DominatingMeasure {
 public:
  using Kind = std::variant<CountingKind, LebesgueKind, CountingLebesgueSumKind, ProductKind,
                            UnitPoissonLawKind, GaussianBridgeProductKind, PredictiveKind>;

  /// Validates the kind's invariants (distinct atoms, positive-volume
  /// regions) and derives the support.
  DominatingMeasure(std::string id, Kind kind);

  static DominatingMeasure counting(std::string id, std::vector<double> atoms,
                                    std::vector<double> weights = {});
  static DominatingMeasure lebesgue(
      std::string id, Box region,
      std::function<double(std::span<const double>)> log_density = {});
  static DominatingMeasure counting_lebesgue_sum(std::string id, std::vector<double> atoms,
                                                 Interval region, double lebesgue_scale = 1.0,
                                                 std::vector<double> atom_weights = {});

  const std::string& id() const { return id_; }
  const Kind& kind() const { return kind_; }
  const SupportDescriptor& support() const { return support_; }

  /// True for counting, Lebesgue or counting+Lebesgue measures on the line.
  bool is_one_dimensional() const;
  /// True when the measure is purely atomic on finitely many points.
  bool is_discrete() const;

  /// Mass of the singleton {x}. Zero for points that are not atoms.
  double atom_mass(double x) const;
  /// Integral of f over [range.lo, range.hi] against this measure
  /// (one-dimensional kinds only). Atoms inside the range contribute
  /// f(atom) * mass; the continuous part is integrated with the atoms as
  /// breakpoints so quadrature never samples an atom.
  double integrate(const std::function<double(double)>& f, Interval range,
                   double abs_tol = 1e-11) const;
  /// Mass of the closed interval.
  double interval_mass(Interval range) const;
  /// Mass of the closed ball [center - radius, center + radius].
  double ball_mass(double center, double radius) const;
  /// Density of the continuous part w.r.t. plain Lebesgue at x (0 outside
  /// the region or for purely atomic measures).
  double lebesgue_weight(double x) const;

 private:
  std::string id_;
  Kind kind_;
  SupportDescriptor support_;
};

/// Parameter value in R^k.
using Theta = std::vector<double>;

/// Ordered finite grid over the parameter space.
class ThetaGrid {
 public:
  ThetaGrid() = default;
  explicit ThetaGrid(std::vector<Theta> points);

  static ThetaGrid scalar(std::span<const double> values);
  static ThetaGrid linspace(double lo, double hi, std::size_t n);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  std::size_t dimension() const { return points_.empty() ? 0 : points_.front().size(); }
  const Theta& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Theta>& points() const { return points_; }
  bool operator==(const ThetaGrid&) const = default;

 private:
  std::vector<Theta> points_;
};

/// Sample space descriptor. Discrete spaces enumerate their atoms.
template <class Obs>
struct SampleSpace {
  std::string description;
  std::function<bool(const Obs&)> contains;
  std::vector<Obs> atoms;

  bool discrete() const { return !atoms.empty(); }
};

/// log of a density kernel (theta, omega) -> [0, inf); -inf encodes zero.
template <class Obs>
using LogKernel = std::function<double(const Theta&, const Obs&)>;

/// A parametric family with one density kernel per registered dominating
/// measure. Kernels are kept in registration order.
template <class Obs>
class ModelFamily {
 public:
  struct Registration {
    DominatingMeasure measure;
    LogKernel<Obs> log_kernel;
  };

  ModelFamily(ThetaGrid grid, SampleSpace<Obs> space)
      : grid_(std::move(grid)), space_(std::move(space)) {
    if (grid_.empty()) throw PreconditionError("model family needs a non-empty theta grid");
  }

  ModelFamily& register_kernel(DominatingMeasure measure, LogKernel<Obs> log_kernel) {
    for (const auto& r : registrations_) {
      if (r.measure.id() == measure.id()) {
        throw PreconditionError("measure '" + measure.id() + "' registered twice");
      }
    }
    if (space_.discrete()) {
      bool any_positive = false;
      for (const auto& theta : grid_.points()) {
        for (const auto& atom : space_.atoms) {
          if (log_kernel(theta, atom) > kNegInf) {
            any_positive = true;
            break;
          }
        }
        if (any_positive) break;
      }
      if (!any_positive) {
        throw PreconditionError("kernel for '" + measure.id() + "' vanishes on the whole grid");
      }
    }
    registrations_.push_back(Registration{std::move(measure), std::move(log_kernel)});
    return *this;
  }

  const ThetaGrid& theta_grid() const { return grid_; }
  const SampleSpace<Obs>& sample_space() const { return space_; }
  const std::vector<Registration>& registrations() const { return registrations_; }

  std::vector<std::string> measure_ids() const {
    std::vector<std::string> ids;
    for (const auto& r : registrations_) ids.push_back(r.measure.id());
    return ids;
  }

  bool has_measure(const std::string& id) const { return find(id) != nullptr; }

  const DominatingMeasure& measure(const std::string& id) const { return lookup(id).measure; }

  /// Log of the kernel registered for `measure_id`; -inf where it is 0.
  double log_density(const std::string& measure_id, const Theta& theta, const Obs& omega) const {
    const auto& reg = lookup(measure_id);
    if (space_.contains && !space_.contains(omega)) {
      throw DomainError("observation outside the sample space (" + space_.description + ")");
    }
    const double v = reg.log_kernel(theta, omega);
    if (std::isnan(v) || v == kInf) {
      throw NumericalError("kernel '" + measure_id + "' returned an invalid log-density");
    }
    return v;
  }

 private:
  const Registration* find(const std::string& id) const {
    for (const auto& r : registrations_) {
      if (r.measure.id() == id) return &r;
    }
    return nullptr;
  }
  const Registration& lookup(const std::string& id) const {
    const auto* r = find(id);
    if (r == nullptr) throw UnknownMeasureError(id);
    return *r;
  }

  ThetaGrid grid_;
  SampleSpace<Obs> space_;
  std::vector<Registration> registrations_;
};

using ScalarFamily = ModelFamily<double>;

/// Log-density values over the whole theta grid at one observation.
struct LogLikelihoodCurve {
  std::string measure_id;
  std::string observation_id;
  ThetaGrid grid;
  std::vector<double> values;
};

template <class Obs>
double eval_log_density(const ModelFamily<Obs>& family, const std::string& measure_id,
                        const Theta& theta, const Obs& omega) {
  return family.log_density(measure_id, theta, omega);
}

void parallel_fill(std::size_t n, const std::function<double(std::size_t)>& f,
                   std::vector<double>& out);

template <class Obs>
LogLikelihoodCurve likelihood_curve(const ModelFamily<Obs>& family, const std::string& measure_id,
                                    const Obs& omega, std::string observation_id = "omega") {
  // Validate id and domain once on the calling thread.
  (void)family.measure(measure_id);
  LogLikelihoodCurve curve{measure_id, std::move(observation_id), family.theta_grid(), {}};
  const auto& grid = family.theta_grid();
  parallel_fill(
      grid.size(),
      [&](std::size_t i) { return family.log_density(measure_id, grid[i], omega); },
      curve.values);
  return curve;
}

struct ProportionalityReport {
  std::optional<double> constant_log_ratio;  // median of values1 - values2
  double max_deviation = kInf;
  bool finiteness_match = false;
  std::size_t finite_points = 0;
  bool pass = false;
};

/// Theta-proportionality of two curves at the same observation: the log
/// ratio must be constant (max deviation from its median <= tol) over the
/// points where both are finite, and the -inf positions must coincide.
ProportionalityReport check_proportionality(const LogLikelihoodCurve& curve1,
                                            const LogLikelihoodCurve& curve2, double tol);

/// Grid indices attaining the maximum. Values within `tie_tol` (scaled by
/// max(1, |max|)) of the top are ties. Empty if every value is -inf.
std::vector<std::size_t> argmax_set(std::span<const double> values, double tie_tol = 1e-10);

/// True iff both curves attain their maximum at the same index set.
bool argmax_invariance(const LogLikelihoodCurve& curve1, const LogLikelihoodCurve& curve2);

/// Argmax of a curve over the grid; ties report every tying index.
struct GridArgmax {
  std::vector<std::size_t> indices;
  double max_value = kNegInf;
};

/// Throws DegenerateError when every value is -inf.
GridArgmax grid_argmax(std::span<const double> values);

/// Countable mixture Q = sum c_i P_{theta_i} of family members, specialised
/// to finite selections.
struct MixtureMeasure {
  struct Component {
    double weight;
    std::size_t theta_index;
  };
  std::vector<Component> components;

  /// Q({atom}).
  double mass(const ScalarFamily& family, double atom) const;
};

/// P_theta({atom}) for a discrete family, through its first registered
/// kernel and that kernel's measure.
double atom_probability(const ScalarFamily& family, const Theta& theta, double atom);

/// Uniform-weight mixture over the selected grid members. Throws
/// PreconditionError on an empty selection and DomainError for families
/// whose sample space is not a finite atom set.
MixtureMeasure build_minimal_dominating_measure(const ScalarFamily& family,
                                                std::span<const std::size_t> theta_indices);

/// Every atom where the candidate has zero mass must be P_theta-null for
/// every grid theta.
bool verify_dominance(const DominatingMeasure& candidate, const ScalarFamily& family);
bool verify_dominance(const MixtureMeasure& candidate, const ScalarFamily& family);

/// Q << measure, atomwise over the family's atoms and the measure's atoms.
bool mixture_dominated_by(const MixtureMeasure& q, const ScalarFamily& family,
                          const DominatingMeasure& measure);

/// Closed-form P_theta([lo, hi]) used instead of quadrature when supplied.
using IntervalProbability = std::function<double(const Theta&, Interval)>;

/// P_theta(B(omega0, r)) / nu(B(omega0, r)) for each radius. The numerator
/// integrates the family's first registered kernel against its measure
/// unless `interval_probability` is given.
std::vector<double> neighborhood_density_limit(const ScalarFamily& family,
                                               const DominatingMeasure& measure,
                                               const Theta& theta, double omega0,
                                               std::span<const double> radii,
                                               const IntervalProbability& interval_probability = {});

SupportDescriptor support_of(const DominatingMeasure& measure);
/// Positive-mass atoms of P_theta for a discrete family.
SupportDescriptor support_of(const ScalarFamily& family, const Theta& theta);

/// Total mass of the kernel against its own measure: exact sum on atoms plus
/// quadrature on the one-dimensional continuous part.
double kernel_total_mass(const ScalarFamily& family, const std::string& measure_id,
                         const Theta& theta);

}  // namespace radonlik
