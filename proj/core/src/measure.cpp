#include "radonlik/measure.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "radonlik/parallel.hpp"

namespace radonlik {

Box Box::unit(std::size_t dimension) {
  return Box{std::vector<Interval>(dimension, Interval{0.0, 1.0})};
}

double Box::volume() const {
  double v = 1.0;
  for (const auto& s : sides) v *= s.length();
  return v;
}

bool Box::contains(std::span<const double> point) const {
  if (point.size() != sides.size()) return false;
  for (std::size_t i = 0; i < sides.size(); ++i) {
    if (!sides[i].contains(point[i])) return false;
  }
  return true;
}

bool SupportDescriptor::has_atom(double x) const {
  return std::binary_search(atoms.begin(), atoms.end(), x);
}

namespace {

void validate_box(const Box& box, const std::string& id) {
  if (box.sides.empty()) throw PreconditionError("measure '" + id + "': region has no sides");
  for (const auto& s : box.sides) {
    if (!(s.hi > s.lo)) {
      throw PreconditionError("measure '" + id + "': region must have positive volume");
    }
  }
}

void validate_counting(const CountingKind& c, const std::string& id) {
  std::vector<double> sorted = c.atoms;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw PreconditionError("measure '" + id + "': counting atoms must be distinct");
  }
  if (!c.log_weights.empty() && c.log_weights.size() != c.atoms.size()) {
    throw PreconditionError("measure '" + id + "': one weight per atom required");
  }
  for (double lw : c.log_weights) {
    if (std::isnan(lw) || lw == kInf) {
      throw PreconditionError("measure '" + id + "': atom weights must be finite and >= 0");
    }
  }
}

double counting_log_weight(const CountingKind& c, double x) {
  for (std::size_t i = 0; i < c.atoms.size(); ++i) {
    if (c.atoms[i] == x) return c.log_weights.empty() ? 0.0 : c.log_weights[i];
  }
  return kNegInf;
}

std::vector<double> positive_atoms(const CountingKind& c) {
  std::vector<double> out;
  for (std::size_t i = 0; i < c.atoms.size(); ++i) {
    const double lw = c.log_weights.empty() ? 0.0 : c.log_weights[i];
    if (lw > kNegInf) out.push_back(c.atoms[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double lebesgue_point_weight(const LebesgueKind& l, double x) {
  if (l.region.dimension() != 1 || !l.region.sides[0].contains(x)) return 0.0;
  if (!l.log_density) return 1.0;
  const double p[1] = {x};
  return std::exp(l.log_density(p));
}

double counting_integrate(const CountingKind& c, const std::function<double(double)>& f,
                          Interval range) {
  double total = 0.0;
  for (std::size_t i = 0; i < c.atoms.size(); ++i) {
    if (!range.contains(c.atoms[i])) continue;
    const double lw = c.log_weights.empty() ? 0.0 : c.log_weights[i];
    if (lw == kNegInf) continue;
    const double v = f(c.atoms[i]);
    if (v != 0.0) total += v * std::exp(lw);
  }
  return total;
}

double lebesgue_integrate(const LebesgueKind& l, const std::function<double(double)>& f,
                          Interval range, std::span<const double> breakpoints, double abs_tol) {
  const Interval& side = l.region.sides[0];
  const double lo = std::max(range.lo, side.lo);
  const double hi = std::min(range.hi, side.hi);
  if (!(hi > lo)) return 0.0;
  if (!l.log_density) return integrate_split(f, lo, hi, breakpoints, abs_tol);
  auto weighted = [&](double x) {
    const double v = f(x);
    if (v == 0.0) return 0.0;
    const double p[1] = {x};
    return v * std::exp(l.log_density(p));
  };
  return integrate_split(weighted, lo, hi, breakpoints, abs_tol);
}

}  // namespace

DominatingMeasure::DominatingMeasure(std::string id, Kind kind)
    : id_(std::move(id)), kind_(std::move(kind)) {
  if (id_.empty()) throw PreconditionError("dominating measure needs an id");
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, CountingKind>) {
          validate_counting(k, id_);
          support_.atoms = positive_atoms(k);
        } else if constexpr (std::is_same_v<K, LebesgueKind>) {
          validate_box(k.region, id_);
          support_.continuous_region = k.region;
        } else if constexpr (std::is_same_v<K, CountingLebesgueSumKind>) {
          validate_counting(k.counting, id_);
          validate_box(k.lebesgue.region, id_);
          if (k.lebesgue.region.dimension() != 1) {
            throw PreconditionError("measure '" + id_ + "': counting+Lebesgue is one-dimensional");
          }
          support_.atoms = positive_atoms(k.counting);
          support_.continuous_region = k.lebesgue.region;
        } else if constexpr (std::is_same_v<K, ProductKind>) {
          if (k.factors.empty()) throw PreconditionError("product measure needs factors");
        } else if constexpr (std::is_same_v<K, UnitPoissonLawKind>) {
          validate_box(k.region, id_);
          support_.continuous_region = k.region;
        } else if constexpr (std::is_same_v<K, GaussianBridgeProductKind>) {
          const auto& t = k.observation_times;
          if (t.size() < 2) throw PreconditionError("bridge product needs >= 2 observation times");
          for (std::size_t i = 1; i < t.size(); ++i) {
            if (!(t[i] > t[i - 1])) {
              throw PreconditionError("bridge product: observation times must increase");
            }
          }
        } else if constexpr (std::is_same_v<K, PredictiveKind>) {
          if (k.base_id.empty()) throw PreconditionError("predictive measure needs a base id");
        }
      },
      kind_);
}

DominatingMeasure DominatingMeasure::counting(std::string id, std::vector<double> atoms,
                                              std::vector<double> weights) {
  CountingKind c{std::move(atoms), {}};
  for (double w : weights) {
    if (!(w >= 0.0)) throw PreconditionError("counting weights must be >= 0");
    c.log_weights.push_back(safe_log(w));
  }
  return DominatingMeasure(std::move(id), std::move(c));
}

DominatingMeasure DominatingMeasure::lebesgue(
    std::string id, Box region, std::function<double(std::span<const double>)> log_density) {
  return DominatingMeasure(std::move(id), LebesgueKind{std::move(region), std::move(log_density)});
}

DominatingMeasure DominatingMeasure::counting_lebesgue_sum(std::string id,
                                                           std::vector<double> atoms,
                                                           Interval region, double lebesgue_scale,
                                                           std::vector<double> atom_weights) {
  if (!(lebesgue_scale > 0.0)) throw PreconditionError("Lebesgue scale must be positive");
  CountingKind c{std::move(atoms), {}};
  for (double w : atom_weights) {
    if (!(w >= 0.0)) throw PreconditionError("counting weights must be >= 0");
    c.log_weights.push_back(safe_log(w));
  }
  LebesgueKind l{Box{{region}}, {}};
  if (lebesgue_scale != 1.0) {
    const double log_scale = std::log(lebesgue_scale);
    l.log_density = [log_scale](std::span<const double>) { return log_scale; };
  }
  return DominatingMeasure(std::move(id), CountingLebesgueSumKind{std::move(c), std::move(l)});
}

bool DominatingMeasure::is_one_dimensional() const {
  if (std::holds_alternative<CountingKind>(kind_)) return true;
  if (const auto* l = std::get_if<LebesgueKind>(&kind_)) return l->region.dimension() == 1;
  return std::holds_alternative<CountingLebesgueSumKind>(kind_);
}

bool DominatingMeasure::is_discrete() const { return std::holds_alternative<CountingKind>(kind_); }

double DominatingMeasure::atom_mass(double x) const {
  if (const auto* c = std::get_if<CountingKind>(&kind_)) return std::exp(counting_log_weight(*c, x));
  if (const auto* s = std::get_if<CountingLebesgueSumKind>(&kind_)) {
    return std::exp(counting_log_weight(s->counting, x));
  }
  return 0.0;
}

double DominatingMeasure::lebesgue_weight(double x) const {
  if (const auto* l = std::get_if<LebesgueKind>(&kind_)) return lebesgue_point_weight(*l, x);
  if (const auto* s = std::get_if<CountingLebesgueSumKind>(&kind_)) {
    return lebesgue_point_weight(s->lebesgue, x);
  }
  return 0.0;
}

double DominatingMeasure::integrate(const std::function<double(double)>& f, Interval range,
                                    double abs_tol) const {
  if (range.hi < range.lo) throw PreconditionError("integration range is reversed");
  if (const auto* c = std::get_if<CountingKind>(&kind_)) return counting_integrate(*c, f, range);
  if (const auto* l = std::get_if<LebesgueKind>(&kind_)) {
    if (l->region.dimension() != 1) {
      throw PreconditionError("measure '" + id_ + "': integration needs dimension 1");
    }
    return lebesgue_integrate(*l, f, range, {}, abs_tol);
  }
  if (const auto* s = std::get_if<CountingLebesgueSumKind>(&kind_)) {
    return counting_integrate(s->counting, f, range) +
           lebesgue_integrate(s->lebesgue, f, range, s->counting.atoms, abs_tol);
  }
  throw PreconditionError("measure '" + id_ + "' does not support interval evaluation");
}

double DominatingMeasure::interval_mass(Interval range) const {
  if (const auto* l = std::get_if<LebesgueKind>(&kind_); l && !l->log_density &&
                                                      l->region.dimension() == 1) {
    const double lo = std::max(range.lo, l->region.sides[0].lo);
    const double hi = std::min(range.hi, l->region.sides[0].hi);
    return hi > lo ? hi - lo : 0.0;
  }
  return integrate([](double) { return 1.0; }, range);
}

double DominatingMeasure::ball_mass(double center, double radius) const {
  return interval_mass(Interval{center - radius, center + radius});
}

ThetaGrid::ThetaGrid(std::vector<Theta> points) : points_(std::move(points)) {
  for (const auto& p : points_) {
    if (p.size() != points_.front().size()) {
      throw PreconditionError("theta grid points must share one dimension");
    }
  }
}

ThetaGrid ThetaGrid::scalar(std::span<const double> values) {
  std::vector<Theta> pts;
  pts.reserve(values.size());
  for (double v : values) pts.push_back(Theta{v});
  return ThetaGrid(std::move(pts));
}

ThetaGrid ThetaGrid::linspace(double lo, double hi, std::size_t n) {
  const auto v = radonlik::linspace(lo, hi, n);
  return scalar(v);
}

void parallel_fill(std::size_t n, const std::function<double(std::size_t)>& f,
                   std::vector<double>& out) {
  out.assign(n, 0.0);
  parallel_for(n, [&](std::size_t i) { out[i] = f(i); });
}

namespace {

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace

ProportionalityReport check_proportionality(const LogLikelihoodCurve& curve1,
                                            const LogLikelihoodCurve& curve2, double tol) {
  if (!(curve1.grid == curve2.grid)) throw PreconditionError("curves use different theta grids");
  if (curve1.observation_id != curve2.observation_id) {
    throw PreconditionError("curves belong to different observations");
  }
  if (curve1.values.size() != curve1.grid.size() || curve2.values.size() != curve2.grid.size()) {
    throw PreconditionError("curve length differs from its grid");
  }
  ProportionalityReport report;
  report.finiteness_match = true;
  std::vector<double> diffs;
  for (std::size_t i = 0; i < curve1.values.size(); ++i) {
    const bool f1 = curve1.values[i] > kNegInf;
    const bool f2 = curve2.values[i] > kNegInf;
    if (f1 != f2) report.finiteness_match = false;
    if (f1 && f2) diffs.push_back(curve1.values[i] - curve2.values[i]);
  }
  report.finite_points = diffs.size();
  if (diffs.empty()) return report;
  const double centre = median(diffs);
  double dev = 0.0;
  for (double d : diffs) dev = std::max(dev, std::abs(d - centre));
  report.constant_log_ratio = centre;
  report.max_deviation = dev;
  report.pass = report.finiteness_match && dev <= tol;
  return report;
}

std::vector<std::size_t> argmax_set(std::span<const double> values, double tie_tol) {
  double top = kNegInf;
  for (double v : values) top = std::max(top, v);
  std::vector<std::size_t> out;
  if (top == kNegInf) return out;
  const double slack = tie_tol * std::max(1.0, std::abs(top));
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= top - slack) out.push_back(i);
  }
  return out;
}

bool argmax_invariance(const LogLikelihoodCurve& curve1, const LogLikelihoodCurve& curve2) {
  if (!(curve1.grid == curve2.grid)) throw PreconditionError("curves use different theta grids");
  return argmax_set(curve1.values) == argmax_set(curve2.values);
}

GridArgmax grid_argmax(std::span<const double> values) {
  GridArgmax out;
  out.indices = argmax_set(values);
  if (out.indices.empty()) throw DegenerateError("every grid point has log-likelihood -inf");
  out.max_value = values[out.indices.front()];
  for (auto i : out.indices) out.max_value = std::max(out.max_value, values[i]);
  return out;
}

double atom_probability(const ScalarFamily& family, const Theta& theta, double atom) {
  const auto& regs = family.registrations();
  if (regs.empty()) throw PreconditionError("family has no registered kernel");
  const auto& reg = regs.front();
  const double nu = reg.measure.atom_mass(atom);
  if (nu == 0.0) return 0.0;
  const double lk = reg.log_kernel(theta, atom);
  return lk == kNegInf ? 0.0 : std::exp(lk) * nu;
}

double MixtureMeasure::mass(const ScalarFamily& family, double atom) const {
  double total = 0.0;
  for (const auto& c : components) {
    total += c.weight * atom_probability(family, family.theta_grid()[c.theta_index], atom);
  }
  return total;
}

namespace {

void require_discrete(const ScalarFamily& family) {
  if (!family.sample_space().discrete()) {
    throw DomainError("operation requires a finite atom sample space");
  }
}

std::vector<double> union_atoms(const std::vector<double>& a, const std::vector<double>& b) {
  std::set<double> s(a.begin(), a.end());
  s.insert(b.begin(), b.end());
  return {s.begin(), s.end()};
}

template <class Mass>
bool dominates_family(const Mass& candidate_mass, const ScalarFamily& family,
                      const std::vector<double>& atoms) {
  for (double a : atoms) {
    if (candidate_mass(a) > 0.0) continue;
    for (const auto& theta : family.theta_grid().points()) {
      if (atom_probability(family, theta, a) > 0.0) return false;
    }
  }
  return true;
}

}  // namespace

MixtureMeasure build_minimal_dominating_measure(const ScalarFamily& family,
                                                std::span<const std::size_t> theta_indices) {
  require_discrete(family);
  if (theta_indices.empty()) throw PreconditionError("empty selection of family members");
  MixtureMeasure q;
  const double w = 1.0 / static_cast<double>(theta_indices.size());
  for (auto idx : theta_indices) {
    if (idx >= family.theta_grid().size()) throw PreconditionError("theta index outside the grid");
    q.components.push_back({w, idx});
  }
  return q;
}

bool verify_dominance(const DominatingMeasure& candidate, const ScalarFamily& family) {
  require_discrete(family);
  const auto atoms = union_atoms(family.sample_space().atoms, candidate.support().atoms);
  return dominates_family([&](double a) { return candidate.atom_mass(a); }, family, atoms);
}

bool verify_dominance(const MixtureMeasure& candidate, const ScalarFamily& family) {
  require_discrete(family);
  return dominates_family([&](double a) { return candidate.mass(family, a); }, family,
                          family.sample_space().atoms);
}

bool mixture_dominated_by(const MixtureMeasure& q, const ScalarFamily& family,
                          const DominatingMeasure& measure) {
  require_discrete(family);
  const auto atoms = union_atoms(family.sample_space().atoms, measure.support().atoms);
  for (double a : atoms) {
    if (measure.atom_mass(a) == 0.0 && q.mass(family, a) > 0.0) return false;
  }
  return true;
}

std::vector<double> neighborhood_density_limit(const ScalarFamily& family,
                                               const DominatingMeasure& measure,
                                               const Theta& theta, double omega0,
                                               std::span<const double> radii,
                                               const IntervalProbability& interval_probability) {
  if (!measure.is_one_dimensional()) {
    throw PreconditionError("neighborhood limits need a one-dimensional measure");
  }
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw PreconditionError("radii must be positive");
    if (i > 0 && !(radii[i] < radii[i - 1])) {
      throw PreconditionError("radii must be strictly decreasing");
    }
  }
  const auto& regs = family.registrations();
  if (regs.empty()) throw PreconditionError("family has no registered kernel");
  const auto& reg = regs.front();
  std::vector<double> ratios;
  ratios.reserve(radii.size());
  for (double r : radii) {
    const Interval ball{omega0 - r, omega0 + r};
    const double denom = measure.interval_mass(ball);
    if (!(denom > 0.0)) {
      throw DomainError("reference measure gives zero mass to a ball around omega0");
    }
    double num = 0.0;
    if (interval_probability) {
      num = interval_probability(theta, ball);
    } else {
      num = reg.measure.integrate(
          [&](double x) {
            const double lk = reg.log_kernel(theta, x);
            return lk == kNegInf ? 0.0 : std::exp(lk);
          },
          ball, 1e-13 * (2.0 * r));
    }
    ratios.push_back(num / denom);
  }
  return ratios;
}

SupportDescriptor support_of(const DominatingMeasure& measure) { return measure.support(); }

SupportDescriptor support_of(const ScalarFamily& family, const Theta& theta) {
  require_discrete(family);
  SupportDescriptor s;
  for (double a : family.sample_space().atoms) {
    if (atom_probability(family, theta, a) > 0.0) s.atoms.push_back(a);
  }
  std::sort(s.atoms.begin(), s.atoms.end());
  return s;
}

double kernel_total_mass(const ScalarFamily& family, const std::string& measure_id,
                         const Theta& theta) {
  for (const auto& reg : family.registrations()) {
    if (reg.measure.id() != measure_id) continue;
    return reg.measure.integrate(
        [&](double x) {
          const double lk = reg.log_kernel(theta, x);
          return lk == kNegInf ? 0.0 : std::exp(lk);
        },
        Interval{-kInf, kInf}, 1e-10);
  }
  throw UnknownMeasureError(measure_id);
}

}  // namespace radonlik
