#include "radonlik/bayes.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/legendre.hpp>

#include "radonlik/parallel.hpp"

namespace radonlik::bayes {

namespace {

void require_matching_grid(const ScalarFamily& family, const Prior& prior) {
  if (!(family.theta_grid() == prior.nodes)) {
    throw PreconditionError("prior '" + prior.label + "' nodes differ from the family grid");
  }
}

void renormalize(Prior& p) {
  double total = 0.0;
  for (double w : p.weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw PreconditionError("prior '" + p.label + "' has a negative or non-finite weight");
    }
    total += w;
  }
  if (!(total > 0.0)) throw PreconditionError("prior '" + p.label + "' has zero total mass");
  p.quadrature_residual = total - 1.0;
  for (double& w : p.weights) w /= total;
}

// x log(y) with the convention 0 log 0 = 0.
double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

}  // namespace

void gauss_legendre(std::size_t n, double lo, double hi, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  if (n == 0) throw PreconditionError("Gauss-Legendre rule needs at least one node");
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw PreconditionError("Gauss-Legendre rule needs a bounded interval");
  }
  const int order = static_cast<int>(n);
  const auto zeros = boost::math::legendre_p_zeros<double>(order);
  std::vector<double> x;
  std::vector<double> w;
  for (double z : zeros) {
    const double dp = boost::math::legendre_p_prime<double>(order, z);
    const double wz = 2.0 / ((1.0 - z * z) * dp * dp);
    x.push_back(z);
    w.push_back(wz);
    if (z != 0.0) {
      x.push_back(-z);
      w.push_back(wz);
    }
  }
  std::vector<std::size_t> idx(x.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  nodes.resize(idx.size());
  weights.resize(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    nodes[i] = mid + half * x[idx[i]];
    weights[i] = half * w[idx[i]];
  }
}

Prior Prior::from_density(std::string label, double lo, double hi,
                          const std::function<double(double)>& density, std::size_t nodes,
                          QuadratureRule rule) {
  std::vector<double> x;
  std::vector<double> w;
  if (rule == QuadratureRule::gauss_legendre) {
    gauss_legendre(nodes, lo, hi, x, w);
  } else {
    if (nodes < 2) throw PreconditionError("trapezoid prior needs at least two nodes");
    x = linspace(lo, hi, nodes);
    const double h = (hi - lo) / static_cast<double>(nodes - 1);
    w.assign(nodes, h);
    w.front() *= 0.5;
    w.back() *= 0.5;
  }
  Prior p;
  p.label = std::move(label);
  p.density.resize(x.size());
  p.weights.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = density(x[i]);
    if (!(d >= 0.0) || !std::isfinite(d)) {
      throw PreconditionError("prior '" + p.label + "' density is not finite at a node");
    }
    p.density[i] = d;
    p.weights[i] = w[i] * d;
  }
  p.nodes = ThetaGrid::scalar(x);
  renormalize(p);
  return p;
}

Prior Prior::uniform(double lo, double hi, std::size_t nodes, QuadratureRule rule) {
  const double d = 1.0 / (hi - lo);
  return from_density("uniform", lo, hi, [d](double) { return d; }, nodes, rule);
}

Prior Prior::beta(double a, double b, std::size_t nodes, QuadratureRule rule) {
  if (!(a > 0.0) || !(b > 0.0)) throw PreconditionError("beta prior needs a, b > 0");
  if (rule == QuadratureRule::trapezoid && (a < 1.0 || b < 1.0)) {
    throw PreconditionError("trapezoid beta prior needs a, b >= 1 (bounded density)");
  }
  return from_density("beta(" + std::to_string(a) + "," + std::to_string(b) + ")", 0.0, 1.0,
                      [a, b](double t) { return beta_density(t, a, b); }, nodes, rule);
}

Prior Prior::point_mass(double theta) {
  return discrete("point-mass", {theta}, {1.0});
}

Prior Prior::discrete(std::string label, std::vector<double> points,
                      std::vector<double> weights) {
  if (points.empty() || points.size() != weights.size()) {
    throw PreconditionError("discrete prior needs matching, non-empty points and weights");
  }
  Prior p;
  p.label = std::move(label);
  p.nodes = ThetaGrid::scalar(points);
  p.weights = std::move(weights);
  renormalize(p);
  if (std::abs(p.quadrature_residual) > 1e-10) {
    throw PreconditionError("discrete prior weights must sum to 1");
  }
  return p;
}

double log_marginal(const ScalarFamily& family, const std::string& base_id, const Prior& prior,
                    double x) {
  require_matching_grid(family, prior);
  std::vector<double> terms(prior.weights.size());
  for (std::size_t k = 0; k < terms.size(); ++k) {
    terms[k] = prior.weights[k] == 0.0
                   ? kNegInf
                   : std::log(prior.weights[k]) + family.log_density(base_id, prior.nodes[k], x);
  }
  return log_sum_exp(terms);
}

double marginal_m(const ScalarFamily& family, const std::string& base_id, const Prior& prior,
                  double x) {
  return std::exp(log_marginal(family, base_id, prior, x));
}

PosteriorCurve posterior(const ScalarFamily& family, const std::string& base_id,
                         const Prior& prior, double x) {
  const double lm = log_marginal(family, base_id, prior, x);
  if (lm == kNegInf) throw VanishingLikelihoodError("likelihood vanishes R-almost everywhere");
  PosteriorCurve c;
  c.measure_id = base_id;
  c.observation = x;
  c.nodes = prior.nodes;
  c.density.resize(prior.nodes.size());
  double total = 0.0;
  for (std::size_t k = 0; k < c.density.size(); ++k) {
    c.density[k] = std::exp(family.log_density(base_id, prior.nodes[k], x) - lm);
    total += prior.weights[k] * c.density[k];
  }
  c.normalization_residual = total - 1.0;
  if (!prior.density.empty()) {
    c.lebesgue_density.resize(c.density.size());
    for (std::size_t k = 0; k < c.density.size(); ++k) {
      c.lebesgue_density[k] = c.density[k] * prior.density[k];
    }
  }
  return c;
}

PredictiveMeasure::PredictiveMeasure(const ScalarFamily& family, std::string base_id,
                                     Prior prior)
    : family_(&family), base_id_(std::move(base_id)), prior_(std::move(prior)) {
  require_matching_grid(family, prior_);
  if (!family.has_measure(base_id_)) throw UnknownMeasureError(base_id_);
  if (!family.measure(base_id_).is_one_dimensional()) {
    throw DomainError("predictive measure needs a one-dimensional base");
  }
}

double PredictiveMeasure::m(double x) const {
  return marginal_m(*family_, base_id_, prior_, x);
}

double PredictiveMeasure::mass(const TestSet& set) const {
  const auto& nu = base();
  if (const auto* pts = std::get_if<std::vector<double>>(&set)) {
    double total = 0.0;
    for (double x : *pts) {
      const double a = nu.atom_mass(x);
      if (a > 0.0) total += m(x) * a;
    }
    return total;
  }
  const auto& range = std::get<Interval>(set);
  if (range.hi < range.lo) return 0.0;
  // m vanishes outside the kernel's support; the base handles the split.
  const auto& space = family_->sample_space();
  return nu.integrate(
      [&](double x) {
        if (space.contains && !space.contains(x)) return 0.0;
        return m(x);
      },
      range, 1e-10);
}

double PredictiveMeasure::total_mass() const { return mass(Interval{kNegInf, kInf}); }

std::vector<double> PredictiveMeasure::zero_set(double eps) const {
  std::vector<double> out;
  for (double x : family_->sample_space().atoms) {
    if (m(x) <= eps) out.push_back(x);
  }
  return out;
}

DominatingMeasure PredictiveMeasure::as_measure() const {
  return DominatingMeasure("predictive[" + prior_.label + "," + base_id_ + "]",
                           PredictiveKind{prior_.label, base_id_});
}

InvarianceReport predictive_invariance(const ScalarFamily& family, const std::string& first_id,
                                       const std::string& second_id, const Prior& prior,
                                       const std::vector<TestSet>& sets, double tol) {
  const PredictiveMeasure a(family, first_id, prior);
  const PredictiveMeasure b(family, second_id, prior);
  InvarianceReport r;
  r.masses_first.resize(sets.size());
  r.masses_second.resize(sets.size());
  parallel_for(sets.size(), [&](std::size_t i) {
    r.masses_first[i] = a.mass(sets[i]);
    r.masses_second[i] = b.mass(sets[i]);
  });
  for (std::size_t i = 0; i < sets.size(); ++i) {
    r.max_difference = std::max(r.max_difference, std::abs(r.masses_first[i] - r.masses_second[i]));
  }
  r.pass = r.max_difference <= tol;
  return r;
}

DominanceReport dominance_check(const ScalarFamily& family, const std::string& base_id,
                                const Prior& prior, std::span<const double> points, double eps) {
  require_matching_grid(family, prior);
  const auto& nu = family.measure(base_id);
  std::vector<double> xs(points.begin(), points.end());
  if (xs.empty()) xs = family.sample_space().atoms;
  if (xs.empty()) throw PreconditionError("dominance_check needs atoms or an x grid");

  DominanceReport r;
  for (double x : xs) {
    if (marginal_m(family, base_id, prior, x) <= eps) r.zero_set.push_back(x);
  }
  const bool atomic = nu.is_discrete();
  const std::size_t k = prior.nodes.size();
  r.zero_set_hit.assign(k, false);
  std::vector<std::vector<bool>> support(k, std::vector<bool>(xs.size()));
  for (std::size_t j = 0; j < k; ++j) {
    const Theta& theta = prior.nodes[j];
    for (std::size_t i = 0; i < xs.size(); ++i) {
      support[j][i] = family.log_density(base_id, theta, xs[i]) > kNegInf;
    }
    double p_null = 0.0;
    bool hit = false;
    for (double x : r.zero_set) {
      const double f = std::exp(family.log_density(base_id, theta, x));
      if (atomic) {
        p_null += f * nu.atom_mass(x);
      } else if (f > eps) {
        hit = true;
      }
    }
    r.zero_set_hit[j] = atomic ? p_null > eps : hit;
  }
  r.dominated = std::none_of(r.zero_set_hit.begin(), r.zero_set_hit.end(),
                             [](bool b) { return b; });
  r.support_constant = std::all_of(support.begin(), support.end(),
                                   [&](const std::vector<bool>& s) { return s == support[0]; });
  if (r.support_constant && !r.dominated) {
    throw NumericalError("constant support without dominance: zero-set threshold too coarse");
  }
  return r;
}

ScalarFamily binomial_family(int n, const ThetaGrid& grid) {
  if (n < 0) throw PreconditionError("binomial family needs n >= 0");
  for (const auto& t : grid.points()) {
    if (t.size() != 1 || t[0] < 0.0 || t[0] > 1.0) {
      throw PreconditionError("binomial family needs scalar theta in [0, 1]");
    }
  }
  std::vector<double> atoms(static_cast<std::size_t>(n) + 1);
  for (int x = 0; x <= n; ++x) atoms[static_cast<std::size_t>(x)] = x;
  SampleSpace<double> space;
  space.description = "{0, ..., " + std::to_string(n) + "}";
  space.contains = [n](double x) { return x >= 0 && x <= n && x == std::floor(x); };
  space.atoms = atoms;
  auto log_pmf = [n](const Theta& t, double x) {
    const double p = t[0];
    if ((p == 0.0 && x > 0) || (p == 1.0 && x < n)) return kNegInf;
    return std::lgamma(n + 1.0) - std::lgamma(x + 1.0) - std::lgamma(n - x + 1.0) + xlogy(x, p) +
           xlogy(n - x, 1.0 - p);
  };
  ScalarFamily family(grid, std::move(space));
  family.register_kernel(DominatingMeasure::counting("counting", atoms), log_pmf);
  family.register_kernel(
      DominatingMeasure::counting("counting-x2", atoms, std::vector<double>(atoms.size(), 2.0)),
      [log_pmf](const Theta& t, double x) { return log_pmf(t, x) - std::log(2.0); });
  return family;
}

double beta_binomial_marginal(int n, int x, double a, double b) {
  if (x < 0 || x > n) return 0.0;
  const double log_choose = std::lgamma(n + 1.0) - std::lgamma(x + 1.0) - std::lgamma(n - x + 1.0);
  const double log_beta_post = std::lgamma(x + a) + std::lgamma(n - x + b) - std::lgamma(n + a + b);
  const double log_beta_prior = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  return std::exp(log_choose + log_beta_post - log_beta_prior);
}

double beta_density(double theta, double a, double b) {
  if (theta < 0.0 || theta > 1.0) return 0.0;
  const double log_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  return std::exp(log_norm + xlogy(a - 1.0, theta) + xlogy(b - 1.0, 1.0 - theta));
}

}  // namespace radonlik::bayes
