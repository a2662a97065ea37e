#include "radonlik/expfam.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>

namespace radonlik::expfam {

namespace {

// log(1e300): normalizers above this are treated as divergent.
constexpr double kLogOverflowGuard = 690.7755278982137;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw PreconditionError("eta and T dimensions differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> natural_numbers(int cap) {
  std::vector<double> atoms(static_cast<std::size_t>(cap) + 1);
  for (int x = 0; x <= cap; ++x) atoms[static_cast<std::size_t>(x)] = x;
  return atoms;
}

// log of the base measure's weight at x: atom mass for atomic parts,
// Lebesgue density otherwise.
double log_base_weight(const DominatingMeasure& m, double x) {
  if (m.is_discrete()) return safe_log(m.atom_mass(x));
  return safe_log(m.lebesgue_weight(x));
}

bool in_base_support(const DominatingMeasure& m, double x) {
  if (m.is_discrete()) return m.atom_mass(x) > 0.0;
  return m.lebesgue_weight(x) > 0.0;
}

}  // namespace

ExponentialFamily bernoulli() {
  return ExponentialFamily{
      "bernoulli",
      [](const Theta& t) { return std::vector<double>{std::log(t[0] / (1.0 - t[0]))}; },
      [](double x) { return std::vector<double>{x}; },
      [](double) { return 0.0; },
      [](const Theta& t) { return -std::log1p(-t[0]); },
      DominatingMeasure::counting("counting", {0.0, 1.0})};
}

ExponentialFamily poisson(std::optional<int> truncation, int atom_cap) {
  if (atom_cap < 1) throw PreconditionError("poisson atom cap must be >= 1");
  if (truncation && (*truncation < 0 || *truncation > atom_cap)) {
    throw PreconditionError("poisson truncation must lie in [0, atom_cap]");
  }
  ExponentialFamily fam{
      truncation ? "poisson-truncated" : "poisson",
      [](const Theta& t) { return std::vector<double>{std::log(t[0])}; },
      [](double x) { return std::vector<double>{x}; },
      [truncation](double x) {
        if (truncation && x > *truncation) return kNegInf;
        return -std::lgamma(x + 1.0);
      },
      {},
      DominatingMeasure::counting("counting", natural_numbers(atom_cap))};
  if (!truncation) fam.xi = [](const Theta& t) { return t[0]; };
  return fam;
}

ExponentialFamily gaussian_known_variance(double variance) {
  if (!(variance > 0.0)) throw PreconditionError("gaussian variance must be positive");
  return ExponentialFamily{
      "gaussian",
      [variance](const Theta& t) { return std::vector<double>{t[0] / variance}; },
      [](double x) { return std::vector<double>{x}; },
      [variance](double x) {
        return -0.5 * x * x / variance - 0.5 * std::log(2.0 * std::numbers::pi * variance);
      },
      [variance](const Theta& t) { return 0.5 * t[0] * t[0] / variance; },
      DominatingMeasure::lebesgue("lebesgue", Box::interval(-kInf, kInf))};
}

ExponentialFamily from_catalog(const std::string& name) {
  if (name == "bernoulli") return bernoulli();
  if (name == "poisson") return poisson();
  if (name == "poisson-truncated") return poisson(20);
  if (name == "gaussian") return gaussian_known_variance(1.0);
  throw PreconditionError("unknown exponential family '" + name + "'");
}

double compute_xi(const ExponentialFamily& family, const Theta& theta) {
  const auto eta = family.eta(theta);
  const auto& base = family.base;
  auto exponent = [&](double x) {
    const double lh = family.log_h(x);
    if (lh == kNegInf) return kNegInf;
    const double lw = log_base_weight(base, x);
    if (lw == kNegInf) return kNegInf;
    return dot(eta, family.statistic(x)) + lh + lw;
  };

  double result = kNegInf;
  if (const auto* c = std::get_if<CountingKind>(&base.kind())) {
    // Running log-sum-exp with the overflow guard on partial sums.
    for (double a : c->atoms) {
      result = log_add(result, exponent(a));
      if (result > kLogOverflowGuard) {
        throw NumericalError("divergent normalizer for '" + family.name + "'");
      }
    }
  } else if (const auto* l = std::get_if<LebesgueKind>(&base.kind());
             l && l->region.dimension() == 1) {
    const Interval side = l->region.sides[0];
    const double lo = std::max(side.lo, -1e4);
    const double hi = std::min(side.hi, 1e4);
    const auto best = boost::math::tools::brent_find_minima(
        [&](double x) {
          const double e = exponent(x);
          return e == kNegInf ? std::numeric_limits<double>::max() : -e;
        },
        lo, hi, 40);
    const double mode = best.first;
    const double shift = exponent(mode);
    if (shift == kNegInf) throw NumericalError("exponential-family integrand vanishes");
    if (shift > kLogOverflowGuard) {
      throw NumericalError("divergent normalizer for '" + family.name + "'");
    }
    const double cut[1] = {mode};
    const double integral = integrate_split(
        [&](double x) {
          const double e = exponent(x);
          return e == kNegInf ? 0.0 : std::exp(e - shift);
        },
        side.lo, side.hi, cut, 1e-12);
    if (!(integral > 0.0)) throw NumericalError("exponential-family normalizer is zero");
    result = shift + std::log(integral);
    if (result > kLogOverflowGuard) {
      throw NumericalError("divergent normalizer for '" + family.name + "'");
    }
  } else {
    throw PreconditionError("compute_xi needs an atomic or one-dimensional Lebesgue base");
  }
  if (result == kNegInf) throw NumericalError("exponential-family normalizer is zero");
  return result;
}

double xi_value(const ExponentialFamily& family, const Theta& theta) {
  return family.xi ? family.xi(theta) : compute_xi(family, theta);
}

std::vector<double> sufficient_statistic(const ExponentialFamily& family,
                                         std::span<const double> sample) {
  std::vector<double> total;
  for (double x : sample) {
    const auto t = family.statistic(x);
    if (total.empty()) total.assign(t.size(), 0.0);
    for (std::size_t i = 0; i < t.size(); ++i) total[i] += t[i];
  }
  return total;
}

namespace {

double log_density_with_xi(const ExponentialFamily& family, const Theta& theta,
                           std::span<const double> sample, double xi) {
  const auto eta = family.eta(theta);
  double acc = 0.0;
  for (double x : sample) {
    if (!in_base_support(family.base, x)) {
      throw DomainError("observation " + std::to_string(x) + " outside the support of '" +
                        family.base.id() + "'");
    }
    const double lh = family.log_h(x);
    if (lh == kNegInf) return kNegInf;
    acc += dot(eta, family.statistic(x)) + lh;
  }
  return acc - static_cast<double>(sample.size()) * xi;
}

}  // namespace

double log_density(const ExponentialFamily& family, const Theta& theta,
                   std::span<const double> sample) {
  return log_density_with_xi(family, theta, sample, xi_value(family, theta));
}

ExponentialFamily tilt_to_lambda(const ExponentialFamily& family) {
  const auto& base = family.base;
  auto log_h = family.log_h;
  std::optional<DominatingMeasure> lambda;
  if (const auto* c = std::get_if<CountingKind>(&base.kind())) {
    CountingKind tilted{c->atoms, {}};
    for (std::size_t i = 0; i < c->atoms.size(); ++i) {
      const double lw = c->log_weights.empty() ? 0.0 : c->log_weights[i];
      tilted.log_weights.push_back(lw + log_h(c->atoms[i]));
    }
    lambda.emplace("lambda-tilt", std::move(tilted));
  } else if (const auto* l = std::get_if<LebesgueKind>(&base.kind());
             l && l->region.dimension() == 1) {
    auto base_density = l->log_density;
    lambda.emplace("lambda-tilt",
                   LebesgueKind{l->region, [base_density, log_h](std::span<const double> p) {
                                  const double lw = base_density ? base_density(p) : 0.0;
                                  return lw + log_h(p[0]);
                                }});
  } else {
    throw PreconditionError("tilt needs an atomic or one-dimensional Lebesgue base");
  }
  ExponentialFamily out{family.name + "/lambda", family.eta, family.statistic,
                        [](double) { return 0.0; }, family.xi, std::move(*lambda)};
  if (!out.xi) {
    // xi is unchanged by the tilt; pin it to the original representation.
    out.xi = [family](const Theta& t) { return compute_xi(family, t); };
  }
  return out;
}

ExponentialFamily change_dominating_measure(const ExponentialFamily& family,
                                            DominatingMeasure mu, LogFunction log_s,
                                            LogFunction log_q) {
  if (const auto* c = std::get_if<CountingKind>(&mu.kind())) {
    for (double a : c->atoms) {
      if (mu.atom_mass(a) > 0.0 && log_q(a) == kNegInf) {
        throw PreconditionError("q vanishes at an atom with positive new-base mass");
      }
    }
  }
  auto log_h = family.log_h;
  ExponentialFamily out{family.name, family.eta, family.statistic,
                        [log_h, log_s, log_q](double x) {
                          const double lh = log_h(x);
                          if (lh == kNegInf) return kNegInf;
                          const double lq = log_q(x);
                          if (lq == kNegInf) {
                            throw PreconditionError("q vanishes where the new base has mass");
                          }
                          return lh - lq + log_s(x);
                        },
                        family.xi, std::move(mu)};
  if (!out.xi) out.xi = [family](const Theta& t) { return compute_xi(family, t); };
  return out;
}

MixtureDensities mixture_densities(const ExponentialFamily& family, const DominatingMeasure& mu,
                                   const std::vector<Theta>& members) {
  if (members.empty()) throw PreconditionError("mixture needs at least one member");
  if (family.base.is_discrete() != mu.is_discrete()) {
    throw PreconditionError("base and new measure must both be atomic or both continuous");
  }
  struct Member {
    std::vector<double> eta;
    double xi;
  };
  auto table = std::make_shared<std::vector<Member>>();
  for (const auto& m : members) table->push_back({family.eta(m), xi_value(family, m)});
  const double log_c = -std::log(static_cast<double>(members.size()));
  const ExponentialFamily fam = family;
  LogFunction log_q = [fam, table, log_c](double x) {
    const double lh = fam.log_h(x);
    if (lh == kNegInf) return kNegInf;
    const auto t = fam.statistic(x);
    double acc = kNegInf;
    for (const auto& m : *table) acc = log_add(acc, dot(m.eta, t) - m.xi);
    return acc + log_c + lh;
  };
  const DominatingMeasure base = family.base;
  const DominatingMeasure target = mu;
  LogFunction log_s = [log_q, base, target](double x) {
    // s = q * d(base)/d(mu)
    return log_q(x) + log_base_weight(base, x) - log_base_weight(target, x);
  };
  return {log_q, log_s};
}

ExponentialFamily rebase(const ExponentialFamily& family, DominatingMeasure mu,
                         const std::vector<Theta>& members) {
  auto d = mixture_densities(family, mu, members);
  return change_dominating_measure(family, std::move(mu), d.log_s, d.log_q);
}

bool factorization_ratio_test(const ExponentialFamily& family, const ThetaGrid& grid,
                              std::span<const double> omega1, std::span<const double> omega2) {
  const auto t1 = sufficient_statistic(family, omega1);
  const auto t2 = sufficient_statistic(family, omega2);
  if (t1.size() != t2.size()) throw PreconditionError("samples give statistics of different size");
  for (std::size_t i = 0; i < t1.size(); ++i) {
    if (std::abs(t1[i] - t2[i]) > 1e-12 * std::max(1.0, std::abs(t1[i]))) {
      throw PreconditionError("factorization test requires T(omega1) == T(omega2)");
    }
  }
  double lo = kInf;
  double hi = -kInf;
  for (const auto& theta : grid.points()) {
    const double d = log_density(family, theta, omega1) - log_density(family, theta, omega2);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return hi - lo <= 1e-10;
}

ModelFamily<std::vector<double>> representation_family(
    const std::vector<ExponentialFamily>& representations, const ThetaGrid& grid) {
  if (representations.empty()) throw PreconditionError("need at least one representation");
  SampleSpace<std::vector<double>> space;
  space.description = "i.i.d. samples in the support of " + representations.front().base.id();
  const DominatingMeasure first_base = representations.front().base;
  space.contains = [first_base](const std::vector<double>& s) {
    return std::all_of(s.begin(), s.end(),
                       [&](double x) { return in_base_support(first_base, x); });
  };
  ModelFamily<std::vector<double>> family(grid, std::move(space));
  for (const auto& rep : representations) {
    // Sequential warm-up; afterwards the table is read-only and shared.
    auto xi_table = std::make_shared<std::map<Theta, double>>();
    for (const auto& theta : grid.points()) (*xi_table)[theta] = xi_value(rep, theta);
    family.register_kernel(rep.base,
                           [rep, xi_table](const Theta& theta, const std::vector<double>& s) {
                             const auto it = xi_table->find(theta);
                             const double xi =
                                 it != xi_table->end() ? it->second : xi_value(rep, theta);
                             return log_density_with_xi(rep, theta, s, xi);
                           });
  }
  return family;
}

}  // namespace radonlik::expfam
