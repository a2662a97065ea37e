#include "radonlik/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "radonlik/parallel.hpp"
#include "radonlik/random.hpp"

namespace radonlik::mixture {

ContinuousComponent exponential(double rate) {
  if (!(rate > 0.0)) throw PreconditionError("exponential rate must be positive");
  ContinuousComponent c;
  c.name = "exponential";
  c.region = Interval{0.0, kInf};
  c.pdf = [rate](double y) { return y < 0.0 ? 0.0 : rate * std::exp(-rate * y); };
  c.cdf = [rate](double y) { return y <= 0.0 ? 0.0 : -std::expm1(-rate * y); };
  c.quantile = [rate](double u) { return -std::log1p(-u) / rate; };
  return c;
}

ContinuousComponent uniform(double lo, double hi) {
  if (!(hi > lo)) throw PreconditionError("uniform component needs lo < hi");
  ContinuousComponent c;
  c.name = "uniform";
  c.region = Interval{lo, hi};
  const double width = hi - lo;
  c.pdf = [lo, hi, width](double y) { return (y < lo || y > hi) ? 0.0 : 1.0 / width; };
  c.cdf = [lo, hi, width](double y) {
    if (y <= lo) return 0.0;
    if (y >= hi) return 1.0;
    return (y - lo) / width;
  };
  c.quantile = [lo, width](double u) { return lo + u * width; };
  return c;
}

ContinuousComponent truncated_gaussian(double mean, double sd, double lo, double hi) {
  if (!(sd > 0.0)) throw PreconditionError("gaussian sd must be positive");
  if (!(hi > lo)) throw PreconditionError("truncated gaussian needs lo < hi");
  const double a = standard_normal_cdf((lo - mean) / sd);
  const double b = standard_normal_cdf((hi - mean) / sd);
  const double z = b - a;
  if (!(z > 0.0)) throw PreconditionError("truncation interval carries no gaussian mass");
  ContinuousComponent c;
  c.name = "gaussian-truncated";
  c.region = Interval{lo, hi};
  c.pdf = [=](double y) {
    if (y < lo || y > hi) return 0.0;
    return standard_normal_pdf((y - mean) / sd) / (sd * z);
  };
  c.cdf = [=](double y) {
    if (y <= lo) return 0.0;
    if (y >= hi) return 1.0;
    return (standard_normal_cdf((y - mean) / sd) - a) / z;
  };
  c.quantile = [=](double u) {
    // Bisection on the CDF; monotone and bounded once lo/hi are clipped to
    // +-40 sd around the mean.
    double l = std::max(lo, mean - 40.0 * sd);
    double h = std::min(hi, mean + 40.0 * sd);
    const double target = a + u * z;
    for (int it = 0; it < 200 && h - l > 1e-15 * std::max(1.0, std::abs(l)); ++it) {
      const double mid = 0.5 * (l + h);
      if (standard_normal_cdf((mid - mean) / sd) < target) {
        l = mid;
      } else {
        h = mid;
      }
    }
    return 0.5 * (l + h);
  };
  return c;
}

PointMassMixture::PointMassMixture(std::vector<Atom> atoms,
                                   std::vector<WeightedComponent> components)
    : atoms_(std::move(atoms)), components_(std::move(components)) {
  double total = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (!(atoms_[i].mass > 0.0)) throw PreconditionError("atom masses must be positive");
    for (std::size_t k = 0; k < i; ++k) {
      if (atoms_[k].location == atoms_[i].location) {
        throw PreconditionError("atom locations must be distinct");
      }
    }
    total += atoms_[i].mass;
  }
  for (const auto& c : components_) {
    if (!(c.weight > 0.0)) throw PreconditionError("component weights must be positive");
    if (!c.component.pdf || !c.component.cdf) {
      throw PreconditionError("component '" + c.component.name + "' needs pdf and cdf");
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw PreconditionError("atom masses and component weights must sum to 1");
  }
}

std::vector<double> PointMassMixture::atom_locations() const {
  std::vector<double> out;
  for (const auto& a : atoms_) out.push_back(a.location);
  std::sort(out.begin(), out.end());
  return out;
}

double PointMassMixture::atom_total() const {
  double p = 0.0;
  for (const auto& a : atoms_) p += a.mass;
  return p;
}

std::vector<double> PointMassMixture::breakpoints() const {
  std::vector<double> b = atom_locations();
  for (const auto& c : components_) {
    if (std::isfinite(c.component.region.lo)) b.push_back(c.component.region.lo);
    if (std::isfinite(c.component.region.hi)) b.push_back(c.component.region.hi);
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

bool PointMassMixture::is_atom(double y) const {
  return std::any_of(atoms_.begin(), atoms_.end(), [y](const Atom& a) { return a.location == y; });
}

PointMassMixture PointMassMixture::with_atom_mass(double p) const {
  const double p0 = atom_total();
  if (atoms_.empty() || components_.empty()) {
    throw PreconditionError("rescaling needs both atoms and continuous components");
  }
  if (!(p > 0.0 && p < 1.0)) throw PreconditionError("atom mass must lie in (0, 1)");
  std::vector<Atom> atoms = atoms_;
  for (auto& a : atoms) a.mass *= p / p0;
  std::vector<WeightedComponent> comps = components_;
  for (auto& c : comps) c.weight *= (1.0 - p) / (1.0 - p0);
  // Re-anchor the last weight so the total is exactly one in floating point.
  double acc = 0.0;
  for (const auto& a : atoms) acc += a.mass;
  for (std::size_t j = 0; j + 1 < comps.size(); ++j) acc += comps[j].weight;
  comps.back().weight = 1.0 - acc;
  return PointMassMixture(std::move(atoms), std::move(comps));
}

double PointMassMixture::cdf(double y) const {
  double f = 0.0;
  for (const auto& a : atoms_) {
    if (a.location <= y) f += a.mass;
  }
  for (const auto& c : components_) f += c.weight * c.component.cdf(y);
  return f;
}

double density_lebesgue_part(const PointMassMixture& mix, double y) {
  if (mix.is_atom(y)) return 0.0;
  double d = 0.0;
  for (const auto& c : mix.components()) {
    if (c.component.region.contains(y)) d += c.weight * c.component.pdf(y);
  }
  return d;
}

double density_correct(const PointMassMixture& mix, double y) {
  for (const auto& a : mix.atoms()) {
    if (a.location == y) return a.mass;
  }
  return density_lebesgue_part(mix, y);
}

double density_naive(const PointMassMixture& mix, double y) {
  double d = 0.0;
  for (const auto& a : mix.atoms()) {
    if (a.location == y) d += a.mass;
  }
  for (const auto& c : mix.components()) {
    if (c.component.region.contains(y)) d += c.weight * c.component.pdf(y);
  }
  return d;
}

std::vector<double> simulate(const PointMassMixture& mix, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw PreconditionError("simulate needs n >= 1");
  for (const auto& c : mix.components()) {
    if (!c.component.quantile) {
      throw PreconditionError("component '" + c.component.name + "' has no sampler");
    }
  }
  std::vector<double> cumulative;
  double acc = 0.0;
  for (const auto& a : mix.atoms()) cumulative.push_back(acc += a.mass);
  for (const auto& c : mix.components()) cumulative.push_back(acc += c.weight);
  Rng rng = make_stream(seed, {0x6d6978});
  std::vector<double> out;
  out.reserve(n);
  const std::size_t n_atoms = mix.atoms().size();
  for (std::size_t k = 0; k < n; ++k) {
    const double u = uniform_open(rng) * acc;
    std::size_t idx = static_cast<std::size_t>(
        std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
    idx = std::min(idx, cumulative.size() - 1);
    if (idx < n_atoms) {
      out.push_back(mix.atoms()[idx].location);
    } else {
      const auto& comp = mix.components()[idx - n_atoms].component;
      out.push_back(comp.quantile(uniform_open(rng)));
    }
  }
  return out;
}

double sample_log_likelihood(const PointMassMixture& base, double p,
                             const std::vector<double>& sample, DensityVariant variant) {
  const PointMassMixture mix = base.with_atom_mass(p);
  double ll = 0.0;
  for (double y : sample) {
    const double d = variant == DensityVariant::correct ? density_correct(mix, y)
                                                        : density_naive(mix, y);
    if (d == 0.0) return kNegInf;
    ll += std::log(d);
  }
  return ll;
}

ModelFamily<std::vector<double>> atom_weight_family(const PointMassMixture& base,
                                                    ThetaGrid p_grid) {
  for (const auto& t : p_grid.points()) {
    if (t.size() != 1 || !(t[0] > 0.0 && t[0] < 1.0)) {
      throw PreconditionError("atom-mass grid must be scalar and inside (0, 1)");
    }
  }
  SampleSpace<std::vector<double>> space;
  space.description = "i.i.d. real samples";
  space.contains = [](const std::vector<double>& s) {
    return std::all_of(s.begin(), s.end(), [](double y) { return std::isfinite(y); });
  };
  ModelFamily<std::vector<double>> family(std::move(p_grid), std::move(space));
  const Interval line{-kInf, kInf};
  const auto atoms = base.atom_locations();

  family.register_kernel(
      DominatingMeasure::counting_lebesgue_sum(kCountingLebesgue, atoms, line),
      [base](const Theta& t, const std::vector<double>& s) {
        return sample_log_likelihood(base, t[0], s, DensityVariant::correct);
      });
  family.register_kernel(
      DominatingMeasure::counting_lebesgue_sum(kCountingTwiceLebesgue, atoms, line, 2.0),
      [base](const Theta& t, const std::vector<double>& s) {
        const PointMassMixture mix = base.with_atom_mass(t[0]);
        double ll = 0.0;
        for (double y : s) {
          const double d = mix.is_atom(y) ? density_correct(mix, y)
                                          : 0.5 * density_lebesgue_part(mix, y);
          if (d == 0.0) return kNegInf;
          ll += std::log(d);
        }
        return ll;
      });
  family.register_kernel(
      DominatingMeasure::counting_lebesgue_sum(kNaive, atoms, line),
      [base](const Theta& t, const std::vector<double>& s) {
        return sample_log_likelihood(base, t[0], s, DensityVariant::naive);
      });
  return family;
}

GridArgmax grid_mle(const PointMassMixture& base, const ThetaGrid& p_grid,
                    const std::vector<double>& sample, DensityVariant variant) {
  std::vector<double> values;
  parallel_fill(
      p_grid.size(),
      [&](std::size_t i) { return sample_log_likelihood(base, p_grid[i][0], sample, variant); },
      values);
  return grid_argmax(values);
}

}  // namespace radonlik::mixture
