#include "radonlik/poisson.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "radonlik/parallel.hpp"
#include "radonlik/random.hpp"

namespace radonlik::poisson {

void PointPattern::validate() const {
  if (region.dimension() == 0) throw PreconditionError("point pattern needs a region");
  for (const auto& p : points) {
    if (p.size() != region.dimension()) {
      throw PreconditionError("point dimension differs from the region");
    }
    if (!region.contains(p)) throw PreconditionError("point outside the region");
  }
}

IntensityModel::IntensityModel(std::string name, ThetaGrid grid, Box region, Intensity intensity,
                               std::function<double(const Theta&)> closed_integral)
    : name_(std::move(name)),
      grid_(std::move(grid)),
      region_(std::move(region)),
      intensity_(std::move(intensity)),
      closed_integral_(std::move(closed_integral)) {
  const auto d = region_.dimension();
  if (d != 1 && d != 2) throw PreconditionError("intensity region must have dimension 1 or 2");
  for (const auto& s : region_.sides) {
    if (!(s.hi > s.lo) || !std::isfinite(s.lo) || !std::isfinite(s.hi)) {
      throw PreconditionError("intensity region must be a bounded box");
    }
  }
  if (grid_.empty()) throw PreconditionError("intensity model needs a theta grid");
}

double IntensityModel::intensity(const Theta& theta, std::span<const double> s) const {
  const double v = intensity_(theta, s);
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw NumericalError("intensity '" + name_ + "' must be finite and non-negative");
  }
  return v;
}

double IntensityModel::integral(const Theta& theta) const {
  if (closed_integral_) return closed_integral_(theta);
  const auto& sides = region_.sides;
  if (sides.size() == 1) {
    return integrate(
        [&](double x) {
          const double p[1] = {x};
          return intensity(theta, p);
        },
        sides[0].lo, sides[0].hi, 1e-9);
  }
  return integrate(
      [&](double x) {
        return integrate(
            [&](double y) {
              const double p[2] = {x, y};
              return intensity(theta, p);
            },
            sides[1].lo, sides[1].hi, 1e-11);
      },
      sides[0].lo, sides[0].hi, 1e-9);
}

namespace {

// Product of side lengths other than the first.
double cross_section(const Box& region) {
  double v = 1.0;
  for (std::size_t i = 1; i < region.sides.size(); ++i) v *= region.sides[i].length();
  return v;
}

}  // namespace

IntensityModel constant_intensity(Box region, ThetaGrid grid, bool closed_form) {
  const double volume = region.volume();
  std::function<double(const Theta&)> closed;
  if (closed_form) closed = [volume](const Theta& t) { return t[0] * volume; };
  return IntensityModel(
      "constant", std::move(grid), std::move(region),
      [](const Theta& t, std::span<const double>) { return t[0]; }, closed);
}

IntensityModel log_linear_intensity(Box region, ThetaGrid grid, bool closed_form) {
  const double lo = region.sides.at(0).lo;
  const double hi = region.sides.at(0).hi;
  const double cross = cross_section(region);
  std::function<double(const Theta&)> closed;
  if (closed_form) {
    closed = [lo, hi, cross](const Theta& t) {
      const double a = t[0];
      const double b = t[1];
      if (b == 0.0) return std::exp(a) * (hi - lo) * cross;
      // exp(a) * (e^{b hi} - e^{b lo}) / b, written with expm1 for small b.
      return std::exp(a + b * lo) * std::expm1(b * (hi - lo)) / b * cross;
    };
  }
  return IntensityModel(
      "log-linear", std::move(grid), std::move(region),
      [](const Theta& t, std::span<const double> s) { return std::exp(t[0] + t[1] * s[0]); },
      closed);
}

IntensityModel sinusoidal_intensity(Box region, ThetaGrid grid, bool closed_form) {
  for (const auto& t : grid.points()) {
    if (t.size() != 2 || t[0] < 0.0 || std::abs(t[1]) > 1.0) {
      throw PreconditionError("sinusoidal intensity needs theta = (c >= 0, |a| <= 1)");
    }
  }
  const double lo = region.sides.at(0).lo;
  const double hi = region.sides.at(0).hi;
  const double cross = cross_section(region);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::function<double(const Theta&)> closed;
  if (closed_form) {
    closed = [lo, hi, cross](const Theta& t) {
      const double periodic = (std::cos(two_pi * lo) - std::cos(two_pi * hi)) / two_pi;
      return t[0] * ((hi - lo) + t[1] * periodic) * cross;
    };
  }
  return IntensityModel(
      "sinusoidal", std::move(grid), std::move(region),
      [](const Theta& t, std::span<const double> s) {
        return t[0] * (1.0 + t[1] * std::sin(two_pi * s[0]));
      },
      closed);
}

IntensityModel intensity_from_catalog(const std::string& name, Box region, ThetaGrid grid) {
  if (name == "constant") return constant_intensity(std::move(region), std::move(grid));
  if (name == "log-linear") return log_linear_intensity(std::move(region), std::move(grid));
  if (name == "sinusoidal") return sinusoidal_intensity(std::move(region), std::move(grid));
  throw PreconditionError("unknown intensity family '" + name + "'");
}

PointPattern simulate_thinning(const IntensityModel& model, const Theta& theta, double bound,
                               std::uint64_t seed) {
  if (!(bound >= 0.0) || !std::isfinite(bound)) {
    throw PreconditionError("thinning bound must be finite and >= 0");
  }
  const Box& region = model.region();
  PointPattern pattern{region, {}};
  if (bound == 0.0) return pattern;
  Rng rng = make_stream(seed, {0x7070});
  std::poisson_distribution<std::uint64_t> count(bound * region.volume());
  const std::uint64_t proposals = count(rng);
  std::vector<double> s(region.dimension());
  for (std::uint64_t k = 0; k < proposals; ++k) {
    for (std::size_t d = 0; d < s.size(); ++d) {
      const auto& side = region.sides[d];
      s[d] = side.lo + uniform_open(rng) * side.length();
    }
    const double lambda = model.intensity(theta, s);
    if (lambda > bound) {
      throw PreconditionError("thinning bound violated: intensity " + std::to_string(lambda) +
                              " exceeds " + std::to_string(bound));
    }
    if (uniform_open(rng) * bound < lambda) pattern.points.push_back(s);
  }
  return pattern;
}

double loglik_product_measure(const IntensityModel& model, const Theta& theta,
                              const PointPattern& pattern) {
  const double big_lambda = model.integral(theta);
  const double n = static_cast<double>(pattern.count());
  double ll = -std::lgamma(n + 1.0) - big_lambda;
  if (pattern.count() == 0) return ll;
  if (!(big_lambda > 0.0)) return kNegInf;
  const double log_total = std::log(big_lambda);
  ll += n * log_total;
  for (const auto& s : pattern.points) {
    const double lambda = model.intensity(theta, s);
    if (lambda == 0.0) return kNegInf;
    ll += std::log(lambda) - log_total;
  }
  return ll;
}

double loglik_jacod(const IntensityModel& model, const Theta& theta,
                    const PointPattern& pattern) {
  double ll = -(model.integral(theta) - pattern.region.volume());
  for (const auto& s : pattern.points) {
    const double lambda = model.intensity(theta, s);
    if (lambda == 0.0) return kNegInf;
    ll += std::log(lambda);
  }
  return ll;
}

GridArgmax mle_intensity(const IntensityModel& model, const PointPattern& pattern,
                         Measure measure) {
  pattern.validate();
  const auto& grid = model.theta_grid();
  std::vector<double> values;
  parallel_fill(
      grid.size(),
      [&](std::size_t i) {
        return measure == Measure::product ? loglik_product_measure(model, grid[i], pattern)
                                           : loglik_jacod(model, grid[i], pattern);
      },
      values);
  return grid_argmax(values);
}

ModelFamily<PointPattern> to_model_family(const IntensityModel& model) {
  SampleSpace<PointPattern> space;
  space.description = "finite point patterns on the model region";
  const Box region = model.region();
  space.contains = [region](const PointPattern& p) {
    if (!(p.region == region)) return false;
    for (const auto& s : p.points) {
      if (!region.contains(s)) return false;
    }
    return true;
  };
  ModelFamily<PointPattern> family(model.theta_grid(), std::move(space));
  // Counting on the pattern size (represented up to 1000 points) times
  // Lebesgue on S^N.
  std::vector<double> sizes(1001);
  for (std::size_t k = 0; k < sizes.size(); ++k) sizes[k] = static_cast<double>(k);
  family.register_kernel(
      DominatingMeasure(kProductMeasureId,
                        ProductKind{{DominatingMeasure::counting("counting-N", sizes),
                                     DominatingMeasure::lebesgue("lebesgue-S", region)}}),
      [model](const Theta& t, const PointPattern& p) {
        return loglik_product_measure(model, t, p);
      });
  family.register_kernel(DominatingMeasure(kUnitPoissonId, UnitPoissonLawKind{region}),
                         [model](const Theta& t, const PointPattern& p) {
                           return loglik_jacod(model, t, p);
                         });
  return family;
}

nlohmann::json pattern_to_json(const PointPattern& pattern) {
  nlohmann::json region = nlohmann::json::array();
  for (const auto& s : pattern.region.sides) region.push_back({s.lo, s.hi});
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : pattern.points) points.push_back(p);
  return nlohmann::json{{"region", region}, {"points", points}};
}

PointPattern pattern_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("region") || !j.contains("points")) {
    throw PreconditionError("pattern JSON needs 'region' and 'points'");
  }
  PointPattern p;
  try {
    for (const auto& side : j.at("region")) {
      if (side.size() != 2) throw PreconditionError("region sides are [lo, hi] pairs");
      p.region.sides.push_back(Interval{side.at(0).get<double>(), side.at(1).get<double>()});
    }
    for (const auto& pt : j.at("points")) p.points.push_back(pt.get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("malformed pattern JSON: ") + e.what());
  }
  p.validate();
  return p;
}

}  // namespace radonlik::poisson
