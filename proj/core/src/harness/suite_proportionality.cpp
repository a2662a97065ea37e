#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>

#include "radonlik/diffusion.hpp"
#include "radonlik/expfam.hpp"
#include "radonlik/measure.hpp"
#include "radonlik/mixture.hpp"
#include "radonlik/numeric.hpp"
#include "radonlik/parallel.hpp"
#include "radonlik/poisson.hpp"
#include "radonlik/random.hpp"
#include "suites.hpp"

namespace radonlik::harness::detail {

namespace {

enum Stream : std::uint64_t {
  kMixture = 1,
  kExpfam = 2,
  kPoisson = 3,
  kDiffusion = 4,
  kDominance = 5,
};

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int integer(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::vector<double> random_simplex(Rng& rng, std::size_t n, double total) {
  std::vector<double> w(n);
  double s = 0.0;
  for (auto& x : w) s += (x = uniform(rng, 0.1, 1.0));
  for (auto& x : w) x *= total / s;
  return w;
}

struct Outcome {
  bool pass = false;
  double max_deviation = 0.0;
  std::optional<double> constant;
  std::string note;
};

Outcome compare(const LogLikelihoodCurve& a, const LogLikelihoodCurve& b, double tol) {
  const auto r = check_proportionality(a, b, tol);
  Outcome o;
  o.max_deviation = r.max_deviation;
  o.constant = r.constant_log_ratio;
  o.pass = r.pass && argmax_invariance(a, b);
  return o;
}

Outcome merge(Outcome a, const Outcome& b) {
  a.pass = a.pass && b.pass;
  a.max_deviation = std::max(a.max_deviation, b.max_deviation);
  return a;
}

struct Instance {
  Outcome outcome;
  std::vector<LogLikelihoodCurve> curves;
};

Instance mixture_instance(std::uint64_t seed, std::size_t i, double tol) {
  Rng rng = make_stream(seed, {kMixture, i});
  std::vector<double> locations{-1.0, 0.0, 0.5, 2.0};
  std::shuffle(locations.begin(), locations.end(), rng);
  const auto n_atoms = static_cast<std::size_t>(integer(rng, 1, 3));
  const double p = uniform(rng, 0.1, 0.9);
  const auto masses = random_simplex(rng, n_atoms, p);
  std::vector<mixture::Atom> atoms;
  for (std::size_t k = 0; k < n_atoms; ++k) atoms.push_back({locations[k], masses[k]});
  const auto n_comp = static_cast<std::size_t>(integer(rng, 1, 2));
  const auto weights = random_simplex(rng, n_comp, 1.0 - p);
  std::vector<mixture::WeightedComponent> comps;
  for (std::size_t k = 0; k < n_comp; ++k) {
    switch (integer(rng, 0, 2)) {
      case 0:
        comps.push_back({weights[k], mixture::exponential(uniform(rng, 0.5, 3.0))});
        break;
      case 1: {
        const double lo = uniform(rng, -2.0, 0.0);
        comps.push_back({weights[k], mixture::uniform(lo, lo + uniform(rng, 0.5, 3.0))});
        break;
      }
      default:
        comps.push_back({weights[k], mixture::truncated_gaussian(uniform(rng, -1.0, 1.0),
                                                                 uniform(rng, 0.5, 2.0), -3.0,
                                                                 3.0)});
    }
  }
  const mixture::PointMassMixture base(atoms, comps);
  const auto n = static_cast<std::size_t>(integer(rng, 1, 200));
  const auto sample = mixture::simulate(base, n, seed ^ (i + 1));
  const auto family = mixture::atom_weight_family(base, ThetaGrid::linspace(0.05, 0.95, 19));
  auto a = likelihood_curve(family, mixture::kCountingLebesgue, sample, "sample");
  auto b = likelihood_curve(family, mixture::kCountingTwiceLebesgue, sample, "sample");
  Instance inst{compare(a, b, tol), {}};
  inst.curves = {std::move(a), std::move(b)};
  return inst;
}

Instance expfam_instance(std::uint64_t seed, std::size_t i, double tol) {
  Rng rng = make_stream(seed, {kExpfam, i});
  const int kind = static_cast<int>(i % 3);
  std::vector<double> sample(static_cast<std::size_t>(integer(rng, 1, 10)));
  expfam::ExponentialFamily f = expfam::bernoulli();
  expfam::ExponentialFamily g = f;
  ThetaGrid grid = ThetaGrid::linspace(0.05, 0.95, 19);
  if (kind == 0) {
    const int cap = 60;
    f = expfam::poisson(std::nullopt, cap);
    grid = ThetaGrid::linspace(0.2, 6.0, 25);
    std::poisson_distribution<int> draw(uniform(rng, 0.5, 5.0));
    for (auto& x : sample) x = std::min(draw(rng), cap);
    if (integer(rng, 0, 1) == 0) {
      g = expfam::tilt_to_lambda(f);
    } else {
      std::vector<double> atoms;
      std::vector<double> w;
      for (int x = 0; x <= cap; ++x) {
        atoms.push_back(x);
        w.push_back(uniform(rng, 0.1, 5.0));
      }
      g = expfam::rebase(f, DominatingMeasure::counting("weighted-counting", atoms, w),
                         {Theta{2.0}});
    }
  } else if (kind == 1) {
    std::bernoulli_distribution draw(uniform(rng, 0.1, 0.9));
    for (auto& x : sample) x = draw(rng) ? 1.0 : 0.0;
    const std::vector<double> w{uniform(rng, 0.1, 5.0), uniform(rng, 0.1, 5.0)};
    g = expfam::rebase(f, DominatingMeasure::counting("weighted-counting", {0.0, 1.0}, w),
                       {Theta{0.5}});
  } else {
    const double var = uniform(rng, 0.5, 2.0);
    f = expfam::gaussian_known_variance(var);
    grid = ThetaGrid::linspace(-3.0, 3.0, 25);
    std::normal_distribution<double> draw(uniform(rng, -2.0, 2.0), std::sqrt(var));
    for (auto& x : sample) x = draw(rng);
    const double c = uniform(rng, -1.0, 1.0);
    const double s = uniform(rng, 0.5, 3.0);
    g = expfam::rebase(f,
                       DominatingMeasure::lebesgue(
                           "cauchy-weighted", Box::interval(-kInf, kInf),
                           [c, s](std::span<const double> p) {
                             const double z = (p[0] - c) / s;
                             return -std::log(std::numbers::pi * s * (1.0 + z * z));
                           }),
                       {Theta{0.0}});
  }
  const auto family = expfam::representation_family({f, g}, grid);
  auto a = likelihood_curve(family, f.base.id(), sample, "sample");
  auto b = likelihood_curve(family, g.base.id(), sample, "sample");
  Instance inst{compare(a, b, tol), {}};
  inst.curves = {std::move(a), std::move(b)};
  return inst;
}

Instance poisson_instance(std::uint64_t seed, std::size_t i, double tol) {
  Rng rng = make_stream(seed, {kPoisson, i});
  const int dim = integer(rng, 1, 2);
  std::vector<Interval> sides;
  for (int d = 0; d < dim; ++d) {
    const double lo = uniform(rng, -1.0, 1.0);
    sides.push_back(Interval{lo, lo + uniform(rng, 0.5, 2.0)});
  }
  const Box region{sides};
  const int kind = static_cast<int>(i % 3);
  std::vector<Theta> pts;
  std::function<double(const Theta&)> bound;
  if (kind == 0) {
    for (double c : linspace(0.5, 6.0, 12)) pts.push_back(Theta{c});
    bound = [](const Theta& t) { return t[0]; };
  } else if (kind == 1) {
    for (int k = 0; k < 10; ++k) pts.push_back(Theta{uniform(rng, -1.0, 1.5), uniform(rng, -1.0, 1.0)});
    const Interval s0 = sides[0];
    bound = [s0](const Theta& t) { return std::exp(t[0] + std::max(t[1] * s0.lo, t[1] * s0.hi)); };
  } else {
    for (int k = 0; k < 10; ++k) pts.push_back(Theta{uniform(rng, 0.5, 5.0), uniform(rng, -0.9, 0.9)});
    bound = [](const Theta& t) { return t[0] * (1.0 + std::abs(t[1])); };
  }
  const ThetaGrid grid(pts);
  const auto model = kind == 0   ? poisson::constant_intensity(region, grid)
                     : kind == 1 ? poisson::log_linear_intensity(region, grid)
                                 : poisson::sinusoidal_intensity(region, grid);
  const Theta& truth = grid[static_cast<std::size_t>(integer(rng, 0, static_cast<int>(grid.size()) - 1))];
  const auto pattern = poisson::simulate_thinning(model, truth, bound(truth), seed ^ (i + 1));
  const auto family = poisson::to_model_family(model);
  auto a = likelihood_curve(family, poisson::kProductMeasureId, pattern, "pattern");
  auto b = likelihood_curve(family, poisson::kUnitPoissonId, pattern, "pattern");
  Instance inst{compare(a, b, tol), {}};
  inst.curves = {std::move(a), std::move(b)};
  return inst;
}

Instance diffusion_instance(std::uint64_t seed, std::size_t i, double tol, double bridge_step) {
  Rng rng = make_stream(seed, {kDiffusion, i});
  const int kind = static_cast<int>(i % 3);
  diffusion::SDESpec spec;
  ThetaGrid grid = ThetaGrid::linspace(0.25, 3.0, 12);
  double truth = uniform(rng, 0.5, 2.0);
  double y0 = uniform(rng, -1.0, 1.0);
  if (kind == 0) {
    spec = diffusion::ornstein_uhlenbeck();
  } else if (kind == 1) {
    spec = diffusion::brownian_with_drift();
    grid = ThetaGrid::linspace(-2.0, 2.0, 11);
    truth = uniform(rng, -1.0, 1.0);
  } else {
    spec = diffusion::logistic_geometric();
    y0 = uniform(rng, 0.3, 1.5);
  }
  const int n = integer(rng, 3, 8);
  const double dt = uniform(rng, 0.2, 1.0);
  std::vector<double> times;
  for (int k = 0; k < n; ++k) times.push_back(dt * k);
  const auto obs =
      diffusion::simulate_lamperti_euler(spec, Theta{truth}, times, y0, 1e-3, seed ^ (i + 1));
  const diffusion::PathData data{obs, diffusion::sample_bridges(obs, bridge_step, seed ^ (i + 1))};
  const auto family = diffusion::to_model_family(spec, grid, obs.times);
  auto a = likelihood_curve(family, diffusion::kBridgeMeasureId, data, "path");
  auto b = likelihood_curve(family, diffusion::kTiltedBridgeMeasureId, data, "path");
  const auto c = likelihood_curve(family, diffusion::kUnstandardizedMeasureId, data, "path");
  Instance inst{merge(compare(a, b, tol), compare(a, c, tol)), {}};
  inst.curves = {std::move(a), std::move(b)};
  return inst;
}

struct FiniteFamily {
  std::vector<std::vector<double>> table;  // table[member][atom]
  ScalarFamily family;
};

FiniteFamily random_finite_family(Rng& rng, int max_atoms, int max_members) {
  const int atoms = integer(rng, 1, max_atoms);
  const int members = integer(rng, 1, max_members);
  std::vector<std::vector<double>> table;
  for (int k = 0; k < members; ++k) {
    std::vector<double> row(static_cast<std::size_t>(atoms));
    double total = 0.0;
    for (auto& x : row) total += (x = uniform(rng, 0.0, 1.0) < 0.3 ? 0.0 : uniform(rng, 0.05, 1.0));
    if (total == 0.0) total = row[static_cast<std::size_t>(integer(rng, 0, atoms - 1))] = 1.0;
    for (auto& x : row) x /= total;
    table.push_back(std::move(row));
  }
  std::vector<double> points(static_cast<std::size_t>(atoms));
  std::vector<double> grid(static_cast<std::size_t>(members));
  for (int x = 0; x < atoms; ++x) points[static_cast<std::size_t>(x)] = x;
  for (int k = 0; k < members; ++k) grid[static_cast<std::size_t>(k)] = k;
  SampleSpace<double> space;
  space.description = "finite atoms";
  space.atoms = points;
  space.contains = [atoms](double x) { return x >= 0 && x < atoms && x == std::floor(x); };
  ScalarFamily fam(ThetaGrid::scalar(grid), space);
  fam.register_kernel(DominatingMeasure::counting("counting", points),
                      [table](const Theta& t, double x) {
                        return safe_log(
                            table[static_cast<std::size_t>(t[0])][static_cast<std::size_t>(x)]);
                      });
  return FiniteFamily{std::move(table), std::move(fam)};
}

struct DominanceOutcome {
  bool q_dominates = false;
  bool dominated_by_all = true;
  bool negative_controls = true;
  bool support_inside = true;
  bool pass() const { return q_dominates && dominated_by_all && negative_controls && support_inside; }
};

DominanceOutcome dominance_instance(std::uint64_t seed, std::size_t i, const ProportionalityConfig& c) {
  Rng rng = make_stream(seed, {kDominance, i});
  auto f = random_finite_family(rng, c.max_atoms, c.max_members);
  const auto& grid = f.family.theta_grid();
  std::vector<std::size_t> all(grid.size());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
  const auto q = build_minimal_dominating_measure(f.family, all);
  DominanceOutcome o;
  o.q_dominates = verify_dominance(q, f.family);

  const auto& atoms = f.family.sample_space().atoms;
  std::vector<double> support;
  for (double x : atoms) {
    if (q.mass(f.family, x) > 0.0) support.push_back(x);
  }
  for (const auto& t : grid.points()) {
    for (double a : support_of(f.family, t).atoms) {
      o.support_inside = o.support_inside &&
                         std::binary_search(support.begin(), support.end(), a);
    }
  }
  for (std::size_t m = 0; m < c.dominating_measures_per_family; ++m) {
    std::vector<double> pts;
    std::vector<double> w;
    for (double x : atoms) {
      const bool needed = std::binary_search(support.begin(), support.end(), x);
      if (needed || uniform(rng, 0.0, 1.0) < 0.5) {
        pts.push_back(x);
        w.push_back(uniform(rng, 0.1, 10.0));
      }
    }
    const auto mu = DominatingMeasure::counting("random-" + std::to_string(m), pts, w);
    o.dominated_by_all = o.dominated_by_all && verify_dominance(mu, f.family) &&
                         mixture_dominated_by(q, f.family, mu);
    if (pts.size() > 1) {
      const auto drop = static_cast<std::size_t>(integer(rng, 0, static_cast<int>(support.size()) - 1));
      std::vector<double> pts2;
      std::vector<double> w2;
      for (std::size_t k = 0; k < pts.size(); ++k) {
        if (pts[k] == support[drop]) continue;
        pts2.push_back(pts[k]);
        w2.push_back(w[k]);
      }
      if (!pts2.empty()) {
        const auto nu = DominatingMeasure::counting("missing-atom", pts2, w2);
        o.negative_controls = o.negative_controls && !verify_dominance(nu, f.family) &&
                              !mixture_dominated_by(q, f.family, nu);
      }
    }
  }
  return o;
}

ScalarFamily standard_gaussian() {
  SampleSpace<double> space{"R", [](double x) { return std::isfinite(x); }, {}};
  ScalarFamily f(ThetaGrid::scalar(std::vector<double>{0.0}), space);
  f.register_kernel(DominatingMeasure::lebesgue("lebesgue", Box::interval(-kInf, kInf)),
                    [](const Theta& t, double x) { return normal_log_pdf(x, t[0], 1.0); });
  return f;
}

}  // namespace

ExperimentResult run_proportionality(const Config& config, std::uint64_t seed) {
  const auto& c = config.proportionality;
  const double tol = config.tol;
  ExperimentResult res;
  res.name = "proportionality";
  res.report = report_header(res.name, config, seed);
  bool all_pass = true;

  struct ClassRun {
    const char* name;
    std::function<Instance(std::size_t)> make;
  };
  std::vector<ClassRun> classes{
      {"mixture", [&](std::size_t i) { return mixture_instance(seed, i, tol); }},
      {"expfam", [&](std::size_t i) { return expfam_instance(seed, i, tol); }},
      {"poisson", [&](std::size_t i) { return poisson_instance(seed, i, tol); }},
  };
  if (c.include_diffusion) {
    classes.push_back({"diffusion", [&](std::size_t i) {
                         return diffusion_instance(seed, i, tol, c.bridge_step);
                       }});
  }
  Json classes_json = Json::object();
  for (const auto& cls : classes) {
    std::vector<Outcome> outcomes(c.instances);
    std::vector<LogLikelihoodCurve> first;
    parallel_for(c.instances, [&](std::size_t i) {
      auto inst = cls.make(i);
      outcomes[i] = inst.outcome;
      if (i == 0) first = std::move(inst.curves);
    });
    std::size_t passed = 0;
    double max_dev = 0.0;
    Json constants = Json::array();
    std::vector<std::size_t> failed;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      passed += outcomes[i].pass;
      if (!outcomes[i].pass) failed.push_back(i);
      max_dev = std::max(max_dev, outcomes[i].max_deviation);
      constants.push_back(outcomes[i].constant ? json_number(*outcomes[i].constant) : Json());
    }
    const bool ok = passed == outcomes.size();
    all_pass &= add_check(res.report, std::string("proportional-") + cls.name, ok,
                          {{"instances", outcomes.size()},
                           {"passed", passed},
                           {"max_deviation", json_number(max_dev)},
                           {"failed_instances", failed}});
    classes_json[cls.name] = {{"constant_log_ratios", constants}};
    if (res.curves.empty()) res.curves = std::move(first);
  }

  std::vector<DominanceOutcome> dominance(c.dominance_families);
  parallel_for(c.dominance_families, [&](std::size_t i) { dominance[i] = dominance_instance(seed, i, c); });
  std::size_t dominance_pass = 0;
  std::size_t q_dom = 0;
  std::size_t dom_all = 0;
  std::size_t negatives = 0;
  std::size_t support_ok = 0;
  for (const auto& o : dominance) {
    dominance_pass += o.pass();
    q_dom += o.q_dominates;
    dom_all += o.dominated_by_all;
    negatives += o.negative_controls;
    support_ok += o.support_inside;
  }
  all_pass &= add_check(res.report, "minimal-dominating-measure", dominance_pass == dominance.size(),
                        {{"families", dominance.size()},
                         {"passed", dominance_pass},
                         {"q_dominates_family", q_dom},
                         {"q_dominated_by_random_measures", dom_all},
                         {"negative_controls_detected", negatives},
                         {"support_inside_q", support_ok}});

  std::vector<double> radii;
  for (int j = c.limit_j_min; j <= c.limit_j_max; ++j) radii.push_back(std::ldexp(1.0, -j));
  const auto gauss = standard_gaussian();
  const auto ratios =
      neighborhood_density_limit(gauss, gauss.measure("lebesgue"), Theta{0.0}, 0.0, radii);
  const double target = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  bool monotone = true;
  for (std::size_t j = 1; j < ratios.size(); ++j) {
    monotone = monotone && std::abs(ratios[j] - target) < std::abs(ratios[j - 1] - target);
  }
  const double gauss_error = std::abs(ratios.back() - target);
  all_pass &= add_check(res.report, "neighborhood-limit-gaussian",
                        monotone && gauss_error < c.limit_error,
                        {{"target", target},
                         {"ratios", json_numbers(ratios)},
                         {"monotone", monotone},
                         {"final_error", gauss_error}});

  const auto nu =
      DominatingMeasure::counting_lebesgue_sum("counting+lebesgue", {0.0}, Interval{-kInf, kInf});
  SampleSpace<double> line{"R", [](double x) { return std::isfinite(x); }, {}};
  const double p_atom = 0.3;
  ScalarFamily atom_family(ThetaGrid::scalar(std::vector<double>{p_atom}), line);
  atom_family.register_kernel(nu, [](const Theta& t, double x) {
    if (x == 0.0) return std::log(t[0]);
    return x > 0.0 ? std::log1p(-t[0]) - x : kNegInf;
  });
  const auto atom_ratios =
      neighborhood_density_limit(atom_family, nu, Theta{p_atom}, 0.0, radii);
  const double atom_error = std::abs(atom_ratios.back() - p_atom);
  all_pass &= add_check(res.report, "neighborhood-limit-atom", atom_error < c.limit_error,
                        {{"target", p_atom},
                         {"ratios", json_numbers(atom_ratios)},
                         {"final_error", atom_error}});

  res.report["results"] = classes_json;
  res.report["pass"] = all_pass;
  res.pass = all_pass;
  return res;
}

}  // namespace radonlik::harness::detail
