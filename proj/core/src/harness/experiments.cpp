#include "radonlik/harness/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "radonlik/bayes.hpp"
#include "radonlik/diffusion.hpp"
#include "radonlik/error.hpp"
#include "radonlik/expfam.hpp"
#include "radonlik/harness/mcem.hpp"
#include "radonlik/mixture.hpp"
#include "radonlik/poisson.hpp"
#include "radonlik/random.hpp"
#include "suites.hpp"

namespace radonlik::harness {

namespace detail {

Json report_header(const std::string& name, const Config& config, std::uint64_t seed) {
  Json r = Json::object();
  r["schema_version"] = kSchemaVersion;
  r["experiment"] = name;
  r["seed"] = config.seed;
  r["experiment_seed"] = seed;
  r["tol"] = config.tol;
  r["pass"] = false;
  r["checks"] = Json::array();
  return r;
}

namespace {

ExperimentResult start(const std::string& name, const Config& config, std::uint64_t seed) {
  ExperimentResult res;
  res.name = name;
  res.report = report_header(name, config, seed);
  return res;
}

void finish(ExperimentResult& res, bool pass, Json results) {
  res.report["pass"] = pass;
  res.report["results"] = std::move(results);
  res.pass = pass;
}

Json argmax_json(const GridArgmax& g, const ThetaGrid& grid) {
  Json thetas = Json::array();
  for (auto i : g.indices) thetas.push_back(json_theta(grid[i]));
  return {{"indices", g.indices}, {"theta", thetas}, {"max_log_likelihood", json_number(g.max_value)}};
}

}  // namespace

ExperimentResult run_mixture(const Config& config, std::uint64_t seed) {
  const auto& c = config.mixture;
  auto res = start("mixture", config, seed);
  const double p_true = c.base.atom_total();
  const auto sample = mixture::simulate(c.base, c.samples, seed);
  const auto correct = mixture::grid_mle(c.base, c.grid, sample, mixture::DensityVariant::correct);
  const auto naive = mixture::grid_mle(c.base, c.grid, sample, mixture::DensityVariant::naive);
  const double p_correct = c.grid[correct.indices.front()][0];
  const double p_naive = c.grid[naive.indices.front()][0];

  const auto family = mixture::atom_weight_family(c.base, c.grid);
  auto lik = likelihood_curve(family, mixture::kCountingLebesgue, sample, "sample");
  auto twice = likelihood_curve(family, mixture::kCountingTwiceLebesgue, sample, "sample");
  auto bad = likelihood_curve(family, mixture::kNaive, sample, "sample");
  const auto same_family = check_proportionality(lik, twice, config.tol);
  const auto misspecified = check_proportionality(lik, bad, config.tol);
  std::size_t continuous = 0;
  for (double y : sample) continuous += !c.base.is_atom(y);

  bool ok = true;
  ok &= add_check(res.report, "correct-mle-near-truth",
                  std::abs(p_correct - p_true) <= c.mle_tolerance,
                  {{"p_true", p_true}, {"p_hat", p_correct}, {"tolerance", c.mle_tolerance}});
  ok &= add_check(res.report, "twice-lebesgue-proportional",
                  same_family.pass && argmax_invariance(lik, twice),
                  {{"constant_log_ratio", same_family.constant_log_ratio
                                              ? json_number(*same_family.constant_log_ratio)
                                              : Json()},
                   {"expected_constant", static_cast<double>(continuous) * std::log(2.0)},
                   {"max_deviation", json_number(same_family.max_deviation)}});
  ok &= add_check(res.report, "naive-not-proportional", !misspecified.pass,
                  {{"max_deviation", json_number(misspecified.max_deviation)}});
  finish(res, ok,
         {{"samples", c.samples},
          {"atoms_in_sample", c.samples - continuous},
          {"correct_mle", argmax_json(correct, c.grid)},
          {"naive_mle", argmax_json(naive, c.grid)},
          {"naive_deviation", p_naive - p_true}});
  res.curves = {std::move(lik), std::move(bad)};
  return res;
}

namespace {

expfam::ExponentialFamily expfam_family(const ExpfamConfig& c) {
  if (c.family == "poisson") return expfam::poisson(std::nullopt, c.atom_cap);
  if (c.family == "poisson-truncated") return expfam::poisson(std::min(20, c.atom_cap), c.atom_cap);
  return expfam::from_catalog(c.family);
}

// Second sample with the same sufficient statistic.
std::vector<double> same_statistic(const std::string& family, std::vector<double> s) {
  std::reverse(s.begin(), s.end());
  if (s.size() < 2) return s;
  if (family == "gaussian") {
    s[0] += 0.75;
    s[1] -= 0.75;
  } else if (family != "bernoulli" && s[1] >= 1.0) {
    s[0] += 1.0;
    s[1] -= 1.0;
  }
  return s;
}

}  // namespace

ExperimentResult run_expfam(const Config& config, std::uint64_t seed) {
  const auto& c = config.expfam;
  auto res = start("expfam", config, seed);
  const auto f = expfam_family(c);
  std::vector<expfam::ExponentialFamily> reps{f, expfam::tilt_to_lambda(f)};
  const Theta center = c.grid[c.grid.size() / 2];
  if (f.base.is_discrete()) {
    std::vector<double> atoms;
    for (double a : f.base.support().atoms) {
      if (std::isfinite(expfam::log_density(f, center, std::span<const double>(&a, 1)))) {
        atoms.push_back(a);
      }
    }
    std::vector<double> geometric;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      geometric.push_back(std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(k + 1, 1000))));
    }
    reps.push_back(expfam::rebase(f, DominatingMeasure::counting("geometric", atoms, geometric),
                                  {center}));
    reps.push_back(expfam::rebase(
        f, DominatingMeasure::counting("2counting", atoms, std::vector<double>(atoms.size(), 2.0)),
        {center}));
  } else {
    reps.push_back(expfam::rebase(
        f,
        DominatingMeasure::lebesgue("2lebesgue", Box::interval(-kInf, kInf),
                                    [](std::span<const double>) { return std::log(2.0); }),
        {center}));
  }
  const auto family = expfam::representation_family(reps, c.grid);
  const auto base = likelihood_curve(family, f.base.id(), c.sample, "sample");

  bool ok = true;
  Json constants = Json::object();
  bool all_prop = true;
  double max_dev = 0.0;
  for (std::size_t k = 1; k < reps.size(); ++k) {
    const auto other = likelihood_curve(family, reps[k].base.id(), c.sample, "sample");
    const auto r = check_proportionality(base, other, config.tol);
    all_prop = all_prop && r.pass && argmax_invariance(base, other);
    max_dev = std::max(max_dev, r.max_deviation);
    constants[reps[k].base.id()] = r.constant_log_ratio ? json_number(*r.constant_log_ratio) : Json();
    if (k == 1) res.curves = {base, other};
  }
  ok &= add_check(res.report, "representations-proportional", all_prop,
                  {{"max_deviation", json_number(max_dev)}, {"constant_log_ratios", constants}});

  if (f.xi) {
    double worst = 0.0;
    for (const auto& t : c.grid.points()) {
      worst = std::max(worst, std::abs(expfam::compute_xi(f, t) - f.xi(t)));
    }
    ok &= add_check(res.report, "xi-numeric-matches-closed-form", worst <= 1e-8,
                    {{"max_abs_error", worst}});
  }
  const auto other_sample = same_statistic(c.family, c.sample);
  ok &= add_check(res.report, "factorization",
                  expfam::factorization_ratio_test(f, c.grid, c.sample, other_sample),
                  {{"sample", json_numbers(c.sample)}, {"same_statistic_sample", json_numbers(other_sample)}});
  finish(res, ok,
         {{"family", c.family},
          {"bases", [&] {
             Json ids = Json::array();
             for (const auto& r : reps) ids.push_back(r.base.id());
             return ids;
           }()},
          {"mle", argmax_json(grid_argmax(base.values), c.grid)}});
  return res;
}

namespace {

double intensity_bound(const std::string& name, const Box& region, const Theta& t) {
  if (name == "constant") return t[0];
  if (name == "log-linear") {
    const auto& s = region.sides[0];
    return std::exp(t[0] + std::max(t[1] * s.lo, t[1] * s.hi));
  }
  return t[0] * (1.0 + std::abs(t[1]));
}

}  // namespace

ExperimentResult run_poisson(const Config& config, std::uint64_t seed) {
  const auto& c = config.poisson;
  auto res = start("poisson", config, seed);
  const auto model = poisson::intensity_from_catalog(c.intensity, c.region, c.grid);
  auto patterns = c.patterns;
  const double bound = intensity_bound(c.intensity, c.region, c.simulate_theta);
  for (std::size_t k = 0; k < c.simulated_patterns; ++k) {
    patterns.push_back(poisson::simulate_thinning(model, c.simulate_theta, bound,
                                                  make_stream(seed, {0x7070, k})()));
  }
  const auto family = poisson::to_model_family(model);
  const double volume = c.region.volume();
  bool prop_ok = true;
  bool identity_ok = true;
  bool mle_ok = true;
  double worst_identity = 0.0;
  Json per = Json::array();
  for (std::size_t k = 0; k < patterns.size(); ++k) {
    const auto& p = patterns[k];
    auto a = likelihood_curve(family, poisson::kProductMeasureId, p, "pattern");
    auto b = likelihood_curve(family, poisson::kUnitPoissonId, p, "pattern");
    const auto r = check_proportionality(a, b, config.tol);
    const double expected = -volume - std::lgamma(static_cast<double>(p.count()) + 1.0);
    double err = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      const double d = a.values[i] - b.values[i];
      err = std::max(err, std::isfinite(d) ? std::abs(d - expected) : kInf);
    }
    const auto m1 = poisson::mle_intensity(model, p, poisson::Measure::product);
    const auto m2 = poisson::mle_intensity(model, p, poisson::Measure::jacod);
    prop_ok = prop_ok && r.pass && argmax_invariance(a, b);
    identity_ok = identity_ok && err <= c.identity_tol;
    mle_ok = mle_ok && m1.indices == m2.indices;
    worst_identity = std::max(worst_identity, err);
    per.push_back({{"points", p.count()},
                   {"constant_log_ratio", r.constant_log_ratio ? json_number(*r.constant_log_ratio) : Json()},
                   {"expected_constant", expected},
                   {"max_identity_error", json_number(err)},
                   {"mle", argmax_json(m1, c.grid)}});
    if (k == 0) res.curves = {std::move(a), std::move(b)};
  }
  bool ok = true;
  ok &= add_check(res.report, "product-vs-unit-poisson-proportional", prop_ok,
                  {{"patterns", patterns.size()}});
  ok &= add_check(res.report, "log-ratio-identity", identity_ok,
                  {{"max_error", json_number(worst_identity)}, {"tolerance", c.identity_tol}});
  ok &= add_check(res.report, "mle-invariant", mle_ok);
  finish(res, ok,
         {{"intensity", c.intensity}, {"region_volume", volume}, {"patterns", per}});
  return res;
}

ExperimentResult run_diffusion(const Config& config, std::uint64_t seed) {
  const auto& c = config.diffusion;
  auto res = start("diffusion", config, seed);
  const auto spec = diffusion::from_catalog(c.model);
  std::vector<double> times;
  for (std::size_t k = 0; k < c.observations; ++k) times.push_back(c.dt * static_cast<double>(k));
  const auto obs = c.model == "ou"
                       ? diffusion::simulate_ou(c.theta_true, times, c.y0, seed)
                       : diffusion::simulate_lamperti_euler(spec, Theta{c.theta_true}, times, c.y0,
                                                            1e-3, seed);
  const diffusion::PathData data{obs, diffusion::sample_bridges(obs, c.bridge_step, seed)};
  const auto family = diffusion::to_model_family(spec, c.grid, obs.times);
  auto base = likelihood_curve(family, diffusion::kBridgeMeasureId, data, "path");
  auto tilted = likelihood_curve(family, diffusion::kTiltedBridgeMeasureId, data, "path");
  const auto unstd = likelihood_curve(family, diffusion::kUnstandardizedMeasureId, data, "path");
  const auto r1 = check_proportionality(base, tilted, config.tol);
  const auto r2 = check_proportionality(base, unstd, config.tol);
  const double tilt_weight = diffusion::bridge_tilt_log_weight(data.bridges);

  bool ok = true;
  ok &= add_check(res.report, "fixed-bridge-proportional",
                  r1.pass && r2.pass && argmax_invariance(base, tilted) &&
                      argmax_invariance(base, unstd),
                  {{"max_deviation", json_number(std::max(r1.max_deviation, r2.max_deviation))},
                   {"constant_tilted", r1.constant_log_ratio ? json_number(*r1.constant_log_ratio) : Json()},
                   {"expected_tilted", tilt_weight},
                   {"constant_unstandardized",
                    r2.constant_log_ratio ? json_number(*r2.constant_log_ratio) : Json()}});
  ok &= add_check(res.report, "tilt-constant",
                  r1.constant_log_ratio &&
                      std::abs(*r1.constant_log_ratio - tilt_weight) <=
                          1e-8 * std::max(1.0, std::abs(tilt_weight)));

  const auto& o = c.oracle;
  const auto ou = diffusion::ornstein_uhlenbeck();
  Json points = Json::array();
  bool oracle_ok = true;
  for (std::size_t k = 0; k < o.points.size(); ++k) {
    const auto [x0, x1] = o.points[k];
    const auto mc = diffusion::transition_density_mc(ou, Theta{o.theta}, o.t, x0, x1, o.mc_size,
                                                     o.step, make_stream(seed, {0x6f72, k})());
    const double exact = std::exp(diffusion::ou_transition_log_density(o.theta, o.t, x0, x1));
    const double z = mc.standard_error > 0.0 ? std::abs(mc.value - exact) / mc.standard_error
                                             : (mc.value == exact ? 0.0 : kInf);
    const double rel = std::abs(mc.value - exact) / exact;
    const bool pass = z <= o.max_standard_errors && rel <= o.max_relative_error;
    oracle_ok = oracle_ok && pass;
    points.push_back({{"x0", x0},
                      {"x1", x1},
                      {"estimate", mc.value},
                      {"standard_error", mc.standard_error},
                      {"exact", exact},
                      {"standard_errors_off", json_number(z)},
                      {"relative_error", rel},
                      {"pass", pass}});
  }
  ok &= add_check(res.report, "ou-transition-oracle", oracle_ok,
                  {{"theta", o.theta},
                   {"t", o.t},
                   {"mc_size", o.mc_size},
                   {"step", o.step},
                   {"points", points}});

  Json mle = nullptr;
  if (c.mle_bridges > 0) {
    const auto m = diffusion::mle_theta(spec, obs, c.grid, c.mle_bridges, seed);
    mle = argmax_json(m.best, c.grid);
    mle["log_likelihood"] = json_numbers(m.log_likelihood);
  }
  finish(res, ok,
         {{"model", c.model},
          {"observations", {{"times", json_numbers(obs.times)}, {"values", json_numbers(obs.values)}}},
          {"fixed_bridge_mle", argmax_json(grid_argmax(base.values), c.grid)},
          {"mc_mle", mle}});
  res.curves = {std::move(base), std::move(tilted)};
  return res;
}

namespace {

bayes::Prior make_prior(const PriorSpec& s, std::size_t nodes) {
  if (s.type == "beta") return bayes::Prior::beta(s.a, s.b, nodes);
  if (s.type == "point-mass") return bayes::Prior::point_mass(s.theta);
  return bayes::Prior::uniform(0.0, 1.0, nodes);
}

double closed_marginal(const PriorSpec& s, int n, int x) {
  if (s.type == "point-mass") {
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(x + 1.0) - std::lgamma(n - x + 1.0) +
                    x * std::log(s.theta) + (n - x) * std::log1p(-s.theta));
  }
  if (s.type == "beta") return bayes::beta_binomial_marginal(n, x, s.a, s.b);
  return bayes::beta_binomial_marginal(n, x, 1.0, 1.0);
}

}  // namespace

ExperimentResult run_bayes(const Config& config, std::uint64_t seed) {
  const auto& c = config.bayes;
  auto res = start("bayes", config, seed);
  const double tol = config.tol;
  double marginal_err = 0.0;
  double posterior_err = 0.0;
  double invariance_err = 0.0;
  double predictive_err = 0.0;
  bool dominance_ok = true;
  Json priors = Json::array();
  for (std::size_t pi = 0; pi < c.priors.size(); ++pi) {
    const auto& spec = c.priors[pi];
    const auto prior = make_prior(spec, c.nodes);
    const double a = spec.type == "beta" ? spec.a : 1.0;
    const double b = spec.type == "beta" ? spec.b : 1.0;
    double p_marg = 0.0;
    double p_post = 0.0;
    for (int n = 1; n <= c.n_max; ++n) {
      const auto family = bayes::binomial_family(n, prior.nodes);
      for (int x = 0; x <= n; ++x) {
        const double xd = x;
        p_marg = std::max(p_marg, std::abs(bayes::marginal_m(family, "counting", prior, xd) -
                                           closed_marginal(spec, n, x)));
        const auto post = bayes::posterior(family, "counting", prior, xd);
        const auto post2 = bayes::posterior(family, "counting-x2", prior, xd);
        for (std::size_t k = 0; k < prior.nodes.size(); ++k) {
          const double expected =
              spec.type == "point-mass"
                  ? 1.0
                  : bayes::beta_density(prior.nodes[k][0], xd + a, n - xd + b);
          const double got = spec.type == "point-mass" ? post.density[k] : post.lebesgue_density[k];
          p_post = std::max(p_post, std::abs(got - expected));
          invariance_err = std::max(invariance_err, std::abs(post.density[k] - post2.density[k]));
        }
        const std::vector<bayes::TestSet> sets{std::vector<double>{}, std::vector<double>{xd},
                                               Interval{-kInf, kInf}, Interval{-kInf, n / 2.0}};
        const auto inv =
            bayes::predictive_invariance(family, "counting", "counting-x2", prior, sets, tol);
        predictive_err = std::max(predictive_err, inv.max_difference);
      }
      const auto dom = bayes::dominance_check(family, "counting", prior);
      dominance_ok = dominance_ok && dom.dominated;
      if (pi == 0 && n == c.n_max) {
        const double x = std::floor(n / 2.0);
        res.curves = {likelihood_curve(family, "counting", x, "x"),
                      likelihood_curve(family, "counting-x2", x, "x")};
      }
    }
    marginal_err = std::max(marginal_err, p_marg);
    posterior_err = std::max(posterior_err, p_post);
    priors.push_back({{"label", prior.label},
                      {"max_marginal_error", p_marg},
                      {"max_posterior_error", p_post},
                      {"quadrature_residual", prior.quadrature_residual}});
  }
  bool ok = true;
  ok &= add_check(res.report, "marginal-closed-form", marginal_err <= tol,
                  {{"max_abs_error", marginal_err}});
  ok &= add_check(res.report, "posterior-conjugate", posterior_err <= tol,
                  {{"max_abs_error", posterior_err}});
  ok &= add_check(res.report, "posterior-invariant-across-bases", invariance_err <= tol,
                  {{"max_abs_difference", invariance_err}});
  ok &= add_check(res.report, "predictive-invariant-across-bases", predictive_err <= tol,
                  {{"max_abs_difference", predictive_err}});
  ok &= add_check(res.report, "dominated-by-predictive", dominance_ok);
  finish(res, ok, {{"n_max", c.n_max}, {"nodes", c.nodes}, {"priors", priors}});
  return res;
}

ExperimentResult run_mcem(const Config& config, std::uint64_t seed) {
  const auto& c = config.mcem;
  auto res = start("mcem", config, seed);
  const auto rep = mcem_missing_data(c, seed);
  const auto& a = rep.lebesgue;
  const auto& b = rep.tilted;
  const double se = std::max(a.standard_error, b.standard_error);
  bool ok = true;
  if (c.iterations > 0) {
    ok &= add_check(res.report, "runs-agree", std::abs(rep.difference) <= 2.0 * se,
                    {{"difference", rep.difference}, {"standard_error", se}});
    ok &= add_check(res.report, "lebesgue-near-marginal-mle",
                    std::abs(a.estimate - rep.marginal_mle) <= 3.0 * a.standard_error,
                    {{"estimate", a.estimate}, {"standard_error", a.standard_error}});
    ok &= add_check(res.report, "tilted-near-marginal-mle",
                    std::abs(b.estimate - rep.marginal_mle) <= 3.0 * b.standard_error,
                    {{"estimate", b.estimate}, {"standard_error", b.standard_error}});
    if (c.tilt.type == "identity") {
      ok &= add_check(res.report, "identity-tilt-identical", a.trajectory == b.trajectory);
    } else {
      ok &= add_check(res.report, "samplers-differ", rep.ks_distance > 0.0,
                      {{"ks_distance", rep.ks_distance}});
    }
  } else {
    ok &= add_check(res.report, "zero-iterations-return-init",
                    a.estimate == c.init && b.estimate == c.init);
  }
  const auto run_json = [](const McemRun& r) {
    return Json{{"measure", r.measure_id},
                {"estimate", r.estimate},
                {"standard_error", r.standard_error},
                {"effective_sample_size", r.effective_sample_size},
                {"trajectory", json_numbers(r.trajectory)}};
  };
  finish(res, ok,
         {{"observed", c.observed},
          {"rho", c.rho},
          {"tilt", c.tilt.type},
          {"marginal_mle", rep.marginal_mle},
          {"difference", rep.difference},
          {"ks_distance", rep.ks_distance},
          {"runs", {run_json(a), run_json(b)}}});
  res.curves = rep.complete_data_curves;
  return res;
}

}  // namespace detail

std::string canonical_experiment(const std::string& name) {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), name) != names.end()) return name;
  const std::string suffix = "-proportionality";
  if (name.size() > suffix.size() && name.ends_with(suffix)) {
    const auto stem = name.substr(0, name.size() - suffix.size());
    if (stem != "proportionality" && std::find(names.begin(), names.end(), stem) != names.end()) {
      return stem;
    }
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

ExperimentResult run_experiment(const std::string& name, const Config& config) {
  const auto canonical = canonical_experiment(name);
  const auto& names = experiment_names();
  const auto index =
      static_cast<std::uint64_t>(std::find(names.begin(), names.end(), canonical) - names.begin());
  const std::uint64_t seed = make_stream(config.seed, {0x657870, index})();
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentResult res;
  if (canonical == "proportionality") res = detail::run_proportionality(config, seed);
  else if (canonical == "mixture") res = detail::run_mixture(config, seed);
  else if (canonical == "expfam") res = detail::run_expfam(config, seed);
  else if (canonical == "poisson") res = detail::run_poisson(config, seed);
  else if (canonical == "diffusion") res = detail::run_diffusion(config, seed);
  else if (canonical == "bayes") res = detail::run_bayes(config, seed);
  else res = detail::run_mcem(config, seed);
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace radonlik::harness
