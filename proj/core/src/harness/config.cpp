#include "radonlik/harness/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "radonlik/error.hpp"
#include "radonlik/expfam.hpp"

namespace radonlik::harness {

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"proportionality", "mixture", "expfam", "poisson",
                                              "diffusion", "bayes", "mcem"};
  return names;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config" + (path.empty() ? std::string() : "." + path) + ": " + what);
}

// Wraps a YAML node together with its dotted path for error messages.
class Reader {
 public:
  Reader(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const YAML::Node& node() const { return node_; }

  void expect_map(std::initializer_list<const char*> keys) const {
    if (!node_.IsMap()) fail(path_, "expected a mapping");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) fail(join(key), "unknown key");
    }
  }

  bool has(const char* key) const { return node_.IsMap() && node_[key].IsDefined(); }

  Reader child(const char* key) const { return Reader(node_[key], join(key)); }

  Reader item(std::size_t i) const {
    return Reader(node_[i], path_ + "[" + std::to_string(i) + "]");
  }

  std::size_t size() const {
    if (!node_.IsSequence()) fail(path_, "expected a sequence");
    return node_.size();
  }

  double as_double() const {
    if (!node_.IsScalar()) fail(path_, "expected a number");
    try {
      return node_.as<double>();
    } catch (const YAML::Exception&) {
      fail(path_, "expected a number, got '" + node_.Scalar() + "'");
    }
  }

  long long as_integer() const {
    if (!node_.IsScalar()) fail(path_, "expected an integer");
    try {
      return node_.as<long long>();
    } catch (const YAML::Exception&) {
      fail(path_, "expected an integer, got '" + node_.Scalar() + "'");
    }
  }

  std::string as_string() const {
    if (!node_.IsScalar()) fail(path_, "expected a string");
    return node_.Scalar();
  }

  bool as_bool() const {
    if (!node_.IsScalar()) fail(path_, "expected true or false");
    try {
      return node_.as<bool>();
    } catch (const YAML::Exception&) {
      fail(path_, "expected true or false, got '" + node_.Scalar() + "'");
    }
  }

  std::vector<double> as_doubles() const {
    std::vector<double> out;
    for (std::size_t i = 0, n = size(); i < n; ++i) out.push_back(item(i).as_double());
    return out;
  }

  void get(const char* key, double& out) const {
    if (has(key)) out = child(key).as_double();
  }
  void get(const char* key, bool& out) const {
    if (has(key)) out = child(key).as_bool();
  }
  void get(const char* key, std::string& out) const {
    if (has(key)) out = child(key).as_string();
  }
  void get(const char* key, int& out) const {
    if (has(key)) out = static_cast<int>(child(key).as_integer());
  }
  void get(const char* key, std::size_t& out) const {
    if (!has(key)) return;
    const long long v = child(key).as_integer();
    if (v < 0) fail(join(key), "must be non-negative");
    out = static_cast<std::size_t>(v);
  }
  void positive(const char* key, double value) const {
    if (has(key) && !(value > 0.0)) fail(join(key), "must be positive");
  }
  void positive(const char* key, std::size_t value) const {
    if (has(key) && value == 0) fail(join(key), "must be positive");
  }

 private:
  std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  YAML::Node node_;
  std::string path_;
};

// Runs a library constructor, reporting its precondition failures at `path`.
template <class F>
auto guarded(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

// {lo, hi, n} for a scalar linspace, a list of numbers, or a list of
// coordinate lists.
ThetaGrid read_grid(const Reader& r) {
  if (r.node().IsMap()) {
    r.expect_map({"lo", "hi", "n"});
    for (const char* k : {"lo", "hi", "n"}) {
      if (!r.has(k)) fail(r.path() + "." + k, "missing");
    }
    const double lo = r.child("lo").as_double();
    const double hi = r.child("hi").as_double();
    const long long n = r.child("n").as_integer();
    if (n < 1) fail(r.path() + ".n", "must be at least 1");
    if (n > 1 && !(hi > lo)) fail(r.path(), "needs lo < hi");
    return ThetaGrid::linspace(lo, hi, static_cast<std::size_t>(n));
  }
  const std::size_t n = r.size();
  if (n == 0) fail(r.path(), "grid must not be empty");
  if (r.item(0).node().IsSequence()) {
    std::vector<Theta> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back(r.item(i).as_doubles());
    return guarded(r.path(), [&] { return ThetaGrid(pts); });
  }
  return ThetaGrid::scalar(r.as_doubles());
}

Box read_region(const Reader& r) {
  std::vector<Interval> sides;
  for (std::size_t i = 0, n = r.size(); i < n; ++i) {
    const auto side = r.item(i).as_doubles();
    if (side.size() != 2) fail(r.item(i).path(), "expected [lo, hi]");
    if (!(side[1] > side[0])) fail(r.item(i).path(), "needs lo < hi");
    sides.push_back(Interval{side[0], side[1]});
  }
  return Box{sides};
}

mixture::ContinuousComponent read_component(const Reader& r, double& weight) {
  if (!r.has("name")) fail(r.path() + ".name", "missing");
  if (!r.has("weight")) fail(r.path() + ".weight", "missing");
  const std::string name = r.child("name").as_string();
  weight = r.child("weight").as_double();
  if (name == "exponential") {
    r.expect_map({"name", "weight", "rate"});
    double rate = 1.0;
    r.get("rate", rate);
    return guarded(r.path(), [&] { return mixture::exponential(rate); });
  }
  if (name == "uniform") {
    r.expect_map({"name", "weight", "lo", "hi"});
    double lo = 0.0;
    double hi = 1.0;
    r.get("lo", lo);
    r.get("hi", hi);
    return guarded(r.path(), [&] { return mixture::uniform(lo, hi); });
  }
  if (name == "gaussian-truncated") {
    r.expect_map({"name", "weight", "mean", "sd", "lo", "hi"});
    double mean = 0.0;
    double sd = 1.0;
    double lo = -1.0;
    double hi = 1.0;
    r.get("mean", mean);
    r.get("sd", sd);
    r.get("lo", lo);
    r.get("hi", hi);
    return guarded(r.path(), [&] { return mixture::truncated_gaussian(mean, sd, lo, hi); });
  }
  fail(r.path() + ".name",
       "unknown component '" + name + "' (expected exponential, uniform, gaussian-truncated)");
}

void read_proportionality(const Reader& r, ProportionalityConfig& c) {
  r.expect_map({"instances", "dominance_families", "max_atoms", "max_members",
                "dominating_measures_per_family", "include_diffusion", "bridge_step",
                "limit_j_min", "limit_j_max", "limit_error"});
  r.get("instances", c.instances);
  r.get("dominance_families", c.dominance_families);
  r.get("max_atoms", c.max_atoms);
  r.get("max_members", c.max_members);
  r.get("dominating_measures_per_family", c.dominating_measures_per_family);
  r.get("include_diffusion", c.include_diffusion);
  r.get("bridge_step", c.bridge_step);
  r.get("limit_j_min", c.limit_j_min);
  r.get("limit_j_max", c.limit_j_max);
  r.get("limit_error", c.limit_error);
  r.positive("instances", c.instances);
  r.positive("bridge_step", c.bridge_step);
  if (c.max_atoms < 1) fail(r.path() + ".max_atoms", "must be at least 1");
  if (c.max_members < 1) fail(r.path() + ".max_members", "must be at least 1");
  if (c.limit_j_min < 0 || c.limit_j_max <= c.limit_j_min) {
    fail(r.path() + ".limit_j_max", "needs 0 <= limit_j_min < limit_j_max");
  }
}

void read_mixture(const Reader& r, MixtureConfig& c) {
  r.expect_map({"atoms", "components", "samples", "grid", "mle_tolerance"});
  std::vector<mixture::Atom> atoms = c.base.atoms();
  std::vector<mixture::WeightedComponent> comps = c.base.components();
  if (r.has("atoms")) {
    const auto a = r.child("atoms");
    atoms.clear();
    for (std::size_t i = 0, n = a.size(); i < n; ++i) {
      const auto it = a.item(i);
      it.expect_map({"location", "mass"});
      if (!it.has("location") || !it.has("mass")) fail(it.path(), "needs location and mass");
      atoms.push_back({it.child("location").as_double(), it.child("mass").as_double()});
    }
  }
  if (r.has("components")) {
    const auto cs = r.child("components");
    comps.clear();
    for (std::size_t i = 0, n = cs.size(); i < n; ++i) {
      if (!cs.item(i).node().IsMap()) fail(cs.item(i).path(), "expected a mapping");
      double w = 0.0;
      auto comp = read_component(cs.item(i), w);
      comps.push_back({w, std::move(comp)});
    }
  }
  c.base = guarded(r.path(), [&] { return mixture::PointMassMixture(atoms, comps); });
  r.get("samples", c.samples);
  r.positive("samples", c.samples);
  if (r.has("grid")) c.grid = read_grid(r.child("grid"));
  for (const auto& t : c.grid.points()) {
    if (t.size() != 1 || !(t[0] > 0.0 && t[0] < 1.0)) {
      fail(r.path() + ".grid", "atom mass grid must lie in (0, 1)");
    }
  }
  r.get("mle_tolerance", c.mle_tolerance);
}

void read_expfam(const Reader& r, ExpfamConfig& c) {
  r.expect_map({"family", "grid", "sample", "atom_cap"});
  r.get("family", c.family);
  guarded(r.path() + ".family", [&] { return expfam::from_catalog(c.family); });
  if (r.has("grid")) c.grid = read_grid(r.child("grid"));
  if (r.has("sample")) c.sample = r.child("sample").as_doubles();
  if (c.sample.empty()) fail(r.path() + ".sample", "must not be empty");
  r.get("atom_cap", c.atom_cap);
  if (c.atom_cap < 1) fail(r.path() + ".atom_cap", "must be at least 1");
}

void read_poisson(const Reader& r, PoissonConfig& c) {
  r.expect_map({"intensity", "region", "grid", "patterns", "simulated_patterns",
                "simulate_theta", "identity_tol"});
  r.get("intensity", c.intensity);
  if (c.intensity != "constant" && c.intensity != "log-linear" && c.intensity != "sinusoidal") {
    fail(r.path() + ".intensity",
         "unknown intensity '" + c.intensity + "' (expected constant, log-linear, sinusoidal)");
  }
  if (r.has("region")) {
    c.region = read_region(r.child("region"));
    if (!r.has("patterns")) c.patterns.clear();
  }
  if (r.has("grid")) c.grid = read_grid(r.child("grid"));
  guarded(r.path(), [&] { return poisson::intensity_from_catalog(c.intensity, c.region, c.grid); });
  if (r.has("patterns")) {
    const auto ps = r.child("patterns");
    c.patterns.clear();
    for (std::size_t i = 0, n = ps.size(); i < n; ++i) {
      poisson::PointPattern p{c.region, {}};
      const auto pts = ps.item(i);
      for (std::size_t k = 0, m = pts.size(); k < m; ++k) {
        const auto& node = pts.item(k);
        p.points.push_back(node.node().IsSequence() ? node.as_doubles()
                                                    : std::vector<double>{node.as_double()});
      }
      guarded(pts.path(), [&] {
        p.validate();
        return 0;
      });
      c.patterns.push_back(std::move(p));
    }
  }
  r.get("simulated_patterns", c.simulated_patterns);
  if (r.has("simulate_theta")) {
    const auto t = r.child("simulate_theta");
    c.simulate_theta = t.node().IsSequence() ? t.as_doubles() : Theta{t.as_double()};
  } else if (c.intensity != "constant") {
    c.simulate_theta = c.grid[c.grid.size() / 2];
  }
  if (c.simulate_theta.size() != c.grid[0].size()) {
    fail(r.path() + ".simulate_theta", "dimension does not match the grid");
  }
  r.get("identity_tol", c.identity_tol);
  r.positive("identity_tol", c.identity_tol);
}

void read_diffusion(const Reader& r, DiffusionConfig& c) {
  r.expect_map({"model", "grid", "theta_true", "observations", "dt", "y0", "bridge_step",
                "mle_bridges", "oracle"});
  r.get("model", c.model);
  if (c.model != "ou" && c.model != "brownian-drift" && c.model != "logistic") {
    fail(r.path() + ".model",
         "unknown model '" + c.model + "' (expected ou, brownian-drift, logistic)");
  }
  if (r.has("grid")) c.grid = read_grid(r.child("grid"));
  r.get("theta_true", c.theta_true);
  r.get("observations", c.observations);
  r.get("dt", c.dt);
  r.get("y0", c.y0);
  r.get("bridge_step", c.bridge_step);
  r.get("mle_bridges", c.mle_bridges);
  if (c.observations < 2) fail(r.path() + ".observations", "must be at least 2");
  r.positive("dt", c.dt);
  r.positive("bridge_step", c.bridge_step);
  if (c.model == "logistic" && !(c.y0 > 0.0)) fail(r.path() + ".y0", "must be positive");
  if (r.has("oracle")) {
    const auto o = r.child("oracle");
    auto& oc = c.oracle;
    o.expect_map({"theta", "t", "mc_size", "step", "points", "max_standard_errors",
                  "max_relative_error"});
    o.get("theta", oc.theta);
    o.get("t", oc.t);
    o.get("mc_size", oc.mc_size);
    o.get("step", oc.step);
    o.get("max_standard_errors", oc.max_standard_errors);
    o.get("max_relative_error", oc.max_relative_error);
    o.positive("theta", oc.theta);
    o.positive("t", oc.t);
    o.positive("step", oc.step);
    if (oc.mc_size < 100) fail(o.path() + ".mc_size", "must be at least 100");
    if (o.has("points")) {
      const auto ps = o.child("points");
      oc.points.clear();
      for (std::size_t i = 0, n = ps.size(); i < n; ++i) {
        const auto xy = ps.item(i).as_doubles();
        if (xy.size() != 2) fail(ps.item(i).path(), "expected [x0, x1]");
        oc.points.emplace_back(xy[0], xy[1]);
      }
    }
  }
}

void read_bayes(const Reader& r, BayesConfig& c) {
  r.expect_map({"n_max", "priors", "nodes"});
  r.get("n_max", c.n_max);
  if (c.n_max < 1) fail(r.path() + ".n_max", "must be at least 1");
  r.get("nodes", c.nodes);
  if (c.nodes < 2) fail(r.path() + ".nodes", "must be at least 2");
  if (r.has("priors")) {
    const auto ps = r.child("priors");
    c.priors.clear();
    for (std::size_t i = 0, n = ps.size(); i < n; ++i) {
      const auto p = ps.item(i);
      PriorSpec spec;
      p.expect_map({"type", "a", "b", "theta"});
      p.get("type", spec.type);
      if (spec.type == "beta") {
        p.get("a", spec.a);
        p.get("b", spec.b);
        if (!(spec.a > 0.0) || !(spec.b > 0.0)) fail(p.path(), "beta prior needs a, b > 0");
      } else if (spec.type == "point-mass") {
        p.get("theta", spec.theta);
        if (!(spec.theta > 0.0 && spec.theta < 1.0)) fail(p.path() + ".theta", "must lie in (0, 1)");
      } else if (spec.type != "uniform") {
        fail(p.path() + ".type",
             "unknown prior '" + spec.type + "' (expected uniform, beta, point-mass)");
      }
      c.priors.push_back(spec);
    }
    if (c.priors.empty()) fail(ps.path(), "must not be empty");
  }
}

void read_mcem(const Reader& r, McemConfig& c) {
  r.expect_map({"observed", "rho", "iterations", "mc_size", "init", "search_radius", "tilt"});
  r.get("observed", c.observed);
  r.get("rho", c.rho);
  r.get("iterations", c.iterations);
  r.get("mc_size", c.mc_size);
  r.get("init", c.init);
  r.get("search_radius", c.search_radius);
  if (!(c.rho > -1.0 && c.rho < 1.0)) fail(r.path() + ".rho", "must lie in (-1, 1)");
  if (c.mc_size < 10) fail(r.path() + ".mc_size", "must be at least 10");
  r.positive("search_radius", c.search_radius);
  if (r.has("tilt")) {
    const auto t = r.child("tilt");
    t.expect_map({"type", "scale"});
    t.get("type", c.tilt.type);
    t.get("scale", c.tilt.scale);
    if (c.tilt.type != "gaussian" && c.tilt.type != "identity") {
      fail(t.path() + ".type", "unknown tilt '" + c.tilt.type + "' (expected gaussian, identity)");
    }
    t.positive("scale", c.tilt.scale);
  }
}

}  // namespace

Config parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: YAML syntax error: ") + e.what());
  }
  Config c;
  if (root.IsNull()) return c;
  const Reader r(root, "");
  r.expect_map({"seed", "tol", "threads", "output_dir", "proportionality", "mixture", "expfam",
                "poisson", "diffusion", "bayes", "mcem"});
  if (r.has("seed")) {
    const long long v = r.child("seed").as_integer();
    if (v < 0) fail("seed", "must be non-negative");
    c.seed = static_cast<std::uint64_t>(v);
  }
  r.get("tol", c.tol);
  r.positive("tol", c.tol);
  r.get("threads", c.threads);
  if (r.has("output_dir")) c.output_dir = r.child("output_dir").as_string();
  if (r.has("proportionality")) read_proportionality(r.child("proportionality"), c.proportionality);
  if (r.has("mixture")) read_mixture(r.child("mixture"), c.mixture);
  if (r.has("expfam")) read_expfam(r.child("expfam"), c.expfam);
  if (r.has("poisson")) read_poisson(r.child("poisson"), c.poisson);
  if (r.has("diffusion")) read_diffusion(r.child("diffusion"), c.diffusion);
  if (r.has("bayes")) read_bayes(r.child("bayes"), c.bayes);
  if (r.has("mcem")) read_mcem(r.child("mcem"), c.mcem);
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace radonlik::harness
