#include "radonlik/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "radonlik/parallel.hpp"

namespace radonlik::diffusion {

namespace {

constexpr std::size_t kChunk = 1024;
constexpr double kInverseTol = 1e-12;
constexpr double kAlphaStep = 1e-5;

bool in_state_space(const SDESpec& spec, double y) {
  return y > spec.state_space.lo && y < spec.state_space.hi;
}

double sigma_checked(const SDESpec& spec, double u, const Theta& theta) {
  const double s = spec.diffusion(u, theta);
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw NumericalError("diffusion coefficient of '" + spec.name +
                         "' is not positive at u = " + std::to_string(u));
  }
  return s;
}

}  // namespace

SDESpec ornstein_uhlenbeck() {
  SDESpec s;
  s.name = "ou";
  s.drift = [](double y, const Theta& t) { return -t[0] * y; };
  s.diffusion = [](double, const Theta&) { return 1.0; };
  s.diffusion_derivative = [](double, const Theta&) { return 0.0; };
  s.state_space = Interval{kNegInf, kInf};
  s.base_point = 0.0;
  s.lamperti = [](double y, const Theta&) { return y; };
  s.lamperti_inverse = [](double x, const Theta&) { return x; };
  s.alpha = [](double x, const Theta& t) { return -t[0] * x; };
  s.alpha_derivative = [](double, const Theta& t) { return -t[0]; };
  s.alpha_potential = [](double u, const Theta& t) { return -0.5 * t[0] * u * u; };
  return s;
}

SDESpec brownian_with_drift() {
  SDESpec s;
  s.name = "brownian-drift";
  s.drift = [](double, const Theta& t) { return t[0]; };
  s.diffusion = [](double, const Theta&) { return 1.0; };
  s.diffusion_derivative = [](double, const Theta&) { return 0.0; };
  s.state_space = Interval{kNegInf, kInf};
  s.base_point = 0.0;
  s.lamperti = [](double y, const Theta&) { return y; };
  s.lamperti_inverse = [](double x, const Theta&) { return x; };
  s.alpha = [](double, const Theta& t) { return t[0]; };
  s.alpha_derivative = [](double, const Theta&) { return 0.0; };
  s.alpha_potential = [](double u, const Theta& t) { return t[0] * u; };
  return s;
}

SDESpec logistic_geometric() {
  SDESpec s;
  s.name = "logistic";
  s.drift = [](double y, const Theta& t) { return t[0] * y * (1.0 - y); };
  s.diffusion = [](double y, const Theta&) { return y; };
  s.diffusion_derivative = [](double, const Theta&) { return 1.0; };
  s.state_space = Interval{0.0, kInf};
  s.base_point = 1.0;
  s.lamperti = [](double y, const Theta&) { return std::log(y); };
  s.lamperti_inverse = [](double x, const Theta&) { return std::exp(x); };
  s.alpha = [](double x, const Theta& t) { return -t[0] * std::expm1(x) - 0.5; };
  s.alpha_derivative = [](double x, const Theta& t) { return -t[0] * std::exp(x); };
  s.alpha_potential = [](double u, const Theta& t) {
    return -t[0] * (std::expm1(u) - u) - 0.5 * u;
  };
  return s;
}

SDESpec from_catalog(const std::string& name) {
  if (name == "ou") return ornstein_uhlenbeck();
  if (name == "brownian-drift") return brownian_with_drift();
  if (name == "logistic") return logistic_geometric();
  throw PreconditionError("unknown SDE '" + name + "'");
}

SDESpec without_closed_forms(SDESpec spec) {
  spec.lamperti = nullptr;
  spec.lamperti_inverse = nullptr;
  spec.alpha = nullptr;
  spec.alpha_derivative = nullptr;
  spec.alpha_potential = nullptr;
  return spec;
}

double derivative_mismatch(const SDESpec& spec, const Theta& theta,
                           std::span<const double> y_points) {
  double worst = 0.0;
  for (double y : y_points) {
    const double h = 1e-6 * std::max(1.0, std::abs(y));
    const double fd = (spec.diffusion(y + h, theta) - spec.diffusion(y - h, theta)) / (2.0 * h);
    const double sd = spec.diffusion_derivative(y, theta);
    worst = std::max(worst, std::abs(fd - sd) / std::max(1.0, std::abs(sd)));
    if (spec.alpha && spec.alpha_derivative && spec.lamperti) {
      const double x = lamperti(spec, y, theta);
      const double hx = 1e-6 * std::max(1.0, std::abs(x));
      const double afd = (spec.alpha(x + hx, theta) - spec.alpha(x - hx, theta)) / (2.0 * hx);
      const double ad = spec.alpha_derivative(x, theta);
      worst = std::max(worst, std::abs(afd - ad) / std::max(1.0, std::abs(ad)));
    }
  }
  return worst;
}

double lamperti(const SDESpec& spec, double y, const Theta& theta) {
  if (!in_state_space(spec, y)) {
    throw DomainError("y = " + std::to_string(y) + " outside the state space of '" + spec.name +
                      "'");
  }
  if (spec.lamperti) return spec.lamperti(y, theta);
  const double b = spec.base_point;
  if (y == b) return 0.0;
  const double lo = std::min(b, y);
  const double hi = std::max(b, y);
  const double v =
      integrate([&](double u) { return 1.0 / sigma_checked(spec, u, theta); }, lo, hi, 1e-10);
  return y > b ? v : -v;
}

double lamperti_derivative(const SDESpec& spec, double y, const Theta& theta) {
  if (!in_state_space(spec, y)) {
    throw DomainError("y = " + std::to_string(y) + " outside the state space of '" + spec.name +
                      "'");
  }
  return 1.0 / sigma_checked(spec, y, theta);
}

double lamperti_inverse(const SDESpec& spec, double x, const Theta& theta) {
  if (spec.lamperti_inverse) return spec.lamperti_inverse(x, theta);
  const double b = spec.base_point;
  if (x == 0.0) return b;
  const bool up = x > 0.0;
  const double edge = up ? spec.state_space.hi : spec.state_space.lo;
  const double scale = std::max(1.0, std::abs(b));
  double inner = b;
  double outer = b;
  bool bracketed = false;
  for (int k = 1; k <= 200; ++k) {
    const double candidate = std::isfinite(edge)
                                 ? edge + (b - edge) * std::ldexp(1.0, -k)
                                 : b + (up ? 1.0 : -1.0) * scale * std::ldexp(1.0, k - 1);
    if (!in_state_space(spec, candidate) || candidate == outer) break;
    const double eta = lamperti(spec, candidate, theta);
    if (up ? eta >= x : eta <= x) {
      outer = candidate;
      bracketed = true;
      break;
    }
    inner = candidate;
    outer = candidate;
  }
  if (!bracketed) {
    throw NumericalError("no bracket for the inverse Lamperti transform at x = " +
                         std::to_string(x));
  }
  double lo = std::min(inner, outer);
  double hi = std::max(inner, outer);
  while (hi - lo > kInverseTol * std::max(1.0, std::abs(lo))) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (lamperti(spec, mid, theta) < x) ? lo = mid : hi = mid;
  }
  return 0.5 * (lo + hi);
}

double unit_drift_alpha(const SDESpec& spec, double x, const Theta& theta) {
  if (spec.alpha) return spec.alpha(x, theta);
  const double u = lamperti_inverse(spec, x, theta);
  const double s = sigma_checked(spec, u, theta);
  return spec.drift(u, theta) / s - 0.5 * spec.diffusion_derivative(u, theta);
}

double unit_drift_alpha_derivative(const SDESpec& spec, double x, const Theta& theta) {
  if (spec.alpha_derivative) return spec.alpha_derivative(x, theta);
  return (unit_drift_alpha(spec, x + kAlphaStep, theta) -
          unit_drift_alpha(spec, x - kAlphaStep, theta)) /
         (2.0 * kAlphaStep);
}

double drift_potential(const SDESpec& spec, double u, const Theta& theta) {
  if (spec.alpha_potential) return spec.alpha_potential(u, theta);
  if (u == 0.0) return 0.0;
  const double v = integrate([&](double z) { return unit_drift_alpha(spec, z, theta); },
                             std::min(0.0, u), std::max(0.0, u), 1e-10);
  return u > 0.0 ? v : -v;
}

double path_integrand(const SDESpec& spec, double x, const Theta& theta) {
  const double a = unit_drift_alpha(spec, x, theta);
  return 0.5 * (a * a + unit_drift_alpha_derivative(spec, x, theta));
}

void ObservationSet::validate() const {
  if (times.size() != values.size()) {
    throw PreconditionError("observation times and values differ in length");
  }
  if (times.size() < 2) throw PreconditionError("need at least two observations");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw PreconditionError("observation times must be strictly increasing");
    }
  }
}

std::vector<double> bridge_from_path(std::span<const double> path, double x_start,
                                     double x_end) {
  if (path.size() < 2) throw PreconditionError("path segment needs at least two grid points");
  const double k = static_cast<double>(path.size() - 1);
  std::vector<double> out(path.size());
  for (std::size_t j = 0; j < path.size(); ++j) {
    const double f = static_cast<double>(j) / k;
    out[j] = path[j] - (1.0 - f) * x_start - f * x_end;
  }
  return out;
}

std::vector<double> path_from_bridge(std::span<const double> bridge, double x_start,
                                     double x_end) {
  if (bridge.size() < 2) throw PreconditionError("bridge segment needs at least two grid points");
  const double k = static_cast<double>(bridge.size() - 1);
  std::vector<double> out(bridge.size());
  for (std::size_t j = 0; j < bridge.size(); ++j) {
    const double f = static_cast<double>(j) / k;
    out[j] = bridge[j] + (1.0 - f) * x_start + f * x_end;
  }
  return out;
}

double bridge_path_integral(const SDESpec& spec, const Theta& theta,
                            std::span<const double> bridge, double x_start, double x_end,
                            double step) {
  if (bridge.size() < 2) throw PreconditionError("bridge segment needs at least two grid points");
  const double k = static_cast<double>(bridge.size() - 1);
  double sum = 0.0;
  for (std::size_t j = 0; j < bridge.size(); ++j) {
    const double f = static_cast<double>(j) / k;
    const double g = path_integrand(spec, bridge[j] + (1.0 - f) * x_start + f * x_end, theta);
    sum += (j == 0 || j + 1 == bridge.size()) ? 0.5 * g : g;
  }
  return sum * step;
}

namespace {

void check_coverage(const ObservationSet& obs, const BridgeSet& bridges) {
  obs.validate();
  if (bridges.segments.size() != obs.intervals()) {
    throw PreconditionError("missing bridge segment: " + std::to_string(bridges.segments.size()) +
                            " segments for " + std::to_string(obs.intervals()) + " intervals");
  }
  for (std::size_t i = 0; i < obs.intervals(); ++i) {
    const auto& seg = bridges.segments[i];
    if (seg.values.size() < 2 || seg.t0 != obs.times[i] || seg.t1 != obs.times[i + 1]) {
      throw PreconditionError("bridge segment " + std::to_string(i) +
                              " does not cover its observation interval");
    }
  }
}

// Shared body of the Gaussian-bridge kernels; `standardized` selects the
// printed standard-normal form, otherwise the N(0, dt) increment density.
double joint_log_density(const SDESpec& spec, const ObservationSet& obs, const BridgeSet& bridges,
                         const Theta& theta, bool standardized) {
  check_coverage(obs, bridges);
  std::vector<double> x(obs.values.size());
  double ll = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = lamperti(spec, obs.values[i], theta);
    ll += std::log(lamperti_derivative(spec, obs.values[i], theta));
  }
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double dt = obs.times[i] - obs.times[i - 1];
    const double dx = x[i] - x[i - 1];
    ll += standardized ? normal_log_pdf(dx / std::sqrt(dt), 0.0, 1.0)
                       : normal_log_pdf(dx, 0.0, dt);
  }
  ll += drift_potential(spec, x.back(), theta) - drift_potential(spec, x.front(), theta);
  for (std::size_t i = 0; i < obs.intervals(); ++i) {
    const auto& seg = bridges.segments[i];
    ll -= bridge_path_integral(spec, theta, seg.values, x[i], x[i + 1], seg.step());
  }
  return ll;
}

std::size_t steps_for(double length, double step) {
  if (!(step > 0.0)) throw PreconditionError("bridge step must be positive");
  const double k = std::round(length / step);
  return static_cast<std::size_t>(std::max(1.0, k));
}

void fill_bridge(std::vector<double>& out, std::size_t k, double step, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(step));
  out.resize(k + 1);
  out[0] = 0.0;
  for (std::size_t j = 1; j <= k; ++j) out[j] = out[j - 1] + normal(rng);
  const double end = out[k];
  const double kd = static_cast<double>(k);
  for (std::size_t j = 1; j < k; ++j) out[j] -= (static_cast<double>(j) / kd) * end;
  out[k] = 0.0;
}

}  // namespace

double gt1_log_density(const SDESpec& spec, const ObservationSet& obs, const BridgeSet& bridges,
                       const Theta& theta) {
  return joint_log_density(spec, obs, bridges, theta, true);
}

std::vector<double> sample_brownian_bridge(double length, double step, Rng& rng) {
  if (!(length > 0.0)) throw PreconditionError("bridge length must be positive");
  const std::size_t k = steps_for(length, step);
  if (std::abs(static_cast<double>(k) * step - length) > 1e-12 * std::max(1.0, length)) {
    throw PreconditionError("bridge step must divide the interval length");
  }
  std::vector<double> out;
  fill_bridge(out, k, step, rng);
  return out;
}

std::vector<double> sample_brownian_bridge(double length, double step, std::uint64_t seed) {
  Rng rng = make_stream(seed, {0x6262});
  return sample_brownian_bridge(length, step, rng);
}

BridgeSet sample_bridges(const ObservationSet& obs, double step, std::uint64_t seed) {
  obs.validate();
  BridgeSet set;
  set.segments.resize(obs.intervals());
  parallel_for(obs.intervals(), [&](std::size_t i) {
    auto& seg = set.segments[i];
    seg.t0 = obs.times[i];
    seg.t1 = obs.times[i + 1];
    const std::size_t k = steps_for(seg.t1 - seg.t0, step);
    Rng rng = make_stream(seed, {0x6273, i});
    fill_bridge(seg.values, k, (seg.t1 - seg.t0) / static_cast<double>(k), rng);
  });
  return set;
}

McEstimate transition_density_mc(const SDESpec& spec, const Theta& theta, double t, double x0,
                                 double x1, std::size_t replicates, double step,
                                 std::uint64_t seed) {
  if (replicates < 100) throw PreconditionError("transition_density_mc needs at least 100 replicates");
  if (!(t > 0.0)) throw PreconditionError("transition time must be positive");
  const std::size_t k = steps_for(t, step);
  const double h = t / static_cast<double>(k);
  const double log_gauss = normal_log_pdf(x1, x0, t);
  const double potential = drift_potential(spec, x1, theta) - drift_potential(spec, x0, theta);

  const std::size_t chunks = (replicates + kChunk - 1) / kChunk;
  std::vector<double> sums(chunks, 0.0);
  std::vector<double> squares(chunks, 0.0);
  parallel_for(chunks, [&](std::size_t c) {
    Rng rng = make_stream(seed, {0x746d63, c});
    std::vector<double> bridge;
    const std::size_t first = c * kChunk;
    const std::size_t last = std::min(replicates, first + kChunk);
    double s = 0.0;
    double q = 0.0;
    for (std::size_t m = first; m < last; ++m) {
      fill_bridge(bridge, k, h, rng);
      const double w =
          std::exp(log_gauss + potential - bridge_path_integral(spec, theta, bridge, x0, x1, h));
      s += w;
      q += w * w;
    }
    sums[c] = s;
    squares[c] = q;
  });
  double s = 0.0;
  double q = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    s += sums[c];
    q += squares[c];
  }
  const double m = static_cast<double>(replicates);
  const double mean = s / m;
  const double var = std::max(0.0, (q - m * mean * mean) / (m - 1.0));
  return McEstimate{mean, std::sqrt(var / m)};
}

ThetaMle mle_theta(const SDESpec& spec, const ObservationSet& obs, const ThetaGrid& grid,
                   std::size_t bridges_per_interval, std::uint64_t seed, double step) {
  obs.validate();
  if (grid.empty()) throw PreconditionError("mle_theta needs a non-empty grid");
  if (bridges_per_interval == 0) throw PreconditionError("mle_theta needs at least one bridge");
  if (step <= 0.0) {
    double shortest = kInf;
    for (std::size_t i = 1; i < obs.times.size(); ++i) {
      shortest = std::min(shortest, obs.times[i] - obs.times[i - 1]);
    }
    step = 1e-3 * shortest;
  }
  const std::size_t n = obs.intervals();
  const std::size_t g = grid.size();
  // terms[i * g + j]: log of eta'(y_{i+1}) * p_X estimate for interval i at grid[j].
  std::vector<double> terms(n * g, 0.0);
  parallel_for(n, [&](std::size_t i) {
    const double dt = obs.times[i + 1] - obs.times[i];
    const std::size_t k = steps_for(dt, step);
    const double h = dt / static_cast<double>(k);
    Rng rng = make_stream(seed, {0x6d6c65, i});
    std::vector<std::vector<double>> bridges(bridges_per_interval);
    for (auto& b : bridges) fill_bridge(b, k, h, rng);
    for (std::size_t j = 0; j < g; ++j) {
      const Theta& theta = grid[j];
      const double x0 = lamperti(spec, obs.values[i], theta);
      const double x1 = lamperti(spec, obs.values[i + 1], theta);
      const double base = normal_log_pdf(x1, x0, dt) + drift_potential(spec, x1, theta) -
                          drift_potential(spec, x0, theta);
      std::vector<double> logs(bridges.size());
      for (std::size_t m = 0; m < bridges.size(); ++m) {
        logs[m] = base - bridge_path_integral(spec, theta, bridges[m], x0, x1, h);
      }
      terms[i * g + j] = log_sum_exp(logs) - std::log(static_cast<double>(bridges.size())) +
                         std::log(lamperti_derivative(spec, obs.values[i + 1], theta));
    }
  });
  ThetaMle out;
  out.log_likelihood.assign(g, 0.0);
  for (std::size_t j = 0; j < g; ++j) {
    for (std::size_t i = 0; i < n; ++i) out.log_likelihood[j] += terms[i * g + j];
  }
  out.best = grid_argmax(out.log_likelihood);
  return out;
}

double ou_transition_log_density(double theta, double t, double x0, double x1) {
  if (theta == 0.0) return normal_log_pdf(x1, x0, t);
  const double mean = x0 * std::exp(-theta * t);
  const double var = -std::expm1(-2.0 * theta * t) / (2.0 * theta);
  return normal_log_pdf(x1, mean, var);
}

ObservationSet simulate_ou(double theta, std::span<const double> times, double y0,
                           std::uint64_t seed) {
  ObservationSet obs;
  obs.times.assign(times.begin(), times.end());
  obs.values.resize(times.size());
  if (times.empty()) return obs;
  Rng rng = make_stream(seed, {0x6f75});
  std::normal_distribution<double> normal(0.0, 1.0);
  obs.values[0] = y0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double dt = times[i] - times[i - 1];
    const double var = theta == 0.0 ? dt : -std::expm1(-2.0 * theta * dt) / (2.0 * theta);
    obs.values[i] = obs.values[i - 1] * std::exp(-theta * dt) + std::sqrt(var) * normal(rng);
  }
  obs.validate();
  return obs;
}

ObservationSet simulate_lamperti_euler(const SDESpec& spec, const Theta& theta,
                                       std::span<const double> times, double y0, double step,
                                       std::uint64_t seed) {
  if (!(step > 0.0)) throw PreconditionError("Euler step must be positive");
  ObservationSet obs;
  obs.times.assign(times.begin(), times.end());
  obs.values.resize(times.size());
  if (times.empty()) return obs;
  Rng rng = make_stream(seed, {0x65756c});
  std::normal_distribution<double> normal(0.0, 1.0);
  obs.values[0] = y0;
  double x = lamperti(spec, y0, theta);
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double dt = times[i] - times[i - 1];
    if (!(dt > 0.0)) throw PreconditionError("observation times must be strictly increasing");
    const auto steps = static_cast<std::size_t>(std::ceil(dt / step));
    const double h = dt / static_cast<double>(steps);
    const double root_h = std::sqrt(h);
    for (std::size_t k = 0; k < steps; ++k) {
      x += unit_drift_alpha(spec, x, theta) * h + root_h * normal(rng);
    }
    obs.values[i] = lamperti_inverse(spec, x, theta);
  }
  obs.validate();
  return obs;
}

ObservationSet read_observations_csv(std::istream& in) {
  ObservationSet obs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1 && line == "t,y") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw PreconditionError("observation CSV line " + std::to_string(lineno) + ": expected t,y");
    }
    try {
      std::size_t used_t = 0;
      std::size_t used_y = 0;
      const std::string ts = line.substr(0, comma);
      const std::string ys = line.substr(comma + 1);
      const double t = std::stod(ts, &used_t);
      const double y = std::stod(ys, &used_y);
      if (used_t != ts.size() || used_y != ys.size()) throw std::invalid_argument("trailing");
      obs.times.push_back(t);
      obs.values.push_back(y);
    } catch (const std::logic_error&) {
      throw PreconditionError("observation CSV line " + std::to_string(lineno) +
                              ": not a number pair");
    }
  }
  obs.validate();
  return obs;
}

void write_observations_csv(std::ostream& out, const ObservationSet& obs) {
  std::ostringstream buf;
  buf.precision(17);
  buf << "t,y\n";
  for (std::size_t i = 0; i < obs.times.size(); ++i) {
    buf << obs.times[i] << ',' << obs.values[i] << '\n';
  }
  out << buf.str();
}

double bridge_tilt_log_weight(const BridgeSet& bridges) {
  double lw = 0.0;
  std::vector<double> sq;
  for (const auto& seg : bridges.segments) {
    sq.resize(seg.values.size());
    for (std::size_t j = 0; j < sq.size(); ++j) sq[j] = seg.values[j] * seg.values[j];
    lw -= 0.5 * trapezoid(sq, seg.step());
  }
  return lw;
}

ModelFamily<PathData> to_model_family(const SDESpec& spec, const ThetaGrid& grid,
                                      std::vector<double> times) {
  SampleSpace<PathData> space;
  space.description = "paths of '" + spec.name + "' observed at fixed times, with bridges";
  space.contains = [spec, times](const PathData& d) {
    if (d.obs.times != times || d.bridges.segments.size() + 1 != times.size()) return false;
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
      const auto& seg = d.bridges.segments[i];
      if (seg.t0 != times[i] || seg.t1 != times[i + 1] || seg.values.size() < 2) return false;
    }
    return std::all_of(d.obs.values.begin(), d.obs.values.end(),
                       [&](double y) { return in_state_space(spec, y); });
  };
  ModelFamily<PathData> family(grid, std::move(space));
  family.register_kernel(
      DominatingMeasure(kBridgeMeasureId, GaussianBridgeProductKind{times}),
      [spec](const Theta& t, const PathData& d) {
        return gt1_log_density(spec, d.obs, d.bridges, t);
      });
  family.register_kernel(
      DominatingMeasure(kTiltedBridgeMeasureId, GaussianBridgeProductKind{times}),
      [spec](const Theta& t, const PathData& d) {
        return gt1_log_density(spec, d.obs, d.bridges, t) - bridge_tilt_log_weight(d.bridges);
      });
  family.register_kernel(
      DominatingMeasure(kUnstandardizedMeasureId, GaussianBridgeProductKind{times}),
      [spec](const Theta& t, const PathData& d) {
        return joint_log_density(spec, d.obs, d.bridges, t, false);
      });
  return family;
}

}  // namespace radonlik::diffusion
