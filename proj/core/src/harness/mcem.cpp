#include "radonlik/harness/mcem.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "radonlik/error.hpp"
#include "radonlik/numeric.hpp"
#include "radonlik/random.hpp"

namespace radonlik::harness {

double MissingDataModel::log_joint_lebesgue(double theta, double w1, double w2) const {
  const double a = w1 - theta;
  const double b = w2 - theta;
  const double det = 1.0 - rho * rho;
  return -std::log(2.0 * std::numbers::pi) - 0.5 * std::log(det) -
         (a * a - 2.0 * rho * a * b + b * b) / (2.0 * det);
}

double MissingDataModel::log_tilt(double w1, double w2) const {
  if (tilt.type == "identity") return 0.0;
  const double var = tilt.scale * tilt.scale;
  return normal_log_pdf(w1, 0.0, var) + normal_log_pdf(w2, 0.0, var);
}

double MissingDataModel::log_joint_tilted(double theta, double w1, double w2) const {
  return log_joint_lebesgue(theta, w1, w2) - log_tilt(w1, w2);
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) return 0.0;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

namespace {

double ess(std::span<const double> w) {
  double s = 0.0;
  double s2 = 0.0;
  for (double v : w) {
    s += v;
    s2 += v * v;
  }
  return s2 > 0.0 ? s * s / s2 : 0.0;
}

// Weights exp(lw - max lw); all equal when lw is constant.
std::vector<double> normalized_weights(std::span<const double> lw) {
  const double m = *std::max_element(lw.begin(), lw.end());
  std::vector<double> w(lw.size());
  for (std::size_t k = 0; k < lw.size(); ++k) w[k] = std::exp(lw[k] - m);
  return w;
}

bool all_equal(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

std::vector<double> systematic_resample(std::span<const double> draws, std::span<const double> w,
                                        double u) {
  const std::size_t n = draws.size();
  double total = 0.0;
  for (double v : w) total += v;
  std::vector<double> out;
  out.reserve(n);
  double cum = w[0] / total;
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double target = (static_cast<double>(i) + u) / static_cast<double>(n);
    while (target > cum && k + 1 < n) cum += w[++k] / total;
    out.push_back(draws[k]);
  }
  return out;
}

McemRun run(const McemConfig& c, const MissingDataModel& model, bool tilted, std::uint64_t seed) {
  McemRun r;
  r.measure_id = tilted ? kMcemTiltedId : kMcemLebesgueId;
  const std::size_t m = c.mc_size;
  const double sd = std::sqrt(1.0 - c.rho * c.rho);
  const double w1 = c.observed;
  double theta = c.init;
  r.trajectory.push_back(theta);
  double min_ess = static_cast<double>(m);
  std::vector<double> draws(m);
  std::vector<double> weights(m, 1.0);
  for (std::size_t it = 0; it < c.iterations; ++it) {
    Rng rng = make_stream(seed, {0x6d63656d, it});
    std::normal_distribution<double> normal(0.0, 1.0);
    const double mean = theta + c.rho * (w1 - theta);
    for (auto& d : draws) d = mean + sd * normal(rng);
    std::fill(weights.begin(), weights.end(), 1.0);
    if (tilted) {
      std::vector<double> lw(m);
      for (std::size_t k = 0; k < m; ++k) lw[k] = -model.log_tilt(w1, draws[k]);
      if (!all_equal(lw)) {
        const auto v = normalized_weights(lw);
        const double e = ess(v);
        if (e < 0.1 * static_cast<double>(m)) {
          throw DegenerateError("importance effective sample size " + std::to_string(e) +
                                " below 10% of the Monte Carlo size");
        }
        min_ess = std::min(min_ess, e);
        Rng urng = make_stream(seed, {0x73797374, it});
        draws = systematic_resample(draws, v, uniform_open(urng));
        for (std::size_t k = 0; k < m; ++k) lw[k] = model.log_tilt(w1, draws[k]);
        weights = normalized_weights(lw);
        min_ess = std::min(min_ess, ess(weights));
      }
    }
    double total = 0.0;
    for (double w : weights) total += w;
    auto objective = [&](double t) {
      double q = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        const double lp = tilted ? model.log_joint_tilted(t, w1, draws[k])
                                 : model.log_joint_lebesgue(t, w1, draws[k]);
        q += weights[k] * lp;
      }
      return -q / total;
    };
    theta = boost::math::tools::brent_find_minima(objective, theta - c.search_radius,
                                                  theta + c.search_radius,
                                                  std::numeric_limits<double>::digits / 2)
                .first;
    r.trajectory.push_back(theta);
  }
  r.estimate = theta;
  r.effective_sample_size = c.iterations == 0 ? 0.0 : min_ess;
  if (c.iterations > 0) {
    const double rate = (1.0 - c.rho) / 2.0;
    r.standard_error = 0.5 * sd / std::sqrt(min_ess) / std::sqrt(1.0 - rate * rate);
    r.final_draws = draws;
  }
  return r;
}

}  // namespace

McemReport mcem_missing_data(const McemConfig& config, std::uint64_t seed) {
  const MissingDataModel model{config.rho, config.tilt};
  McemReport rep;
  rep.lebesgue = run(config, model, false, seed);
  rep.tilted = run(config, model, true, seed);
  rep.difference = rep.lebesgue.estimate - rep.tilted.estimate;
  rep.marginal_mle = config.observed;
  rep.ks_distance = ks_distance(rep.lebesgue.final_draws, rep.tilted.final_draws);

  const double w1 = config.observed;
  const double hat = rep.lebesgue.estimate;
  const double w2 = hat + config.rho * (w1 - hat);
  const auto grid = ThetaGrid::linspace(w1 - 2.0, w1 + 2.0, 41);
  LogLikelihoodCurve a{kMcemLebesgueId, "complete", grid, {}};
  LogLikelihoodCurve b{kMcemTiltedId, "complete", grid, {}};
  for (const auto& t : grid.points()) {
    a.values.push_back(model.log_joint_lebesgue(t[0], w1, w2));
    b.values.push_back(model.log_joint_tilted(t[0], w1, w2));
  }
  rep.complete_data_curves = {std::move(a), std::move(b)};
  return rep;
}

}  // namespace radonlik::harness
