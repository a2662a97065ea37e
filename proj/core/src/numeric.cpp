#include "radonlik/numeric.hpp"

#include <algorithm>
#include <sstream>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <numbers>
#include <string>

#include "radonlik/error.hpp"

namespace radonlik {

double log_sum_exp(std::span<const double> values) {
  double hi = kNegInf;
  for (double v : values) hi = std::max(hi, v);
  if (hi == kNegInf) return kNegInf;
  if (hi == kInf) return kInf;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - hi);
  return hi + std::log(acc);
}

double normal_log_pdf(double x, double mean, double variance) {
  const double z = x - mean;
  return -0.5 * (std::log(2.0 * std::numbers::pi * variance) + z * z / variance);
}

double standard_normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double abs_tol) {
  if (lo == hi) return 0.0;
  if (lo > hi) return -integrate(f, hi, lo, abs_tol);
  bool saw_nan = false;
  auto guarded = [&](double x) {
    const double v = f(x);
    if (std::isnan(v)) {
      saw_nan = true;
      return 0.0;
    }
    return v;
  };
  double error = 0.0;
  double l1 = 0.0;
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double value = 0.0;
  if (std::isfinite(lo) && std::isfinite(hi)) {
    const double width = hi - lo;
    value = GK::integrate([&](double u) { return width * guarded(lo + width * u); }, 0.0, 1.0, 15,
                          1e-12, &error, &l1);
  } else {
    value = GK::integrate(guarded, lo, hi, 15, 1e-12, &error, &l1);
  }
  if (saw_nan) throw NumericalError("quadrature: integrand returned NaN");
  if (!std::isfinite(value)) throw NumericalError("quadrature: non-finite integral");
  if (error > std::max(abs_tol, 1e-12 * l1)) {
    std::ostringstream msg;
    msg << "quadrature: error estimate " << error << " exceeds tolerance " << abs_tol;
    throw NumericalError(msg.str());
  }
  return value;
}

double integrate_split(const std::function<double(double)>& f, double lo, double hi,
                       std::span<const double> breakpoints, double abs_tol) {
  std::vector<double> cuts;
  cuts.push_back(lo);
  for (double b : breakpoints) {
    if (b > lo && b < hi) cuts.push_back(b);
  }
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += integrate(f, cuts[i], cuts[i + 1], abs_tol);
  }
  return total;
}

double trapezoid(std::span<const double> values, double step) {
  if (values.size() < 2) return 0.0;
  double acc = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) acc += values[i];
  return acc * step;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out;
  if (n == 0) return out;
  out.reserve(n);
  if (n == 1) {
    out.push_back(lo);
    return out;
  }
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out.push_back(lo + step * static_cast<double>(i));
  out.back() = hi;
  return out;
}

}  // namespace radonlik
