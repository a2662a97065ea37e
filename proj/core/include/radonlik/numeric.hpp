#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace radonlik {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// log(x) with log(0) = -inf. Negative or NaN input is a programming error
/// in a density kernel and yields NaN so callers can reject it.
inline double safe_log(double x) {
  if (x == 0.0) return kNegInf;
  return std::log(x);
}

/// log(exp(a) + exp(b)) without overflow.
inline double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

/// Left-to-right log-sum-exp over a span.
double log_sum_exp(std::span<const double> values);

/// Log-density of N(mean, variance) at x.
double normal_log_pdf(double x, double mean, double variance);

/// Standard normal density.
double standard_normal_pdf(double z);

/// Standard normal CDF via erfc.
double standard_normal_cdf(double z);

/// Adaptive Gauss-Kronrod quadrature on [lo, hi]; either bound may be
/// infinite. Throws NumericalError if the integrand returns NaN or the error
/// estimate exceeds `abs_tol` after refinement.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double abs_tol = 1e-10);

/// As `integrate`, split at the given interior breakpoints so that no
/// quadrature node lands exactly on one of them.
double integrate_split(const std::function<double(double)>& f, double lo,
                       double hi, std::span<const double> breakpoints,
                       double abs_tol = 1e-10);

/// Composite trapezoid rule on a uniform grid with spacing `step`.
double trapezoid(std::span<const double> values, double step);

/// Evenly spaced points lo, ..., hi (n >= 1; n == 1 yields {lo}).
std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace radonlik
