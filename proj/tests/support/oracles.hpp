#pragma once

// Reference values computed independently of the library: exact integer
// arithmetic, textbook closed forms and plain loops.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace oracle {

inline std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int k = 2; k <= n; ++k) f *= static_cast<std::uint64_t>(k);
  return f;
}

inline std::uint64_t choose(int n, int k) {
  return factorial(n) / (factorial(k) * factorial(n - k));
}

// Beta function for positive integers: (p-1)!(q-1)!/(p+q-1)!.
inline long double beta_int(int p, int q) {
  return static_cast<long double>(factorial(p - 1)) * static_cast<long double>(factorial(q - 1)) /
         static_cast<long double>(factorial(p + q - 1));
}

// Marginal of Binomial(n, theta) under an integer Beta(a, b) prior.
inline double beta_binomial(int n, int x, int a, int b) {
  return static_cast<double>(static_cast<long double>(choose(n, x)) * beta_int(x + a, n - x + b) /
                             beta_int(a, b));
}

inline double beta_pdf_int(double t, int a, int b) {
  return std::pow(t, a - 1) * std::pow(1.0 - t, b - 1) / static_cast<double>(beta_int(a, b));
}

inline double normal_pdf(double x, double mean, double var) {
  return std::exp(-0.5 * (x - mean) * (x - mean) / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

inline double normal_cdf(double z) { return 0.5 * (1.0 + std::erf(z / std::numbers::sqrt2)); }

inline double ou_transition(double theta, double t, double x0, double x1) {
  const double mean = x0 * std::exp(-theta * t);
  const double var = (1.0 - std::exp(-2.0 * theta * t)) / (2.0 * theta);
  return normal_pdf(x1, mean, var);
}

inline double poisson_pmf(int k, double mean) {
  double p = std::exp(-mean);
  for (int i = 1; i <= k; ++i) p *= mean / i;
  return p;
}

}  // namespace oracle
