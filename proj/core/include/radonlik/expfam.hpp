#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "radonlik/measure.hpp"

namespace radonlik::expfam {

/// One-observation exponential family
///   dP_theta/d(base)(x) = exp{eta(theta)' t(x) - xi(theta)} h(x).
/// A sample x_1..x_n is evaluated under the n-fold product: T = sum t(x_k),
/// log h = sum log h(x_k), normalizer n * xi.
struct ExponentialFamily {
  std::string name;
  std::function<std::vector<double>(const Theta&)> eta;
  std::function<std::vector<double>(double)> statistic;
  std::function<double(double)> log_h;
  std::function<double(const Theta&)> xi;  // closed form; empty -> compute_xi
  DominatingMeasure base;
};

/// Bernoulli(theta), theta in (0, 1), natural parameter logit(theta).
ExponentialFamily bernoulli();

/// Poisson(theta) on the counting measure over {0, ..., atom_cap}. With a
/// truncation K, h(x) = 1{x <= K}/x! and xi has no closed form.
ExponentialFamily poisson(std::optional<int> truncation = std::nullopt, int atom_cap = 1000);

/// N(theta, variance) with known variance against Lebesgue on the line.
ExponentialFamily gaussian_known_variance(double variance);

/// Catalog lookup by name: "bernoulli", "poisson", "poisson-truncated",
/// "gaussian". Throws PreconditionError for unknown names.
ExponentialFamily from_catalog(const std::string& name);

/// log of the normalizer by exact log-sum-exp on atoms, or by quadrature on
/// one-dimensional Lebesgue bases. Throws NumericalError when the normalizer
/// exceeds 1e300 (divergence guard) or quadrature fails.
double compute_xi(const ExponentialFamily& family, const Theta& theta);

/// xi(theta): closed form when available, compute_xi otherwise.
double xi_value(const ExponentialFamily& family, const Theta& theta);

/// Sufficient statistic of a sample.
std::vector<double> sufficient_statistic(const ExponentialFamily& family,
                                         std::span<const double> sample);

/// Log-density of a sample; -inf where h vanishes. Throws DomainError for a
/// point outside the base measure's support.
double log_density(const ExponentialFamily& family, const Theta& theta,
                   std::span<const double> sample);

/// Same family written against lambda(A) = int_A h d(base): the kernel drops
/// h, and the base becomes the h-weighted measure with id "lambda-tilt".
ExponentialFamily tilt_to_lambda(const ExponentialFamily& family);

/// Point function on the real line in log form.
using LogFunction = std::function<double(double)>;

/// Representation against a new dominating measure `mu`, given the density
/// s = dQ/dmu and q = dQ/d(base) of a minimal dominating mixture Q. Only h
/// changes: h_mu = (h / q) * s. Throws PreconditionError when q vanishes at
/// an atom with positive mu-mass (checked eagerly for atomic mu and on
/// evaluation otherwise).
ExponentialFamily change_dominating_measure(const ExponentialFamily& family,
                                            DominatingMeasure mu, LogFunction log_s,
                                            LogFunction log_q);

struct MixtureDensities {
  LogFunction log_q;  // log dQ/d(base)
  LogFunction log_s;  // log dQ/dmu
};

/// Densities of Q = uniform mixture of P_theta over `members` w.r.t. the
/// family's base and w.r.t. `mu`. Both measures must be atomic, or both
/// Lebesgue-type on the line.
MixtureDensities mixture_densities(const ExponentialFamily& family, const DominatingMeasure& mu,
                                   const std::vector<Theta>& members);

/// change_dominating_measure with s and q taken from mixture_densities.
ExponentialFamily rebase(const ExponentialFamily& family, DominatingMeasure mu,
                         const std::vector<Theta>& members);

/// Factorization check: if T(omega1) == T(omega2), the log-density
/// difference is constant over the grid (within 1e-10). Throws
/// PreconditionError when the statistics differ.
bool factorization_ratio_test(const ExponentialFamily& family, const ThetaGrid& grid,
                              std::span<const double> omega1, std::span<const double> omega2);

/// Model family over `grid` with one kernel per representation, registered
/// under each representation's base id. xi is warmed up sequentially for
/// every grid point before the family is returned, then only read.
ModelFamily<std::vector<double>> representation_family(
    const std::vector<ExponentialFamily>& representations, const ThetaGrid& grid);

}  // namespace radonlik::expfam
