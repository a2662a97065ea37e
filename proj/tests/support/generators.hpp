#pragma once

// Small seeded generators for property tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "radonlik/measure.hpp"

namespace gen {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }

  // Probability vector of length n; each entry is zero with probability
  // `zero_rate`, but at least one entry is positive.
  std::vector<double> simplex(int n, double zero_rate = 0.0) {
    std::vector<double> w(static_cast<std::size_t>(n));
    double total = 0.0;
    for (auto& x : w) {
      x = coin(zero_rate) ? 0.0 : uniform(0.05, 1.0);
      total += x;
    }
    if (total == 0.0) {
      w[static_cast<std::size_t>(integer(0, n - 1))] = 1.0;
      total = 1.0;
    }
    for (auto& x : w) x /= total;
    return w;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Finite family on atoms {0, ..., atoms-1}: member k has probability
// table[k][x] at atom x.
struct FiniteFamily {
  std::vector<std::vector<double>> table;
  radonlik::ScalarFamily family;
};

inline FiniteFamily finite_family(Gen& g, int max_atoms = 10, int max_members = 5,
                                  double zero_rate = 0.3) {
  const int atoms = g.integer(1, max_atoms);
  const int members = g.integer(1, max_members);
  std::vector<std::vector<double>> table;
  for (int k = 0; k < members; ++k) table.push_back(g.simplex(atoms, zero_rate));
  std::vector<double> points(static_cast<std::size_t>(atoms));
  for (int x = 0; x < atoms; ++x) points[static_cast<std::size_t>(x)] = x;
  std::vector<double> grid(static_cast<std::size_t>(members));
  for (int k = 0; k < members; ++k) grid[static_cast<std::size_t>(k)] = k;

  radonlik::SampleSpace<double> space;
  space.description = "finite atoms";
  space.atoms = points;
  space.contains = [atoms](double x) { return x >= 0 && x < atoms && x == std::floor(x); };
  radonlik::ScalarFamily fam(radonlik::ThetaGrid::scalar(grid), space);
  fam.register_kernel(radonlik::DominatingMeasure::counting("counting", points),
                      [table](const radonlik::Theta& t, double x) {
                        return radonlik::safe_log(
                            table[static_cast<std::size_t>(t[0])][static_cast<std::size_t>(x)]);
                      });
  return FiniteFamily{table, std::move(fam)};
}

}  // namespace gen
