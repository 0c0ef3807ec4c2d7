#pragma once

// Test-only generators. They draw from std::mt19937_64 so that they stay
// independent of the library's own sampling path.

#include <random>

#include "quasisim/qcore.hpp"

namespace quasisim::testing {

// Random quasi-stochastic matrix whose entries share a denominator in
// [1, max_den]; the last entry of each column absorbs the remainder.
inline QuasiMatrix random_quasi_matrix(std::mt19937_64& gen, std::size_t d, long max_den = 12) {
  std::uniform_int_distribution<long> den_dist(1, max_den);
  const long den = den_dist(gen);
  std::uniform_int_distribution<long> num_dist(-den, 2 * den);
  SquareMatrix m(d);
  for (std::size_t j = 0; j < d; ++j) {
    long remaining = den;
    for (std::size_t i = 0; i + 1 < d; ++i) {
      const long k = num_dist(gen);
      m(i, j) = Rational(k, den);
      remaining -= k;
    }
    m(d - 1, j) = Rational(remaining, den);
  }
  return QuasiMatrix(std::move(m));
}

// Random distribution with weights in [0, max_weight] (not all zero).
inline Dist random_dist(std::mt19937_64& gen, std::size_t d, long max_weight = 24) {
  std::uniform_int_distribution<long> w(0, max_weight);
  for (;;) {
    std::vector<long> weights(d);
    long total = 0;
    for (auto& x : weights) total += (x = w(gen));
    if (total == 0) continue;
    Vector v;
    for (long x : weights) v.emplace_back(x, total);
    return Dist(std::move(v));
  }
}

}  // namespace quasisim::testing
