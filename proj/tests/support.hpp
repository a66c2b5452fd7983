#pragma once

#include <complex>
#include <limits>
#include <random>
#include <vector>

#include "ptlat/rational.hpp"

namespace testing_support {

/// Random rational p/q with |p| <= max_num, 1 <= q <= max_den.
inline ptlat::Rational random_rational(std::mt19937_64& gen, long max_num = 20, long max_den = 12) {
  std::uniform_int_distribution<long> num(-max_num, max_num);
  std::uniform_int_distribution<long> den(1, max_den);
  return ptlat::Rational(num(gen), den(gen));
}

/// Random rational strictly inside (-1, 1) and away from 0.
inline ptlat::Rational random_coupling(std::mt19937_64& gen) {
  std::uniform_int_distribution<long> den(3, 17);
  const long q = den(gen);
  std::uniform_int_distribution<long> num(1, q - 1);
  const long p = num(gen);
  return gen() % 2 ? ptlat::Rational(p, q) : ptlat::Rational(-p, q);
}

/// Largest distance after pairing each value of a with the nearest unused value
/// of b. Ties in the real part make index-wise comparison of sorted spectra
/// sensitive to rounding, so spectra are compared as multisets.
inline double matched_distance(const std::vector<std::complex<double>>& a, const std::vector<std::complex<double>>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const auto& x : a) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!used[j] && std::abs(x - b[j]) < best_d) {
        best_d = std::abs(x - b[j]);
        best = j;
      }
    used[best] = true;
    worst = std::max(worst, best_d);
  }
  return worst;
}

}  // namespace testing_support
