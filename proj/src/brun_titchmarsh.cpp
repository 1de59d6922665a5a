#include "tml/brun_titchmarsh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tml/error.hpp"

namespace tml {

std::vector<u64> residue_class_counts(double x, u64 k, const PrimeTable& table) {
  if (k == 0) throw DomainError("modulus k must be positive");
  if (x > static_cast<double>(table.limit()))
    throw BoundsError("x exceeds sieve limit " + std::to_string(table.limit()));
  std::vector<u64> counts(k, 0);
  for (u64 p : table.primes()) {
    if (static_cast<double>(p) > x) break;
    ++counts[p % k];
  }
  return counts;
}

BrunTitchmarshReport brun_titchmarsh_check(double x, u64 k_max, double epsilon,
                                           const PrimeTable& table) {
  if (!(epsilon > 0)) throw DomainError("epsilon must be positive");
  if (!(x >= 2)) throw DomainError("x must be at least 2");
  if (k_max == 0 || static_cast<double>(k_max) > std::sqrt(x))
    throw BoundsError("k_max must lie in [1, sqrt(x)]");
  BrunTitchmarshReport rep;
  rep.x = x;
  rep.epsilon = epsilon;
  const double log_x = std::log(x);
  for (u64 k = 1; k <= k_max; ++k) {
    const auto counts = residue_class_counts(x, k, table);
    BrunTitchmarshRow row;
    row.k = k;
    row.phi_k = euler_phi(factorize(k, table));
    const double phi = static_cast<double>(row.phi_k);
    const double log_2x_k = std::log(2 * x / static_cast<double>(k));
    for (u64 a = 0; a < k; ++a) {
      if (std::gcd(a, k) != 1) continue;
      ++row.classes;
      const double c = static_cast<double>(counts[a]);
      row.max_count = std::max(row.max_count, counts[a]);
      const double ratio = c * phi * log_2x_k / ((2 + epsilon) * x);
      const double ratio5 = c * phi * log_x / (5 * x);
      row.max_ratio = std::max(row.max_ratio, ratio);
      row.max_ratio_5x = std::max(row.max_ratio_5x, ratio5);
      if (ratio > 1) ++row.violations;
      if (ratio5 > 1) ++row.violations_5x;
    }
    rep.max_ratio = std::max(rep.max_ratio, row.max_ratio);
    rep.max_ratio_5x = std::max(rep.max_ratio_5x, row.max_ratio_5x);
    rep.violations += row.violations + row.violations_5x;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace tml
