#pragma once

#include <vector>

#include "tml/arith.hpp"

namespace tml {

// counts[a] = pi(x; k, a) for 0 <= a < k.
std::vector<u64> residue_class_counts(double x, u64 k, const PrimeTable& table);

struct BrunTitchmarshRow {
  u64 k = 1;
  u64 phi_k = 1;
  u64 classes = 0;          // coprime residues checked
  u64 max_count = 0;        // max pi(x; k, a) over coprime a
  double max_ratio = 0;     // pi(x;k,a) phi(k) log(2x/k) / ((2 + eps) x)
  double max_ratio_5x = 0;  // pi(x;k,a) phi(k) log x / (5x)
  u64 violations = 0;       // classes with max_ratio > 1
  u64 violations_5x = 0;
};

struct BrunTitchmarshReport {
  double x = 0;
  double epsilon = 0;
  std::vector<BrunTitchmarshRow> rows;
  double max_ratio = 0;
  double max_ratio_5x = 0;
  u64 violations = 0;
};

// Every k <= k_max and every a coprime to k; needs x <= table.limit() and k_max <= sqrt(x).
BrunTitchmarshReport brun_titchmarsh_check(double x, u64 k_max, double epsilon,
                                           const PrimeTable& table);

}  // namespace tml
