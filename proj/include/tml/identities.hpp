#pragma once

#include <string>
#include <vector>

#include "tml/arith.hpp"
#include "tml/smooth.hpp"

namespace tml {

struct IdentityResult {
  std::string name;
  u64 checked = 0;
  u64 failures = 0;
  std::string first_failure;  // empty when everything passed

  bool passed() const { return failures == 0; }
};

// Direct lcm-tuple sum: sum over (d_1..d_s), d_i | n squarefree, lcm = n, of prod 1/d_i.
// Cost is 2^(nu(n) s); callers keep nu(n) s small.
Rational proof_f_tuple_sum(u64 n, unsigned s, const SmoothSet& set);

// Exact identity and inequality checks from the moment-bound argument.
// Smooth-set checks use y; divisor-sum checks cover n <= n_max for y and {2, 5, 10, 100}.
std::vector<IdentityResult> run_identity_suite(double y, u64 n_max, const PrimeTable& table);

}  // namespace tml
