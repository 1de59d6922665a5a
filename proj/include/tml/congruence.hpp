#pragma once

#include <optional>
#include <vector>

#include "tml/arith.hpp"
#include "tml/sequences.hpp"

namespace tml {

inline constexpr u64 kMaxScanModulus = 10'000'000;
inline constexpr u64 kRootRetentionLimit = 10'000;

struct RootCount {
  u64 modulus = 1;
  u64 count = 0;
  std::optional<std::vector<u64>> roots;  // ascending, kept for modulus <= 10^4
};

// Scan of every residue mod m (m <= 10^7).
RootCount rho_bruteforce(const PolynomialSpec& f, u64 m);

// Product of prime-power component counts; roots combined by CRT when retained.
RootCount rho_crt(const PolynomialSpec& f, const Factorization& m);

struct LagrangeReport {
  u64 rho = 0;
  u64 bound = 0;  // min(p, d)
};

// Throws InvariantViolation if rho(f, p) > min(p, d).
LagrangeReport lagrange_check(const PolynomialSpec& f, u64 p);

struct RatioWitness {
  double max_ratio = 0;
  u64 witness = 1;
};

// max over 1 <= m <= m_max of rho(f, m) / (d m^{1 - 1/d}); m_max <= 10^5.
RatioWitness konyagin_ratio(const PolynomialSpec& f, u64 m_max, const PrimeTable& table);

}  // namespace tml
