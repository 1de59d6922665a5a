#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "tml/rational.hpp"

namespace tml {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline constexpr u64 kMaxSieveLimit = 100'000'000;
inline constexpr u64 kMaxValue = (u64{1} << 63) - 1;

// Primes up to `limit` plus a smallest-prime-factor table for 0..limit.
// Immutable after construction and safe to share across threads.
class PrimeTable {
 public:
  PrimeTable() = default;

  // Builds the table from an existing spf array (spf[n] for 0..limit).
  // Used by the on-disk cache; validates the array.
  static PrimeTable from_spf(std::vector<std::uint32_t> spf);

  u64 limit() const { return limit_; }
  std::span<const u64> primes() const { return primes_; }
  std::span<const std::uint32_t> spf() const { return spf_; }

  // Smallest prime factor of 2 <= n <= limit.
  u64 smallest_factor(u64 n) const { return spf_[n]; }
  bool is_prime(u64 n) const { return n >= 2 && n <= limit_ && spf_[n] == n; }

  // Number of primes <= x (x may exceed limit only if x < 2).
  std::size_t prime_pi(double x) const;

 private:
  friend PrimeTable sieve_primes(u64 limit);

  u64 limit_ = 0;
  std::vector<u64> primes_;
  std::vector<std::uint32_t> spf_;
};

struct PrimePower {
  u64 prime;
  unsigned exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
  u64 value = 1;
  std::vector<PrimePower> factors;  // strictly increasing primes

  // Number of distinct prime divisors.
  std::size_t nu() const { return factors.size(); }
  // Greatest prime factor, 1 for value 1.
  u64 largest_prime() const { return factors.empty() ? 1 : factors.back().prime; }
  bool squarefree() const;
};

// Linear sieve over [2, limit]; 2 <= limit <= kMaxSieveLimit.
PrimeTable sieve_primes(u64 limit);

// Full factorization of 1 <= n <= kMaxValue. Uses the spf table when n is
// covered, otherwise trial division, Miller-Rabin and Pollard-Brent rho.
Factorization factorize(u64 n, const PrimeTable& table);

// Factorizations of a batch of values, in input order.
std::vector<Factorization> factorize_all(std::span<const u64> values, const PrimeTable& table);

// Deterministic for every 64-bit input.
bool is_prime_u64(u64 n);

u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 a, u64 e, u64 m);

u64 euler_phi(const Factorization& f);
int mobius(const Factorization& f);

// n / phi(n) in lowest terms as a (numerator, denominator) pair of 64-bit words.
std::pair<u64, u64> totient_ratio_parts(const Factorization& f);
Rational totient_ratio(const Factorization& f);
double totient_ratio_double(const Factorization& f);

// Product of prime^exponent; throws CapacityError if it overflows kMaxValue.
u64 product(std::span<const PrimePower> factors);

}  // namespace tml
