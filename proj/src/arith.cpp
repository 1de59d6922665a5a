#include "tml/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tml/error.hpp"
#include "tml/parallel.hpp"

namespace tml {

namespace {

// Fixed parameters of the rho splitter: starting point and first increment.
// Failed attempts retry with the next increment, so the sequence of tries is
// fully determined by n.
constexpr u64 kRhoStart = 2;
constexpr u64 kRhoFirstIncrement = 1;

u64 icbrt_ceil(u64 n) {
  u64 r = static_cast<u64>(std::cbrt(static_cast<double>(n)));
  while (r > 0 && static_cast<u128>(r) * r * r > n) --r;
  while (static_cast<u128>(r) * r * r < n) ++r;
  return r;
}

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Pollard-Brent; returns a nontrivial divisor of composite n.
u64 rho_split(u64 n) {
  if (n % 2 == 0) return 2;
  if (u64 r = isqrt(n); r * r == n) return r;
  for (u64 c = kRhoFirstIncrement;; ++c) {
    auto step = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    u64 y = kRhoStart, x = y, g = 1, q = 1, ys = y;
    constexpr u64 batch = 128;
    for (u64 r = 1; g == 1; r <<= 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = step(y);
      for (u64 k = 0; k < r && g == 1; k += batch) {
        ys = y;
        for (u64 i = 0; i < std::min(batch, r - k); ++i) {
          y = step(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
    }
    if (g == n) {
      do {
        ys = step(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void split_into(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out.push_back(n);
    return;
  }
  const u64 d = rho_split(n);
  split_into(d, out);
  split_into(n / d, out);
}

void push_factor(std::vector<PrimePower>& factors, u64 p) {
  if (!factors.empty() && factors.back().prime == p)
    ++factors.back().exponent;
  else
    factors.push_back({p, 1});
}

}  // namespace

bool Factorization::squarefree() const {
  return std::all_of(factors.begin(), factors.end(),
                     [](const PrimePower& pp) { return pp.exponent == 1; });
}

u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  static constexpr u64 bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : bases) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : bases) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeTable sieve_primes(u64 limit) {
  if (limit < 2 || limit > kMaxSieveLimit)
    throw BoundsError("sieve limit " + std::to_string(limit) + " outside [2, " +
                      std::to_string(kMaxSieveLimit) + "]");
  PrimeTable t;
  t.limit_ = limit;
  t.spf_.assign(limit + 1, 0);
  t.primes_.reserve(static_cast<std::size_t>(1.3 * limit / std::log(double(limit)) + 16));
  auto& spf = t.spf_;
  auto& primes = t.primes_;
  for (u64 i = 2; i <= limit; ++i) {
    if (spf[i] == 0) {
      spf[i] = static_cast<std::uint32_t>(i);
      primes.push_back(i);
    }
    const u64 si = spf[i];
    for (u64 p : primes) {
      if (p > si || i * p > limit) break;
      spf[i * p] = static_cast<std::uint32_t>(p);
    }
  }
  return t;
}

PrimeTable PrimeTable::from_spf(std::vector<std::uint32_t> spf) {
  if (spf.size() < 3 || spf.size() - 1 > kMaxSieveLimit)
    throw BoundsError("spf table size out of range");
  PrimeTable t;
  t.limit_ = spf.size() - 1;
  for (u64 n = 2; n <= t.limit_; ++n) {
    const u64 p = spf[n];
    if (p < 2 || p > n || n % p != 0 || (p != n && spf[p] != p))
      throw InvariantViolation("corrupt spf entry at " + std::to_string(n));
    if (p == n) t.primes_.push_back(n);
  }
  t.spf_ = std::move(spf);
  return t;
}

std::size_t PrimeTable::prime_pi(double x) const {
  if (x < 2) return 0;
  if (x > static_cast<double>(limit_))
    throw BoundsError("prime_pi argument exceeds sieve limit " + std::to_string(limit_));
  const u64 k = static_cast<u64>(std::floor(x));
  return static_cast<std::size_t>(std::upper_bound(primes_.begin(), primes_.end(), k) -
                                  primes_.begin());
}

Factorization factorize(u64 n, const PrimeTable& table) {
  if (n == 0) throw DomainError("factorize: n must be positive");
  if (n > kMaxValue) throw CapacityError("factorize: n exceeds 2^63 - 1");
  Factorization f;
  f.value = n;
  if (n <= table.limit()) {
    while (n > 1) {
      push_factor(f.factors, table.smallest_factor(n));
      n /= table.smallest_factor(n);
    }
    return f;
  }
  const u64 bound = std::min(table.limit(), icbrt_ceil(n));
  for (u64 p : table.primes()) {
    if (p > bound) break;
    while (n % p == 0) {
      push_factor(f.factors, p);
      n /= p;
    }
  }
  std::vector<u64> rest;
  split_into(n, rest);
  std::sort(rest.begin(), rest.end());
  for (u64 p : rest) push_factor(f.factors, p);
  return f;
}

std::vector<Factorization> factorize_all(std::span<const u64> values, const PrimeTable& table) {
  std::vector<Factorization> out(values.size());
  for_each_chunk(values.size(), 4096, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out[i] = factorize(values[i], table);
  });
  return out;
}

u64 euler_phi(const Factorization& f) {
  u64 phi = 1;
  for (const auto& [p, e] : f.factors) {
    phi *= p - 1;
    for (unsigned i = 1; i < e; ++i) phi *= p;
  }
  return phi;
}

int mobius(const Factorization& f) {
  if (!f.squarefree()) return 0;
  return f.factors.size() % 2 == 0 ? 1 : -1;
}

std::pair<u64, u64> totient_ratio_parts(const Factorization& f) {
  // prod p and prod (p - 1) both divide-bound by the value, so neither overflows.
  u64 num = 1, den = 1;
  for (const auto& pp : f.factors) {
    num *= pp.prime;
    den *= pp.prime - 1;
  }
  const u64 g = std::gcd(num, den);
  return {num / g, den / g};
}

Rational totient_ratio(const Factorization& f) {
  const auto [num, den] = totient_ratio_parts(f);
  return make_rational(num, den);
}

double totient_ratio_double(const Factorization& f) {
  double r = 1.0;
  for (const auto& pp : f.factors) r *= static_cast<double>(pp.prime) / static_cast<double>(pp.prime - 1);
  return r;
}

u64 product(std::span<const PrimePower> factors) {
  u128 v = 1;
  for (const auto& [p, e] : factors) {
    for (unsigned i = 0; i < e; ++i) {
      v *= p;
      if (v > kMaxValue) throw CapacityError("product exceeds 2^63 - 1");
    }
  }
  return static_cast<u64>(v);
}

}  // namespace tml
