#include "tml/congruence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tml/error.hpp"

namespace tml {

namespace {

// Counts residues r in [0, m) with f(r) = 0 mod m. The first d + 1 values come
// from Horner evaluation; the rest follow from the forward-difference table,
// which needs only modular additions per step.
u64 scan_roots(const PolynomialSpec& f, u64 m, std::vector<u64>* roots) {
  const unsigned d = f.degree();
  u64 count = 0;
  if (m <= d + 1) {
    for (u64 r = 0; r < m; ++r) {
      if (f.evaluate_mod(r, m) == 0) {
        ++count;
        if (roots) roots->push_back(r);
      }
    }
    return count;
  }
  std::vector<u64> diff(d + 1);
  for (unsigned j = 0; j <= d; ++j) diff[j] = f.evaluate_mod(j, m);
  for (unsigned level = 1; level <= d; ++level)
    for (unsigned j = d; j >= level; --j) diff[j] = (diff[j] + m - diff[j - 1]) % m;
  for (u64 r = 0; r < m; ++r) {
    if (diff[0] == 0) {
      ++count;
      if (roots) roots->push_back(r);
    }
    for (unsigned j = 0; j < d; ++j) {
      u64 v = diff[j] + diff[j + 1];
      diff[j] = v >= m ? v - m : v;
    }
  }
  return count;
}

u64 inverse_mod(u64 a, u64 m) {
  i128 t = 0, new_t = 1, r = m, new_r = a % m;
  while (new_r != 0) {
    const i128 q = r / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    r -= q * new_r;
    std::swap(r, new_r);
  }
  if (r != 1) throw InvariantViolation("CRT moduli are not coprime");
  if (t < 0) t += m;
  return static_cast<u64>(t);
}

}  // namespace

RootCount rho_bruteforce(const PolynomialSpec& f, u64 m) {
  if (m == 0) throw DomainError("modulus must be positive");
  if (m > kMaxScanModulus)
    throw CapacityError("modulus " + std::to_string(m) + " exceeds the scan budget of 10^7");
  RootCount rc;
  rc.modulus = m;
  if (m <= kRootRetentionLimit) {
    rc.roots.emplace();
    rc.count = scan_roots(f, m, &*rc.roots);
  } else {
    rc.count = scan_roots(f, m, nullptr);
  }
  return rc;
}

RootCount rho_crt(const PolynomialSpec& f, const Factorization& m) {
  RootCount rc;
  rc.modulus = m.value;
  rc.count = 1;
  const bool keep = m.value <= kRootRetentionLimit;
  std::vector<u64> roots{0};
  u64 modulus = 1;
  for (const auto& [p, e] : m.factors) {
    u64 q = 1;
    for (unsigned i = 0; i < e; ++i) q *= p;
    if (q > kMaxScanModulus)
      throw CapacityError("prime power " + std::to_string(q) + " exceeds the scan budget of 10^7");
    std::vector<u64> local;
    const u64 c = scan_roots(f, q, keep ? &local : nullptr);
    rc.count *= c;
    if (keep) {
      const u64 inv = inverse_mod(modulus % q, q);
      std::vector<u64> next;
      next.reserve(roots.size() * local.size());
      for (u64 r1 : roots)
        for (u64 r2 : local) {
          const u64 t = mulmod((r2 + q - r1 % q) % q, inv, q);
          next.push_back(r1 + modulus * t);
        }
      roots = std::move(next);
      modulus *= q;
    }
  }
  if (keep) {
    std::sort(roots.begin(), roots.end());
    rc.roots = std::move(roots);
  }
  return rc;
}

LagrangeReport lagrange_check(const PolynomialSpec& f, u64 p) {
  if (!is_prime_u64(p)) throw DomainError("lagrange_check needs a prime, got " + std::to_string(p));
  LagrangeReport rep;
  rep.rho = rho_bruteforce(f, p).count;
  rep.bound = std::min<u64>(p, f.degree());
  if (rep.rho > rep.bound)
    throw InvariantViolation("rho(f, " + std::to_string(p) + ") = " + std::to_string(rep.rho) +
                             " exceeds min(p, d) = " + std::to_string(rep.bound) + " for f = " +
                             f.to_string());
  return rep;
}

RatioWitness konyagin_ratio(const PolynomialSpec& f, u64 m_max, const PrimeTable& table) {
  if (m_max == 0 || m_max > 100'000) throw BoundsError("m_max must lie in [1, 10^5]");
  if (m_max > table.limit()) throw BoundsError("konyagin_ratio: sieve limit below m_max");
  std::vector<u64> rho_pp(m_max + 1, 0);
  for (u64 p : table.primes()) {
    if (p > m_max) break;
    for (u64 q = p; q <= m_max; q *= p) rho_pp[q] = scan_roots(f, q, nullptr);
  }
  std::vector<u64> rho(m_max + 1, 1);
  const double d = f.degree();
  RatioWitness best;
  best.max_ratio = 1.0 / d;  // m = 1
  best.witness = 1;
  for (u64 m = 2; m <= m_max; ++m) {
    const u64 p = table.smallest_factor(m);
    u64 q = p;
    while ((m / q) % p == 0) q *= p;
    rho[m] = rho_pp[q] * rho[m / q];
    const double ratio =
        static_cast<double>(rho[m]) / (d * std::pow(static_cast<double>(m), 1.0 - 1.0 / d));
    if (ratio > best.max_ratio) {
      best.max_ratio = ratio;
      best.witness = m;
    }
  }
  return best;
}

}  // namespace tml
