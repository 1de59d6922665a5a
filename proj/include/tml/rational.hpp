#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tml {

using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational make_rational(std::uint64_t num, std::uint64_t den) {
  mpz_class n, d;
  mpz_import(n.get_mpz_t(), 1, -1, sizeof num, 0, 0, &num);
  mpz_import(d.get_mpz_t(), 1, -1, sizeof den, 0, 0, &den);
  Rational r(n, d);
  r.canonicalize();
  return r;
}

inline Rational from_u64(std::uint64_t v) { return make_rational(v, 1); }

inline BigInt big_from_u64(std::uint64_t v) {
  mpz_class n;
  mpz_import(n.get_mpz_t(), 1, -1, sizeof v, 0, 0, &v);
  return n;
}

inline Rational pow(const Rational& base, unsigned long e) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), e);
  return r;  // already canonical: gcd(num^e, den^e) = 1
}

// Exact value of a finite double.
inline Rational from_double(double v) { return Rational(v); }

inline std::string to_string(const Rational& r) { return r.get_str(); }

// Deterministic pairwise reduction tree; the shape depends only on terms.size().
Rational tree_sum(std::span<const Rational> terms);

}  // namespace tml
