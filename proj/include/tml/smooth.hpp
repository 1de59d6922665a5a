#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tml/arith.hpp"

namespace tml {

inline constexpr std::size_t kMaxSmoothPrimes = 25;

// Squarefree integers all of whose prime divisors lie in (1, y], including 1.
struct SmoothSet {
  double y = 2;
  std::vector<u64> primes;   // primes <= y
  std::vector<u64> members;  // ascending, size 2^primes.size()

  bool contains(u64 n) const;
  // Prime factors of a member, ascending. Throws DomainError for non-members.
  std::vector<u64> prime_factors(u64 n) const;
};

// A positive multiplicative function given by its values on prime powers.
class MultiplicativeSpec {
 public:
  enum class Kind { PowerRoot, LinearMin, ShiftedMin, Unit, CustomTable };

  static MultiplicativeSpec power_root(unsigned d);
  static MultiplicativeSpec linear_min(unsigned k);
  static MultiplicativeSpec shifted_min(unsigned d);
  static MultiplicativeSpec unit();
  // Prime powers absent from the table evaluate to 1.
  static MultiplicativeSpec custom(std::map<std::pair<u64, unsigned>, Rational> table);

  // "power-root:2", "linear-min:3", "shifted-min:2", "unit".
  static MultiplicativeSpec parse(const std::string& text);
  std::string name() const;

  Kind kind() const { return kind_; }
  unsigned parameter() const { return param_; }

  // True when every value on prime powers is rational (all kinds except power-root with d >= 2).
  bool rational_valued() const;

  double at_prime_power(u64 p, unsigned e) const;
  std::optional<Rational> exact_at_prime_power(u64 p, unsigned e) const;

  // g(n) for a factored n. Power-root evaluates exp(ln(n)/d) directly.
  double value(const Factorization& f) const;
  // Throws DomainError when the spec is not rational-valued.
  Rational exact_value(const Factorization& f) const;

 private:
  Kind kind_ = Kind::Unit;
  unsigned param_ = 1;
  std::map<std::pair<u64, unsigned>, Rational> table_;
};

// All 2^pi(y) subset products of the primes <= y. Requires y >= 2 and pi(y) <= 25.
SmoothSet enumerate_smooth(double y, const PrimeTable& table);

// (1 + 1/p)^s - 1, exactly. s <= 64.
Rational proof_f_at_prime(u64 p, unsigned s);

// The lcm-tuple weight f(n) for n in the smooth set, via its product over primes.
Rational proof_f(u64 n, unsigned s, const SmoothSet& set);

struct EulerProduct {
  double value = 1.0;
  std::optional<Rational> exact;  // present when g is rational-valued
};

// prod_{p <= y} (1 + ((1 + 1/p)^s - 1) / g(p)). Empty product for y < 2.
EulerProduct euler_product_bound(double y, unsigned s, const MultiplicativeSpec& g,
                                 const PrimeTable& table);

struct DivisorSumSides {
  Rational product_side;  // prod_{p | n, p <= y} (1 + 1/p)
  Rational divisor_side;  // sum_{d | n, P+(d) <= y} mu^2(d) / d
};

DivisorSumSides smooth_divisor_sum(const Factorization& n, double y);

struct PrimeSeriesBound {
  double partial = 0.0;     // sum over p <= P
  double tail_bound = 0.0;  // rigorous upper bound for the sum over p > P
};

// L = sum_p 1/(p g(p)), truncated at P with a tail overestimate.
PrimeSeriesBound compute_L(const MultiplicativeSpec& g, u64 truncation, double c0,
                           const PrimeTable& table);

// sum_{p <= s} 1/p.
double mertens_prime_sum(double s, const PrimeTable& table);

}  // namespace tml
