#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tml/arith.hpp"
#include "tml/smooth.hpp"

namespace tml {

// Integer polynomial b_0 + b_1 x + ... + b_d x^d with b_d > 0 and coprime coefficients.
class PolynomialSpec {
 public:
  // Coefficients from the constant term upward. Trailing zeros are rejected.
  explicit PolynomialSpec(std::vector<i64> coefficients);
  // "1,0,1" -> x^2 + 1.
  static PolynomialSpec parse(const std::string& text);

  unsigned degree() const { return static_cast<unsigned>(coeffs_.size() - 1); }
  const std::vector<i64>& coefficients() const { return coeffs_; }
  // tau = sum |b_i|, so that f(n) <= tau n^d for n >= 1.
  double tau() const;

  // Exact value; throws CapacityError if |f(n)| >= 2^63.
  i64 evaluate(i64 n) const;
  // f(r) mod m, canonical in [0, m).
  u64 evaluate_mod(u64 r, u64 m) const;

  std::string to_string() const;

 private:
  std::vector<i64> coeffs_;
};

// Shifted products a^{k+1} |(b - b_1)...(b - b_k)| over |b| <= eta ln x, b not a shift.
struct LinearDeltaSpec {
  u64 a = 1;
  std::vector<i64> shifts;
  double eta = 1.0;
  double log_x = 1.0;  // natural log of x; x itself is exp(log_x)

  std::size_t k() const { return shifts.size(); }
  // Throws DomainError naming the violated hypothesis.
  void validate() const;
  // The index set, ascending.
  std::vector<i64> omega_set() const;
};

enum class Family { PolyInt, PolyPrime, LinearDelta };

std::string family_name(Family f);
Family parse_family(const std::string& text);

struct SequenceInstance {
  Family family = Family::PolyInt;
  std::vector<u64> values;  // a_1..a_N
  std::vector<i64> index;   // n, p or b generating each value
  double M = 1;             // declared upper bound on values
  std::optional<PolynomialSpec> polynomial;

  std::size_t N() const { return values.size(); }
};

// f(1), ..., f(floor(x)); M = tau x^d.
SequenceInstance gen_poly_int(const PolynomialSpec& spec, double x);
// f(p) over primes p <= x; M = tau x^d.
SequenceInstance gen_poly_prime(const PolynomialSpec& spec, double x, const PrimeTable& table);
// M = a^{k+1} (2 ln x)^k.
SequenceInstance gen_linear_delta(const LinearDeltaSpec& spec);

// #{n <= N : d | a_n}.
std::size_t omega_counter(const SequenceInstance& seq, u64 d);

struct OmegaFit {
  double K = 0;        // max over the set of omega(n) g(n)
  u64 witness = 1;     // smallest arg-max
  std::optional<double> gamma;  // K / N, for poly-int with g = power-root
  std::vector<std::size_t> omega;  // omega(n) aligned with dset.members
};

OmegaFit omega_hypothesis_check(const SequenceInstance& seq, const MultiplicativeSpec& g,
                                const SmoothSet& dset);

}  // namespace tml
