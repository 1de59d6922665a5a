#include "tml/smooth.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tml/error.hpp"
#include "tml/summation.hpp"

namespace tml {

namespace {

bool prime_le(u64 p, double y) { return static_cast<double>(p) <= y; }

std::vector<u64> primes_up_to(double y, const PrimeTable& table) {
  std::vector<u64> out;
  if (y < 2) return out;
  if (y > static_cast<double>(table.limit()))
    throw BoundsError("y = " + std::to_string(y) + " exceeds sieve limit " +
                      std::to_string(table.limit()));
  for (u64 p : table.primes()) {
    if (!prime_le(p, y)) break;
    out.push_back(p);
  }
  return out;
}

}  // namespace

bool SmoothSet::contains(u64 n) const {
  return std::binary_search(members.begin(), members.end(), n);
}

std::vector<u64> SmoothSet::prime_factors(u64 n) const {
  if (!contains(n))
    throw DomainError(std::to_string(n) + " is not a squarefree y-smooth number for y = " +
                      std::to_string(y));
  std::vector<u64> out;
  for (u64 p : primes) {
    if (n % p == 0) {
      out.push_back(p);
      n /= p;
    }
  }
  return out;
}

MultiplicativeSpec MultiplicativeSpec::power_root(unsigned d) {
  if (d == 0) throw DomainError("power-root degree must be positive");
  MultiplicativeSpec g;
  g.kind_ = Kind::PowerRoot;
  g.param_ = d;
  return g;
}

MultiplicativeSpec MultiplicativeSpec::linear_min(unsigned k) {
  if (k == 0) throw DomainError("linear-min parameter must be positive");
  MultiplicativeSpec g;
  g.kind_ = Kind::LinearMin;
  g.param_ = k;
  return g;
}

MultiplicativeSpec MultiplicativeSpec::shifted_min(unsigned d) {
  if (d == 0) throw DomainError("shifted-min parameter must be positive");
  MultiplicativeSpec g;
  g.kind_ = Kind::ShiftedMin;
  g.param_ = d;
  return g;
}

MultiplicativeSpec MultiplicativeSpec::unit() { return MultiplicativeSpec{}; }

MultiplicativeSpec MultiplicativeSpec::custom(std::map<std::pair<u64, unsigned>, Rational> table) {
  for (const auto& [key, v] : table) {
    if (sgn(v) <= 0)
      throw DomainError("custom g must be positive; g(" + std::to_string(key.first) + "^" +
                        std::to_string(key.second) + ") = " + v.get_str());
  }
  MultiplicativeSpec g;
  g.kind_ = Kind::CustomTable;
  g.table_ = std::move(table);
  return g;
}

MultiplicativeSpec MultiplicativeSpec::parse(const std::string& text) {
  if (text == "unit") return unit();
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw DomainError("unknown multiplicative function '" + text + "'");
  const std::string kind = text.substr(0, colon);
  unsigned param = 0;
  try {
    std::size_t used = 0;
    param = static_cast<unsigned>(std::stoul(text.substr(colon + 1), &used));
    if (used != text.size() - colon - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw DomainError("bad parameter in multiplicative function '" + text + "'");
  }
  if (kind == "power-root") return power_root(param);
  if (kind == "linear-min") return linear_min(param);
  if (kind == "shifted-min") return shifted_min(param);
  throw DomainError("unknown multiplicative function '" + text + "'");
}

std::string MultiplicativeSpec::name() const {
  switch (kind_) {
    case Kind::PowerRoot: return "power-root:" + std::to_string(param_);
    case Kind::LinearMin: return "linear-min:" + std::to_string(param_);
    case Kind::ShiftedMin: return "shifted-min:" + std::to_string(param_);
    case Kind::Unit: return "unit";
    case Kind::CustomTable: return "custom";
  }
  return "unit";
}

bool MultiplicativeSpec::rational_valued() const {
  return kind_ != Kind::PowerRoot || param_ == 1;
}

std::optional<Rational> MultiplicativeSpec::exact_at_prime_power(u64 p, unsigned e) const {
  switch (kind_) {
    case Kind::PowerRoot:
      if (param_ != 1) return std::nullopt;
      return pow(from_u64(p), e);
    case Kind::LinearMin:
      if (e >= 2) return Rational(1);
      return make_rational(p, std::min<u64>(p, param_));
    case Kind::ShiftedMin:
      if (e >= 2) return Rational(1);
      return make_rational(p - 1, std::min<u64>(p, param_));
    case Kind::Unit:
      return Rational(1);
    case Kind::CustomTable: {
      auto it = table_.find({p, e});
      return it == table_.end() ? Rational(1) : it->second;
    }
  }
  return Rational(1);
}

double MultiplicativeSpec::at_prime_power(u64 p, unsigned e) const {
  if (kind_ == Kind::PowerRoot)
    return std::exp(static_cast<double>(e) * std::log(static_cast<double>(p)) / param_);
  return exact_at_prime_power(p, e)->get_d();
}

double MultiplicativeSpec::value(const Factorization& f) const {
  if (kind_ == Kind::PowerRoot)
    return f.value == 1 ? 1.0 : std::exp(std::log(static_cast<double>(f.value)) / param_);
  double v = 1.0;
  for (const auto& [p, e] : f.factors) v *= at_prime_power(p, e);
  return v;
}

Rational MultiplicativeSpec::exact_value(const Factorization& f) const {
  if (!rational_valued()) throw DomainError(name() + " is not rational-valued");
  Rational v(1);
  for (const auto& [p, e] : f.factors) v *= *exact_at_prime_power(p, e);
  return v;
}

SmoothSet enumerate_smooth(double y, const PrimeTable& table) {
  if (!(y >= 2)) throw DomainError("smoothness bound y must be at least 2");
  SmoothSet set;
  set.y = y;
  set.primes = primes_up_to(y, table);
  if (set.primes.size() > kMaxSmoothPrimes)
    throw CapacityError("pi(y) = " + std::to_string(set.primes.size()) +
                        " exceeds the enumeration cap of " + std::to_string(kMaxSmoothPrimes) +
                        " primes");
  const std::size_t count = std::size_t{1} << set.primes.size();
  set.members.resize(count);
  set.members[0] = 1;
  // members[mask] = product of primes selected by mask, built from the lower mask.
  for (std::size_t bit = 0; bit < set.primes.size(); ++bit) {
    const std::size_t half = std::size_t{1} << bit;
    for (std::size_t m = 0; m < half; ++m) set.members[half + m] = set.members[m] * set.primes[bit];
  }
  std::sort(set.members.begin(), set.members.end());
  return set;
}

Rational proof_f_at_prime(u64 p, unsigned s) {
  if (s == 0 || s > 64) throw DomainError("moment exponent s must lie in [1, 64]");
  return pow(make_rational(p + 1, p), s) - 1;
}

Rational proof_f(u64 n, unsigned s, const SmoothSet& set) {
  Rational v(1);
  for (u64 p : set.prime_factors(n)) v *= proof_f_at_prime(p, s);
  return v;
}

EulerProduct euler_product_bound(double y, unsigned s, const MultiplicativeSpec& g,
                                 const PrimeTable& table) {
  if (s == 0 || s > 64) throw DomainError("moment exponent s must lie in [1, 64]");
  const auto primes = primes_up_to(y, table);
  EulerProduct out;
  long double value = 1.0L;
  const bool exact = g.rational_valued();
  Rational exact_value(1);
  for (u64 p : primes) {
    const double gp = g.at_prime_power(p, 1);
    if (!(gp > 0)) throw DomainError("g(" + std::to_string(p) + ") must be positive");
    const long double fp = std::expm1(s * std::log1p(1.0L / p));
    value *= 1.0L + fp / gp;
    if (exact) exact_value *= 1 + proof_f_at_prime(p, s) / *g.exact_at_prime_power(p, 1);
  }
  if (exact) {
    out.value = exact_value.get_d();
    out.exact = std::move(exact_value);
  } else {
    out.value = static_cast<double>(value);
  }
  return out;
}

DivisorSumSides smooth_divisor_sum(const Factorization& n, double y) {
  DivisorSumSides sides;
  sides.product_side = 1;
  for (const auto& pp : n.factors)
    if (prime_le(pp.prime, y)) sides.product_side *= make_rational(pp.prime + 1, pp.prime);

  // Walk every divisor (not only squarefree ones) and filter by mu^2 and P+.
  std::vector<Rational> terms;
  std::vector<unsigned> exps(n.factors.size(), 0);
  while (true) {
    u64 d = 1, largest = 1;
    bool squarefree = true;
    for (std::size_t i = 0; i < exps.size(); ++i) {
      for (unsigned j = 0; j < exps[i]; ++j) d *= n.factors[i].prime;
      if (exps[i] >= 2) squarefree = false;
      if (exps[i] >= 1) largest = n.factors[i].prime;
    }
    if (squarefree && (largest == 1 || prime_le(largest, y))) terms.push_back(make_rational(1, d));
    std::size_t i = 0;
    for (; i < exps.size(); ++i) {
      if (exps[i] < n.factors[i].exponent) {
        ++exps[i];
        break;
      }
      exps[i] = 0;
    }
    if (i == exps.size()) break;
  }
  sides.divisor_side = tree_sum(terms);
  return sides;
}

PrimeSeriesBound compute_L(const MultiplicativeSpec& g, u64 truncation, double c0,
                           const PrimeTable& table) {
  using Kind = MultiplicativeSpec::Kind;
  if (g.kind() == Kind::Unit || g.kind() == Kind::CustomTable)
    throw DivergenceError("sum over p of 1/(p g(p)) diverges for " + g.name() +
                          " (g is bounded on primes)");
  if (truncation < 2) throw DomainError("truncation bound must be at least 2");
  if (truncation > table.limit())
    throw BoundsError("truncation " + std::to_string(truncation) + " exceeds sieve limit");
  if (!(c0 > 0)) throw DomainError("c0 must be positive");

  PrimeSeriesBound out;
  CompensatedSum partial;
  for (u64 p : table.primes()) {
    if (p > truncation) break;
    const double gp = g.at_prime_power(p, 1);
    if (gp < c0)
      throw DomainError("g(" + std::to_string(p) + ") = " + std::to_string(gp) + " is below c0");
    partial.add(1.0 / (static_cast<double>(p) * gp));
  }
  out.partial = partial.value();

  const double P = static_cast<double>(truncation);
  const unsigned k = g.parameter();
  switch (g.kind()) {
    case Kind::PowerRoot:
      // sum_{n > P} n^{-1-1/d} <= integral_P^inf u^{-1-1/d} du = d P^{-1/d}
      out.tail_bound = k * std::pow(P, -1.0 / k);
      break;
    case Kind::LinearMin:
    case Kind::ShiftedMin: {
      // Terms are 1/p (resp. 1/(p-1)) for P < p <= Q = max(P, k), then at most
      // k/(p(p-1)), whose sum over p > Q telescopes to at most k/Q.
      const u64 q = std::max<u64>(truncation, k);
      CompensatedSum finite;
      for (u64 p = truncation + 1; p <= q; ++p) {
        if (!is_prime_u64(p)) continue;
        finite.add(1.0 / (static_cast<double>(p) * g.at_prime_power(p, 1)));
      }
      // Round the finite part up by a few ulps so the total stays an overestimate.
      out.tail_bound = std::nextafter(finite.value() + static_cast<double>(k) / q, INFINITY);
      break;
    }
    default:
      break;
  }
  return out;
}

double mertens_prime_sum(double s, const PrimeTable& table) {
  if (s > static_cast<double>(table.limit()))
    throw BoundsError("mertens_prime_sum: s exceeds sieve limit " + std::to_string(table.limit()));
  CompensatedSum sum;
  for (u64 p : table.primes()) {
    if (!prime_le(p, s)) break;
    sum.add(1.0 / static_cast<double>(p));
  }
  return sum.value();
}

}  // namespace tml
