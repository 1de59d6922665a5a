#include "tml/identities.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "tml/error.hpp"

namespace tml {

namespace {

// Fixed seed for the sampled multiplicativity checks.
constexpr std::uint64_t kSampleSeed = 0x746d6c31;

void record(IdentityResult& r, bool ok, const std::string& what) {
  ++r.checked;
  if (!ok) {
    if (r.failures == 0) r.first_failure = what;
    ++r.failures;
  }
}

u64 lcm_u64(u64 a, u64 b) { return a / std::gcd(a, b) * b; }

// sum over squarefree d | n of 1/phi(d), by walking the subsets of prime factors.
Rational squarefree_inverse_phi_sum(const Factorization& f) {
  std::vector<Rational> terms;
  const std::size_t count = std::size_t{1} << f.factors.size();
  for (std::size_t mask = 0; mask < count; ++mask) {
    u64 phi = 1;
    for (std::size_t i = 0; i < f.factors.size(); ++i)
      if (mask >> i & 1) phi *= f.factors[i].prime - 1;
    terms.push_back(make_rational(1, phi));
  }
  return tree_sum(terms);
}

}  // namespace

Rational proof_f_tuple_sum(u64 n, unsigned s, const SmoothSet& set) {
  const auto primes = set.prime_factors(n);
  if (primes.size() * s > 20) throw CapacityError("tuple oracle too large for n = " + std::to_string(n));
  std::vector<u64> divisors{1};
  for (u64 p : primes) {
    const std::size_t sz = divisors.size();
    for (std::size_t i = 0; i < sz; ++i) divisors.push_back(divisors[i] * p);
  }
  std::vector<std::size_t> idx(s, 0);
  Rational total(0);
  while (true) {
    u64 l = 1, prod = 1;
    for (std::size_t i : idx) {
      l = lcm_u64(l, divisors[i]);
      prod *= divisors[i];
    }
    if (l == n) total += make_rational(1, prod);
    std::size_t j = 0;
    for (; j < s; ++j) {
      if (++idx[j] < divisors.size()) break;
      idx[j] = 0;
    }
    if (j == s) break;
  }
  return total;
}

std::vector<IdentityResult> run_identity_suite(double y, u64 n_max, const PrimeTable& table) {
  std::vector<IdentityResult> out;
  if (n_max > table.limit()) throw BoundsError("n_max exceeds sieve limit");

  {
    IdentityResult r;
    r.name = "divisor_sum";
    std::set<double> ys{2, 5, 10, 100, y};
    for (u64 n = 1; n <= n_max; ++n) {
      const Factorization f = factorize(n, table);
      for (double yy : ys) {
        const auto sides = smooth_divisor_sum(f, yy);
        record(r, sides.product_side == sides.divisor_side,
               "n=" + std::to_string(n) + " y=" + std::to_string(yy));
      }
    }
    out.push_back(r);
  }

  const SmoothSet set = enumerate_smooth(y, table);

  {
    IdentityResult r;
    r.name = "euler_product";
    if (set.primes.size() <= 12) {
      const std::vector<MultiplicativeSpec> gs{
          MultiplicativeSpec::unit(), MultiplicativeSpec::linear_min(3),
          MultiplicativeSpec::shifted_min(2), MultiplicativeSpec::power_root(1)};
      for (const auto& g : gs) {
        for (unsigned s = 1; s <= 5; ++s) {
          std::vector<Rational> terms;
          for (u64 n : set.members) {
            Factorization f;
            f.value = n;
            for (u64 p : set.prime_factors(n)) f.factors.push_back({p, 1});
            terms.push_back(proof_f(n, s, set) / g.exact_value(f));
          }
          const auto product = euler_product_bound(y, s, g, table);
          record(r, tree_sum(terms) == *product.exact, g.name() + " s=" + std::to_string(s));
        }
      }
    }
    out.push_back(r);
  }

  {
    IdentityResult r;
    r.name = "f_tuple_oracle";
    for (u64 n : set.members) {
      if (set.prime_factors(n).size() > 4) continue;
      for (unsigned s = 1; s <= 3; ++s)
        record(r, proof_f(n, s, set) == proof_f_tuple_sum(n, s, set),
               "n=" + std::to_string(n) + " s=" + std::to_string(s));
    }
    out.push_back(r);
  }

  {
    IdentityResult r;
    r.name = "f_multiplicative";
    const std::size_t limit = std::min<std::size_t>(set.members.size(), 256);
    for (std::size_t i = 0; i < limit; ++i)
      for (std::size_t j = i; j < limit; ++j) {
        const u64 m = set.members[i], n = set.members[j];
        if (std::gcd(m, n) != 1) continue;
        for (unsigned s = 1; s <= 5; ++s)
          record(r, proof_f(m * n, s, set) == proof_f(m, s, set) * proof_f(n, s, set),
                 "m=" + std::to_string(m) + " n=" + std::to_string(n) + " s=" + std::to_string(s));
      }
    out.push_back(r);
  }

  {
    // (1 + 1/p)^s - 1 < e s / p for s < p, against a rational lower bound for e.
    IdentityResult r;
    r.name = "mean_value_bound";
    const Rational e_lower(mpz_class(2718281828), mpz_class(1000000000));
    for (u64 p : table.primes()) {
      if (p > 1000) break;
      const Rational step = make_rational(p + 1, p);
      Rational power = step;
      for (u64 s = 1; s < p; ++s) {
        record(r, power - 1 < e_lower * from_u64(s) / from_u64(p),
               "p=" + std::to_string(p) + " s=" + std::to_string(s));
        power *= step;
      }
    }
    out.push_back(r);
  }

  {
    IdentityResult r;
    r.name = "totient_divisor_sum";
    for (u64 n = 1; n <= n_max; ++n) {
      const Factorization f = factorize(n, table);
      record(r, totient_ratio(f) == squarefree_inverse_phi_sum(f),
             "n=" + std::to_string(n));
    }
    out.push_back(r);
  }

  {
    IdentityResult r;
    r.name = "phi_multiplicative";
    std::mt19937_64 rng(kSampleSeed);
    std::uniform_int_distribution<u64> dist(1, 1'000'000);
    for (int i = 0; i < 10'000; ++i) {
      const u64 m = dist(rng), n = dist(rng);
      const u64 pm = euler_phi(factorize(m, table)), pn = euler_phi(factorize(n, table));
      const u64 pmn = euler_phi(factorize(m * n, table));
      const bool ok = std::gcd(m, n) == 1 ? pmn == pm * pn : pmn >= pm * pn;
      record(r, ok, "m=" + std::to_string(m) + " n=" + std::to_string(n));
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace tml
