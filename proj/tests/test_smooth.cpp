#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tml/error.hpp"
#include "tml/smooth.hpp"

using namespace tml;

namespace {
const PrimeTable& table() {
  static const PrimeTable t = sieve_primes(1'000'000);
  return t;
}

Factorization squarefree_of(u64 n, const SmoothSet& set) {
  Factorization f;
  f.value = n;
  for (u64 p : set.prime_factors(n)) f.factors.push_back({p, 1});
  return f;
}
}  // namespace

TEST_CASE("enumerate_smooth examples") {
  CHECK(enumerate_smooth(2, table()).members == std::vector<u64>{1, 2});
  CHECK(enumerate_smooth(3, table()).members == std::vector<u64>{1, 2, 3, 6});
  const auto s10 = enumerate_smooth(10, table());
  CHECK(s10.members.size() == 16);
  CHECK(s10.members.back() == 210);
  CHECK_THROWS_AS(enumerate_smooth(1.5, table()), DomainError);
  // pi(101) = 26 > 25
  CHECK_THROWS_AS(enumerate_smooth(101, table()), CapacityError);
}

TEST_CASE("smooth set members are exactly the squarefree y-smooth numbers up to the primorial") {
  const auto set = enumerate_smooth(13, table());
  std::vector<u64> ref;
  for (u64 n = 1; n <= 30030; ++n) {
    if (!oracle::squarefree(n)) continue;
    bool smooth = true;
    for (const auto& [p, e] : oracle::trial_factor(n)) smooth = smooth && p <= 13;
    if (smooth) ref.push_back(n);
  }
  CHECK(set.members == ref);
  CHECK(set.members.size() == 64);
}

TEST_CASE("proof_f_at_prime examples") {
  CHECK(proof_f_at_prime(2, 1) == Rational(1, 2));
  CHECK(proof_f_at_prime(2, 2) == Rational(5, 4));
  CHECK(proof_f_at_prime(5, 3) == Rational(91, 125));
  CHECK_THROWS_AS(proof_f_at_prime(2, 0), DomainError);
  CHECK_THROWS_AS(proof_f_at_prime(2, 65), DomainError);
}

TEST_CASE("proof_f equals the binomial sum at primes") {
  for (u64 p : {2, 3, 7, 97}) {
    for (unsigned s = 1; s <= 12; ++s) {
      Rational sum = 0;
      mpz_class binom = 1;
      for (unsigned k = 1; k <= s; ++k) {
        binom = binom * (s - k + 1) / k;
        mpz_class pk;
        mpz_ui_pow_ui(pk.get_mpz_t(), p, k);
        sum += Rational(binom, pk);
      }
      REQUIRE(proof_f_at_prime(p, s) == sum);
    }
  }
}

TEST_CASE("proof_f examples and tuple-sum oracle") {
  const auto set = enumerate_smooth(7, table());
  CHECK(proof_f(1, 4, set) == 1);
  CHECK(proof_f(6, 1, set) == Rational(1, 6));
  // (5/4)(7/9), confirmed by the tuple oracle below
  CHECK(proof_f(6, 2, set) == Rational(35, 36));
  CHECK(oracle::tuple_sum(6, 2) == Rational(35, 36));
  for (u64 n : set.members)
    if (n <= 30)
      for (unsigned s = 1; s <= 3; ++s) REQUIRE(proof_f(n, s, set) == oracle::tuple_sum(n, s));
  CHECK_THROWS_AS(proof_f(4, 1, set), DomainError);
  CHECK_THROWS_AS(proof_f(11, 1, set), DomainError);
}

TEST_CASE("proof_f is multiplicative on coprime members") {
  const auto set = enumerate_smooth(10, table());
  for (u64 m : set.members)
    for (u64 n : set.members)
      if (std::gcd(m, n) == 1)
        for (unsigned s = 1; s <= 4; ++s)
          REQUIRE(proof_f(m * n, s, set) == proof_f(m, s, set) * proof_f(n, s, set));
}

TEST_CASE("MultiplicativeSpec values and parsing") {
  auto lin = MultiplicativeSpec::linear_min(3);
  CHECK(*lin.exact_at_prime_power(2, 1) == 1);
  CHECK(*lin.exact_at_prime_power(5, 1) == Rational(5, 3));
  CHECK(*lin.exact_at_prime_power(5, 2) == 1);
  auto sh = MultiplicativeSpec::shifted_min(2);
  CHECK(*sh.exact_at_prime_power(2, 1) == Rational(1, 2));
  CHECK(*sh.exact_at_prime_power(7, 1) == 3);
  auto pr = MultiplicativeSpec::power_root(2);
  CHECK_FALSE(pr.rational_valued());
  CHECK_FALSE(pr.exact_at_prime_power(2, 1).has_value());
  CHECK(pr.at_prime_power(4, 1) == doctest::Approx(2.0).epsilon(1e-15));
  Factorization f36{36, {{2, 2}, {3, 2}}};
  CHECK(pr.value(f36) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(MultiplicativeSpec::power_root(1).rational_valued());
  CHECK(MultiplicativeSpec::parse("linear-min:3").name() == "linear-min:3");
  CHECK(MultiplicativeSpec::parse("unit").kind() == MultiplicativeSpec::Kind::Unit);
  CHECK_THROWS_AS(MultiplicativeSpec::parse("power-root:x"), DomainError);
  CHECK_THROWS_AS(MultiplicativeSpec::parse("bogus:1"), DomainError);
  CHECK_THROWS_AS(MultiplicativeSpec::custom({{{2, 1}, Rational(0)}}), DomainError);
}

TEST_CASE("euler_product_bound examples") {
  auto unit = MultiplicativeSpec::unit();
  CHECK(*euler_product_bound(3, 1, unit, table()).exact == 2);
  CHECK(*euler_product_bound(3, 2, unit, table()).exact == 4);
  const auto pr = euler_product_bound(10, 1, MultiplicativeSpec::power_root(2), table());
  CHECK_FALSE(pr.exact.has_value());
  CHECK(pr.value == doctest::Approx(1.853354607708981).epsilon(1e-12));
  CHECK(euler_product_bound(1.5, 3, unit, table()).value == 1.0);
}

TEST_CASE("Euler product identity over the smooth set, exactly") {
  const std::vector<MultiplicativeSpec> gs{
      MultiplicativeSpec::unit(), MultiplicativeSpec::linear_min(3),
      MultiplicativeSpec::shifted_min(2), MultiplicativeSpec::power_root(1),
      MultiplicativeSpec::custom({{{2, 1}, Rational(7, 3)}, {{5, 1}, Rational(1, 9)}})};
  for (double y : {2.0, 5.0, 11.0, 37.0}) {
    const auto set = enumerate_smooth(y, table());
    for (const auto& g : gs)
      for (unsigned s = 1; s <= 5; ++s) {
        Rational sum = 0;
        for (u64 n : set.members) sum += proof_f(n, s, set) / g.exact_value(squarefree_of(n, set));
        REQUIRE(sum == *euler_product_bound(y, s, g, table()).exact);
      }
  }
}

TEST_CASE("mean-value bound at primes above s") {
  // (1 + 1/p)^s - 1 < e s / p, with 2.718281828 < e
  const Rational e_lower(2718281828, 1000000000);
  for (u64 p : table().primes()) {
    if (p > 1000) break;
    const Rational step(static_cast<unsigned long>(p + 1), static_cast<unsigned long>(p));
    Rational power = step;
    for (u64 s = 1; s < p; ++s) {
      REQUIRE(power - 1 < e_lower * static_cast<unsigned long>(s) / static_cast<unsigned long>(p));
      power *= step;
    }
  }
}

TEST_CASE("smooth_divisor_sum examples") {
  auto sides = smooth_divisor_sum(factorize(1, table()), 7);
  CHECK(sides.product_side == 1);
  CHECK(sides.divisor_side == 1);
  sides = smooth_divisor_sum(factorize(12, table()), 2);
  CHECK(sides.product_side == Rational(3, 2));
  CHECK(sides.divisor_side == Rational(3, 2));
  sides = smooth_divisor_sum(factorize(30, table()), 4);
  CHECK(sides.product_side == 2);
  CHECK(sides.divisor_side == 2);
}

TEST_CASE("divisor-sum identity against a direct divisor scan") {
  for (u64 n = 1; n <= 3000; ++n) {
    const auto f = factorize(n, table());
    for (double y : {2.0, 5.0, 10.0, 100.0}) {
      Rational direct = 0;
      for (u64 d : oracle::divisors(n)) {
        if (!oracle::squarefree(d)) continue;
        const auto fd = oracle::trial_factor(d);
        if (!fd.empty() && static_cast<double>(fd.back().first) > y) continue;
        direct += Rational(1, static_cast<unsigned long>(d));
      }
      const auto sides = smooth_divisor_sum(f, y);
      REQUIRE(sides.product_side == direct);
      REQUIRE(sides.divisor_side == direct);
    }
  }
}

TEST_CASE("compute_L") {
  const auto& t = table();
  const auto l1 = compute_L(MultiplicativeSpec::power_root(1), 10, 1, t);
  CHECK(l1.partial == doctest::Approx(0.4215192743764172).epsilon(1e-14));
  CHECK(l1.tail_bound == doctest::Approx(0.1));
  CHECK_THROWS_AS(compute_L(MultiplicativeSpec::unit(), 100, 1, t), DivergenceError);

  const auto g = MultiplicativeSpec::shifted_min(2);
  const auto low = compute_L(g, 100, 0.5, t);
  const double reference = compute_L(g, 1'000'000, 0.5, t).partial;
  CHECK(reference == doctest::Approx(1.5463132025481375).epsilon(1e-12));
  CHECK(low.partial <= reference);
  CHECK(reference <= low.partial + low.tail_bound);

  const auto lin = MultiplicativeSpec::linear_min(30);
  const auto lin_low = compute_L(lin, 10, 1, t);
  const double lin_ref = compute_L(lin, 1'000'000, 1, t).partial;
  CHECK(lin_low.partial <= lin_ref);
  CHECK(lin_ref <= lin_low.partial + lin_low.tail_bound);

  for (unsigned d : {1u, 2u, 3u}) {
    const auto pr = MultiplicativeSpec::power_root(d);
    const auto a = compute_L(pr, 1000, 1, t);
    const double ref = compute_L(pr, 1'000'000, 1, t).partial;
    CHECK(ref <= a.partial + a.tail_bound);
  }
  CHECK_THROWS_AS(compute_L(g, 100, 0.9, t), DomainError);  // g(2) = 1/2 < c0
}

TEST_CASE("mertens_prime_sum") {
  const auto& t = table();
  CHECK(mertens_prime_sum(2, t) == 0.5);
  CHECK(mertens_prime_sum(10, t) == doctest::Approx(1.1761904761904762).epsilon(1e-15));
  const double big = mertens_prime_sum(1e6, t);
  CHECK(big == doctest::Approx(2.8873280995676727).epsilon(1e-13));
  CHECK(std::fabs(big - (std::log(std::log(1e6)) + 0.2615)) < 0.01);
  CHECK_THROWS_AS(mertens_prime_sum(2e6, t), BoundsError);
}
