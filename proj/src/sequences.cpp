#include "tml/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "tml/error.hpp"

namespace tml {

namespace {

i128 abs128(i128 v) { return v < 0 ? -v : v; }

u64 checked_value(i128 v, const char* what, i64 at) {
  if (v <= 0)
    throw DomainError(std::string(what) + " takes the nonpositive value " +
                      std::to_string(static_cast<long long>(v)) + " at " + std::to_string(at));
  if (v > static_cast<i128>(kMaxValue))
    throw CapacityError(std::string(what) + " exceeds 2^63 - 1 at " + std::to_string(at));
  return static_cast<u64>(v);
}

}  // namespace

PolynomialSpec::PolynomialSpec(std::vector<i64> coefficients) : coeffs_(std::move(coefficients)) {
  if (coeffs_.size() < 2) throw DomainError("polynomial must have degree d >= 1");
  if (coeffs_.back() <= 0)
    throw DomainError("leading coefficient b_d must be positive (got " +
                      std::to_string(coeffs_.back()) + ")");
  i64 content = 0;
  for (i64 c : coeffs_) content = std::gcd(content, c < 0 ? -c : c);
  if (content != 1)
    throw DomainError("coefficients must be coprime, gcd(b_d, ..., b_0) = " +
                      std::to_string(content));
}

PolynomialSpec PolynomialSpec::parse(const std::string& text) {
  std::vector<i64> coeffs;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      coeffs.push_back(std::stoll(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw DomainError("malformed polynomial coefficient '" + item + "' in \"" + text + "\"");
    }
  }
  return PolynomialSpec(std::move(coeffs));
}

double PolynomialSpec::tau() const {
  double t = 0;
  for (i64 c : coeffs_) t += std::fabs(static_cast<double>(c));
  return t;
}

i64 PolynomialSpec::evaluate(i64 n) const {
  constexpr i128 guard = static_cast<i128>(1) << 125;
  const i128 step = std::max<i128>(abs128(n), 1);
  i128 acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    if (abs128(acc) > guard / step) throw CapacityError("polynomial value overflows at " + std::to_string(n));
    acc = acc * n + *it;
  }
  if (abs128(acc) > static_cast<i128>(kMaxValue))
    throw CapacityError("polynomial value exceeds 2^63 - 1 at " + std::to_string(n));
  return static_cast<i64>(acc);
}

u64 PolynomialSpec::evaluate_mod(u64 r, u64 m) const {
  if (m == 1) return 0;
  u64 acc = 0;
  r %= m;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    const i64 c = *it;
    const u64 cm = c >= 0 ? static_cast<u64>(c) % m
                          : (m - static_cast<u64>(-(c + 1)) % m - 1) % m;
    acc = static_cast<u64>((static_cast<u128>(acc) * r + cm) % m);
  }
  return acc;
}

std::string PolynomialSpec::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(coeffs_[i]);
  }
  return s;
}

void LinearDeltaSpec::validate() const {
  if (a == 0) throw DomainError("linear-delta: a must be a positive integer");
  if (shifts.size() < 2) throw DomainError("linear-delta: need k >= 2 shifts");
  if (!(log_x >= std::log(3.0))) throw DomainError("linear-delta: need x >= 3");
  std::set<i64> seen(shifts.begin(), shifts.end());
  if (seen.size() != shifts.size()) throw DomainError("linear-delta: shifts b_i must be distinct");
  for (i64 b : shifts)
    if (std::fabs(static_cast<double>(b)) > log_x)
      throw DomainError("linear-delta: |b_i| <= log x violated by b_i = " + std::to_string(b));
  const double eta_min = std::pow(log_x, -0.9);
  if (!(eta >= eta_min && eta <= 1.0))
    throw DomainError("linear-delta: eta must lie in [(log x)^(-9/10), 1] = [" +
                      std::to_string(eta_min) + ", 1]");
}

std::vector<i64> LinearDeltaSpec::omega_set() const {
  const i64 bound = static_cast<i64>(std::floor(eta * log_x));
  std::vector<i64> out;
  for (i64 b = -bound; b <= bound; ++b)
    if (std::find(shifts.begin(), shifts.end(), b) == shifts.end()) out.push_back(b);
  return out;
}

std::string family_name(Family f) {
  switch (f) {
    case Family::PolyInt: return "poly-int";
    case Family::PolyPrime: return "poly-prime";
    case Family::LinearDelta: return "linear-delta";
  }
  return "poly-int";
}

Family parse_family(const std::string& text) {
  if (text == "poly-int") return Family::PolyInt;
  if (text == "poly-prime") return Family::PolyPrime;
  if (text == "linear-delta") return Family::LinearDelta;
  throw DomainError("unknown sequence family '" + text + "'");
}

SequenceInstance gen_poly_int(const PolynomialSpec& spec, double x) {
  if (!(x >= 1)) throw DomainError("poly-int requires x >= 1");
  if (x >= 9.2e18) throw CapacityError("poly-int range too large");
  SequenceInstance seq;
  seq.family = Family::PolyInt;
  seq.polynomial = spec;
  seq.M = spec.tau() * std::pow(x, spec.degree());
  const i64 n_max = static_cast<i64>(std::floor(x));
  seq.values.reserve(static_cast<std::size_t>(n_max));
  seq.index.reserve(static_cast<std::size_t>(n_max));
  for (i64 n = 1; n <= n_max; ++n) {
    seq.values.push_back(checked_value(spec.evaluate(n), "f: N -> N", n));
    seq.index.push_back(n);
  }
  return seq;
}

SequenceInstance gen_poly_prime(const PolynomialSpec& spec, double x, const PrimeTable& table) {
  if (!(x >= 2)) throw DomainError("poly-prime requires x >= 2");
  if (x > static_cast<double>(table.limit()))
    throw BoundsError("poly-prime: x exceeds sieve limit " + std::to_string(table.limit()));
  SequenceInstance seq;
  seq.family = Family::PolyPrime;
  seq.polynomial = spec;
  seq.M = spec.tau() * std::pow(x, spec.degree());
  for (u64 p : table.primes()) {
    if (static_cast<double>(p) > x) break;
    seq.values.push_back(checked_value(spec.evaluate(static_cast<i64>(p)), "f: P -> N",
                                       static_cast<i64>(p)));
    seq.index.push_back(static_cast<i64>(p));
  }
  return seq;
}

SequenceInstance gen_linear_delta(const LinearDeltaSpec& spec) {
  spec.validate();
  SequenceInstance seq;
  seq.family = Family::LinearDelta;
  const double k = static_cast<double>(spec.k());
  seq.M = std::pow(static_cast<double>(spec.a), k + 1) * std::pow(2 * spec.log_x, k);
  u128 scale = 1;
  for (std::size_t i = 0; i <= spec.k(); ++i) {
    scale *= spec.a;
    if (scale > kMaxValue) throw CapacityError("linear-delta: a^(k+1) exceeds 2^63 - 1");
  }
  for (i64 b : spec.omega_set()) {
    u128 v = scale;
    for (i64 bi : spec.shifts) {
      const i64 diff = b - bi;
      v *= static_cast<u64>(diff < 0 ? -diff : diff);
      if (v > kMaxValue)
        throw CapacityError("linear-delta: a^(k+1)|f(b)| exceeds 2^63 - 1 at b = " +
                            std::to_string(b));
    }
    seq.values.push_back(static_cast<u64>(v));
    seq.index.push_back(b);
  }
  return seq;
}

std::size_t omega_counter(const SequenceInstance& seq, u64 d) {
  if (d == 0) throw DomainError("omega_counter: d must be positive");
  return static_cast<std::size_t>(
      std::count_if(seq.values.begin(), seq.values.end(), [d](u64 v) { return v % d == 0; }));
}

OmegaFit omega_hypothesis_check(const SequenceInstance& seq, const MultiplicativeSpec& g,
                                const SmoothSet& dset) {
  const std::size_t bits = dset.primes.size();
  // cnt[mask] = #values whose set of D-primes dividing it is exactly mask,
  // then summed over supersets so cnt[mask] = omega(prod of mask primes).
  std::vector<std::uint32_t> cnt(std::size_t{1} << bits, 0);
  for (u64 v : seq.values) {
    std::size_t mask = 0;
    for (std::size_t i = 0; i < bits; ++i)
      if (v % dset.primes[i] == 0) mask |= std::size_t{1} << i;
    ++cnt[mask];
  }
  for (std::size_t i = 0; i < bits; ++i)
    for (std::size_t m = 0; m < cnt.size(); ++m)
      if (!(m & (std::size_t{1} << i))) cnt[m] += cnt[m | (std::size_t{1} << i)];

  OmegaFit fit;
  fit.omega.reserve(dset.members.size());
  bool first = true;
  for (u64 n : dset.members) {
    Factorization f;
    f.value = n;
    std::size_t mask = 0;
    for (std::size_t i = 0; i < bits; ++i) {
      if (n % dset.primes[i] == 0) {
        mask |= std::size_t{1} << i;
        f.factors.push_back({dset.primes[i], 1});
      }
    }
    const std::size_t w = cnt[mask];
    fit.omega.push_back(w);
    const double weighted = static_cast<double>(w) * g.value(f);
    if (first || weighted > fit.K) {
      fit.K = weighted;
      fit.witness = n;
      first = false;
    }
  }
  if (seq.family == Family::PolyInt && g.kind() == MultiplicativeSpec::Kind::PowerRoot &&
      seq.N() > 0)
    fit.gamma = fit.K / static_cast<double>(seq.N());
  return fit;
}

}  // namespace tml
