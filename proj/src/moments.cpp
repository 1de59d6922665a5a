#include "tml/moments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "tml/error.hpp"
#include "tml/parallel.hpp"
#include "tml/summation.hpp"

namespace tml {

namespace {

constexpr std::size_t kChunk = 4096;

void check_s(unsigned s) {
  if (s == 0 || s > 64) throw DomainError("moment exponent s must lie in [1, 64]");
}

double lnln(double v) { return std::log(std::log(v)); }

}  // namespace

TotientRatios totient_ratios(const SequenceInstance& seq, const PrimeTable& table) {
  TotientRatios r;
  r.exact.resize(seq.N());
  r.value.resize(seq.N());
  for_each_chunk(seq.N(), kChunk, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const Factorization f = factorize(seq.values[i], table);
      r.exact[i] = totient_ratio_parts(f);
      r.value[i] = totient_ratio_double(f);
    }
  });
  return r;
}

MomentSum moment_sum(const TotientRatios& ratios, unsigned s, bool exact) {
  check_s(s);
  const std::size_t n = ratios.size();
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<CompensatedSum> partial(chunks);
  std::vector<Rational> exact_partial(exact ? chunks : 0);
  for_each_chunk(n, kChunk, [&](std::size_t c, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) partial[c].add(std::pow(ratios.value[i], static_cast<int>(s)));
    if (exact) {
      std::vector<Rational> terms;
      terms.reserve(e - b);
      for (std::size_t i = b; i < e; ++i)
        terms.push_back(pow(make_rational(ratios.exact[i].first, ratios.exact[i].second), s));
      exact_partial[c] = tree_sum(terms);
    }
  });
  MomentSum out;
  CompensatedSum total;
  for (const auto& p : partial) total.add(p);
  out.value = total.value();
  if (exact) out.exact = tree_sum(exact_partial);
  return out;
}

MomentSum moment_sum(const SequenceInstance& seq, unsigned s, const PrimeTable& table, bool exact) {
  return moment_sum(totient_ratios(seq, table), s, exact);
}

MomentReport make_moment_report(std::string id, const TotientRatios& ratios,
                                const std::vector<unsigned>& s_values, bool exact) {
  MomentReport rep;
  rep.id = std::move(id);
  rep.N = ratios.size();
  for (unsigned s : s_values) {
    MomentRow row;
    row.s = s;
    row.sum = moment_sum(ratios, s, exact);
    row.normalized = rep.N ? row.sum.value / static_cast<double>(rep.N) : 0.0;
    rep.rows.push_back(std::move(row));
  }
  if (!rep.rows.empty() && rep.N > 0) {
    rep.fitted_C = fit_C(rep);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& row : rep.rows) {
      const double c = (std::log(row.normalized) - row.s * lnln(row.s + 2.0)) / row.s;
      if (c > best) {
        best = c;
        rep.fitted_C_at = row.s;
      }
    }
  }
  return rep;
}

double fit_C(const std::vector<std::pair<unsigned, double>>& normalized_moments) {
  if (normalized_moments.empty()) throw DomainError("fit_C: report has no moment exponents");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [s, v] : normalized_moments) {
    if (s == 0 || !(v > 0)) throw DomainError("fit_C: need s >= 1 and S_s / N > 0");
    best = std::max(best, (std::log(v) - s * lnln(s + 2.0)) / s);
  }
  return best;
}

double fit_C(const MomentReport& report) {
  std::vector<std::pair<unsigned, double>> v;
  for (const auto& row : report.rows) v.emplace_back(row.s, row.normalized);
  return fit_C(v);
}

std::size_t tail_count(const TotientRatios& ratios, double t) {
  if (!(t > 0)) throw DomainError("tail threshold t must be positive");
  // Compare exactly: num/den > t  <=>  num > t * den, evaluated in rationals only
  // when the double comparison is too close to call.
  const Rational tq = from_double(t);
  std::size_t count = 0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    const double v = ratios.value[i];
    if (v > t * (1 + 1e-12)) {
      ++count;
    } else if (v >= t * (1 - 1e-12)) {
      if (make_rational(ratios.exact[i].first, ratios.exact[i].second) > tq) ++count;
    }
  }
  return count;
}

std::size_t tail_count(const SequenceInstance& seq, double t, const PrimeTable& table) {
  return tail_count(totient_ratios(seq, table), t);
}

TailReport make_tail_report(std::string id, const TotientRatios& ratios,
                            const std::vector<double>& thresholds, const MomentReport* moments) {
  TailReport rep;
  rep.id = std::move(id);
  rep.N = ratios.size();
  for (double t : thresholds) {
    TailRow row;
    row.t = t;
    row.count = tail_count(ratios, t);
    row.fraction = rep.N ? static_cast<double>(row.count) / rep.N : 0.0;
    if (moments && !moments->rows.empty()) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& m : moments->rows)
        best = std::min(best, m.sum.value / std::pow(t, static_cast<int>(m.s)));
      row.markov_bound = best;
      try {
        row.chosen_s = markov_s_choice(t, moments->fitted_C);
        row.theoretical =
            tail_bound_theoretical(t, moments->fitted_C, *row.chosen_s) * static_cast<double>(rep.N);
      } catch (const CapacityError&) {
        // t too large for the s choice; leave the columns empty.
      }
    }
    rep.rows.push_back(row);
  }
  return rep;
}

double moment_bound(double K, double c_over_alpha, unsigned s, double y,
                      const MultiplicativeSpec& g, const PrimeTable& table) {
  if (!(K > 0) || !(c_over_alpha > 0)) throw DomainError("K and c/alpha must be positive");
  const double product = euler_product_bound(y, s, g, table).value;
  return K * std::pow(c_over_alpha, static_cast<int>(s)) * product;
}

RatioConstantFit ratio_constant_fit(u64 range_max, double alpha, const PrimeTable& table) {
  if (!(alpha > 0 && alpha <= 1)) throw DomainError("alpha must lie in (0, 1]");
  if (range_max < 2 || range_max > kMaxRatioFitRange)
    throw BoundsError("ratio_constant_fit: range_max must lie in [2, 4e9]");
  u64 root = static_cast<u64>(std::sqrt(static_cast<double>(range_max)));
  while (root * root > range_max) --root;
  while ((root + 1) * (root + 1) <= range_max) ++root;
  if (table.limit() < root)
    throw BoundsError("ratio_constant_fit: sieve limit must cover sqrt(range_max) = " + std::to_string(root));

  std::vector<u64> sieving;
  for (u64 p : table.primes()) {
    if (p > root) break;
    sieving.push_back(p);
  }
  // Primes that can ever fall under the (ln n)^alpha cutoff get a mask bit.
  const double max_cut = std::pow(std::log(static_cast<double>(range_max)), alpha);
  std::vector<u64> small;
  for (u64 p : table.primes()) {
    if (static_cast<double>(p) > max_cut) break;
    small.push_back(p);
  }
  if (small.size() > 16) throw CapacityError("ratio_constant_fit: too many cutoff primes");
  // small[i] counts toward the product once n >= active_from[i]; found by
  // bisection on the same monotone predicate used in the definition.
  const auto under_cut = [alpha](u64 p, u64 n) {
    return static_cast<double>(p) <= std::pow(std::log(static_cast<double>(n)), alpha);
  };
  std::vector<u64> active_from(small.size());
  for (std::size_t i = 0; i < small.size(); ++i) {
    u64 lo = 2, hi = range_max + 1;
    while (lo < hi) {
      const u64 mid = lo + (hi - lo) / 2;
      if (under_cut(small[i], mid)) hi = mid;
      else lo = mid + 1;
    }
    active_from[i] = lo;
  }

  constexpr u64 kSegment = 1 << 16;
  const u64 count = range_max - 1;  // n = 2 .. range_max
  const std::size_t chunks = (count + kSegment - 1) / kSegment;
  std::vector<RatioConstantFit> best(chunks);

  for_each_chunk(count, kSegment, [&](std::size_t c, std::size_t b, std::size_t e) {
    const u64 lo = b + 2, hi = e + 2;  // [lo, hi)
    const std::size_t len = hi - lo;
    std::vector<u64> acc(len, 1);
    std::vector<double> ratio(len, 1.0);
    std::vector<std::uint16_t> mask(len, 0);
    for (std::size_t i = 0; i < sieving.size(); ++i) {
      const u64 p = sieving[i];
      const double factor = static_cast<double>(p) / static_cast<double>(p - 1);
      const std::uint16_t bit = i < small.size() ? static_cast<std::uint16_t>(1u << i) : 0;
      for (u64 j = (lo + p - 1) / p * p; j < hi; j += p) {
        ratio[j - lo] *= factor;
        acc[j - lo] *= p;
        mask[j - lo] |= bit;
      }
      for (u64 q = p * p; q < hi; q *= p) {
        for (u64 j = (lo + q - 1) / q * q; j < hi; j += q) acc[j - lo] *= p;
        if (q > hi / p) break;
      }
    }
    RatioConstantFit local{-1.0, lo};
    for (u64 n = lo; n < hi; ++n) {
      const std::size_t k = n - lo;
      double r = ratio[k];
      const u64 rest = n / acc[k];
      if (rest > 1) r *= static_cast<double>(rest) / static_cast<double>(rest - 1);
      double prod = 1.0;
      for (unsigned bits = mask[k]; bits; bits &= bits - 1) {
        const int i = std::countr_zero(bits);
        if (n >= active_from[i]) prod *= static_cast<double>(small[i] + 1) / static_cast<double>(small[i]);
      }
      const double value = alpha * r / prod;
      if (value > local.c) local = {value, n};
    }
    best[c] = local;
  });

  RatioConstantFit out{-1.0, 2};
  for (const auto& b : best)
    if (b.c > out.c) out = b;
  return out;
}

u64 markov_s_choice(double t, double C) {
  if (!(t > 0)) throw DomainError("t must be positive");
  const double v = t * std::exp(-(C + 1));
  if (v > 40 * std::log(2.0)) throw CapacityError("s choice exceeds 2^40 for t = " + std::to_string(t));
  return static_cast<u64>(std::floor(std::exp(v))) + 1;
}

double tail_bound_theoretical(double t, double C, u64 s) {
  if (!(t > 0) || s == 0) throw DomainError("need t > 0 and s >= 1");
  const double sd = static_cast<double>(s);
  return std::exp(sd * lnln(sd + 2) + C * sd - sd * std::log(t));
}

TailConstants fit_tail_constants(const std::vector<double>& thresholds,
                                 const std::vector<std::size_t>& counts, std::size_t N) {
  if (thresholds.size() != counts.size()) throw DomainError("thresholds and counts differ in length");
  std::vector<double> ts, log_frac;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    ts.push_back(thresholds[i]);
    log_frac.push_back(std::log(static_cast<double>(counts[i]) / static_cast<double>(N)));
  }
  if (ts.size() < 3)
    throw InsufficientDataError("tail fit needs at least 3 thresholds with nonzero counts, got " +
                                std::to_string(ts.size()));

  // u = ln c1 must keep u - ln(frac) > 0 at every point.
  double u_min = 0;
  for (double lf : log_frac) u_min = std::max(u_min, lf);
  const bool open_left = u_min > 0 ||
                         std::any_of(log_frac.begin(), log_frac.end(), [](double v) { return v >= 0; });
  if (open_left) u_min = std::nextafter(u_min, INFINITY) + 1e-9;

  double tt = 0;
  for (double t : ts) tt += t * t;
  auto slope = [&](double u) {
    double zt = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) zt += std::log(u - log_frac[i]) * ts[i];
    return zt / tt;
  };
  auto sse = [&](double u) {
    const double c2 = slope(u);
    double r = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double z = std::log(u - log_frac[i]) - c2 * ts[i];
      r += z * z;
    }
    return r;
  };

  constexpr int kGrid = 2000;
  constexpr double kSpan = 20.0;
  int best_j = 0;
  double best_val = sse(u_min);
  for (int j = 1; j <= kGrid; ++j) {
    const double u = u_min + kSpan * (static_cast<double>(j) / kGrid) * (static_cast<double>(j) / kGrid);
    const double v = sse(u);
    if (v < best_val) {
      best_val = v;
      best_j = j;
    }
  }
  auto grid = [&](int j) {
    j = std::clamp(j, 0, kGrid);
    return u_min + kSpan * (static_cast<double>(j) / kGrid) * (static_cast<double>(j) / kGrid);
  };
  double a = grid(best_j - 1), b = grid(best_j + 1);
  const double phi = (std::sqrt(5.0) - 1) / 2;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = sse(x1), f2 = sse(x2);
  for (int it = 0; it < 100; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = sse(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = sse(x2);
    }
  }
  double u = (a + b) / 2;
  if (sse(u) > best_val) u = grid(best_j);

  TailConstants out;
  out.c2 = slope(u);
  double log_c1 = u;
  for (std::size_t i = 0; i < ts.size(); ++i)
    log_c1 = std::max(log_c1, log_frac[i] + std::exp(out.c2 * ts[i]));
  out.c1 = std::nextafter(std::exp(log_c1), INFINITY);
  return out;
}

TailConstants fit_tail_constants(const TailReport& report, std::size_t N) {
  std::vector<double> ts;
  std::vector<std::size_t> counts;
  for (const auto& row : report.rows) {
    ts.push_back(row.t);
    counts.push_back(row.count);
  }
  return fit_tail_constants(ts, counts, N);
}

}  // namespace tml
