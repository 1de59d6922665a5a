#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tml/arith.hpp"
#include "tml/sequences.hpp"
#include "tml/smooth.hpp"

namespace tml {

// a_n / phi(a_n) for every term, exact (lowest terms) and as a double.
struct TotientRatios {
  std::vector<std::pair<u64, u64>> exact;
  std::vector<double> value;

  std::size_t size() const { return value.size(); }
};

TotientRatios totient_ratios(const SequenceInstance& seq, const PrimeTable& table);

struct MomentSum {
  double value = 0;
  std::optional<Rational> exact;
};

// sum_n (a_n / phi(a_n))^s, 1 <= s <= 64. The float path uses compensated
// summation over fixed 4096-term chunks merged in index order.
MomentSum moment_sum(const TotientRatios& ratios, unsigned s, bool exact);
MomentSum moment_sum(const SequenceInstance& seq, unsigned s, const PrimeTable& table, bool exact);

struct MomentRow {
  unsigned s = 1;
  MomentSum sum;
  double normalized = 0;  // S_s / N
};

struct MomentReport {
  std::string id;
  std::size_t N = 0;
  std::vector<MomentRow> rows;
  double fitted_C = 0;
  unsigned fitted_C_at = 0;  // s attaining the max
};

MomentReport make_moment_report(std::string id, const TotientRatios& ratios,
                                const std::vector<unsigned>& s_values, bool exact);

// Smallest C with S_s / N <= exp(s lnln(s+2) + C s) for every reported s.
double fit_C(const MomentReport& report);
double fit_C(const std::vector<std::pair<unsigned, double>>& normalized_moments);

// #{n : a_n / phi(a_n) > t}, strict.
std::size_t tail_count(const TotientRatios& ratios, double t);
std::size_t tail_count(const SequenceInstance& seq, double t, const PrimeTable& table);

struct TailRow {
  double t = 0;
  std::size_t count = 0;
  double fraction = 0;
  std::optional<double> markov_bound;  // min over reported s of S_s / t^s
  std::optional<u64> chosen_s;         // floor(exp(t e^{-(C+1)})) + 1
  std::optional<double> theoretical;   // exp(s lnln(s+2) + Cs - s ln t) N at chosen_s
};

struct TailReport {
  std::string id;
  std::size_t N = 0;
  std::vector<TailRow> rows;
};

// Moments are optional; without them the Markov and theoretical columns stay empty.
TailReport make_tail_report(std::string id, const TotientRatios& ratios,
                            const std::vector<double>& thresholds, const MomentReport* moments);

// K (c/alpha)^s prod_{p <= y} (1 + ((1 + 1/p)^s - 1) / g(p)).
double moment_bound(double K, double c_over_alpha, unsigned s, double y,
                      const MultiplicativeSpec& g, const PrimeTable& table);

struct RatioConstantFit {
  double c = 0;
  u64 witness = 2;
};

inline constexpr u64 kMaxRatioFitRange = 4'000'000'000ULL;

// max over 2 <= n <= range_max of alpha (n/phi(n)) / prod_{p | n, p <= (ln n)^alpha} (1 + 1/p).
// Needs table.limit() >= sqrt(range_max).
RatioConstantFit ratio_constant_fit(u64 range_max, double alpha, const PrimeTable& table);

u64 markov_s_choice(double t, double C);
double tail_bound_theoretical(double t, double C, u64 s);

struct TailConstants {
  double c1 = 1;
  double c2 = 0;
};

// Fit of count(t) <= c1 exp(-exp(c2 t)) N, with c1 >= 1 raised until every
// reported threshold is feasible.
TailConstants fit_tail_constants(const TailReport& report, std::size_t N);
TailConstants fit_tail_constants(const std::vector<double>& thresholds,
                                 const std::vector<std::size_t>& counts, std::size_t N);

}  // namespace tml
