// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tml/brun_titchmarsh.hpp"
#include "tml/congruence.hpp"
#include "tml/error.hpp"
#include "tml/moments.hpp"
#include "tml/report.hpp"

using namespace tml;

namespace {

// Pinned tolerances and limits.
constexpr double kRuntimeDivisorSum = 10.0;     // seconds
constexpr double kRuntimeEulerProduct = 1.0;
constexpr double kRuntimeTupleOracle = 30.0;
constexpr double kRuntimeTail = 60.0;
constexpr double kMarkovFloatSlack = 1e-9;
constexpr double kStabilityMarginC = 0.1;
constexpr double kTailFractionAt5 = 1e-3;
constexpr double kSyntheticC2Tolerance = 0.10;
constexpr double kOmegaSlack = 1.5;
constexpr double kLinearFitStability = 0.5;

const PrimeTable& table() {
  static const PrimeTable t = sieve_primes(1'000'000);
  return t;
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("[%s] %2d %-28s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", id, name, secs, o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

const std::vector<const char*> kRhoPolys{"0,1", "1,0,1", "-1,0,1", "1,1,0,1", "3,2"};

}  // namespace

int main() {
  table();

  criterion(1, "divisor-sum identity", [] {
    const auto t0 = std::chrono::steady_clock::now();
    u64 checked = 0, bad = 0;
    for (u64 n = 1; n <= 10'000; ++n) {
      const auto f = factorize(n, table());
      for (double y : {2.0, 5.0, 10.0, 100.0}) {
        const auto sides = smooth_divisor_sum(f, y);
        ++checked;
        if (sides.product_side != sides.divisor_side) ++bad;
      }
    }
    const double secs = seconds_since(t0);
    return Outcome{bad == 0 && secs < kRuntimeDivisorSum,
                   fmt("%.0f checked, %.0f mismatches, limit %.0fs", checked, bad, kRuntimeDivisorSum)};
  });

  criterion(2, "Euler-product identity", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<MultiplicativeSpec> gs{MultiplicativeSpec::unit(), MultiplicativeSpec::linear_min(3),
                                             MultiplicativeSpec::shifted_min(2)};
    u64 checked = 0, bad = 0;
    for (double y : {3.0, 7.0, 13.0}) {
      const auto set = enumerate_smooth(y, table());
      for (const auto& g : gs)
        for (unsigned s = 1; s <= 5; ++s) {
          Rational sum = 0;
          for (u64 n : set.members) sum += proof_f(n, s, set) / g.exact_value(factorize(n, table()));
          ++checked;
          if (sum != *euler_product_bound(y, s, g, table()).exact) ++bad;
        }
    }
    const double secs = seconds_since(t0);
    return Outcome{bad == 0 && secs < kRuntimeEulerProduct,
                   fmt("%.0f checked, %.0f mismatches, limit %.0fs", checked, bad, kRuntimeEulerProduct)};
  });

  criterion(3, "f tuple-sum oracle", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto set = enumerate_smooth(7, table());
    u64 checked = 0, bad = 0;
    for (u64 n : set.members)
      for (unsigned s = 1; s <= 3; ++s) {
        ++checked;
        if (proof_f(n, s, set) != oracle::tuple_sum(n, s)) ++bad;
      }
    const double secs = seconds_since(t0);
    return Outcome{bad == 0 && secs < kRuntimeTupleOracle,
                   fmt("%.0f checked, %.0f mismatches, limit %.0fs", checked, bad, kRuntimeTupleOracle)};
  });

  criterion(4, "rho consistency", [] {
    u64 crt_bad = 0, lag_bad = 0, lag_checked = 0;
    for (const char* text : kRhoPolys) {
      const auto f = PolynomialSpec::parse(text);
      for (u64 m = 1; m <= 10'000; ++m)
        if (rho_crt(f, factorize(m, table())).count != rho_bruteforce(f, m).count) ++crt_bad;
      for (u64 p : table().primes()) {
        if (p > 100'000) break;
        ++lag_checked;
        try {
          lagrange_check(f, p);
        } catch (const InvariantViolation&) {
          ++lag_bad;
        }
      }
    }
    return Outcome{crt_bad == 0 && lag_bad == 0,
                   fmt("CRT mismatches %.0f over 5x10^4 moduli; Lagrange %.0f/%.0f violations", crt_bad,
                       lag_bad, lag_checked)};
  });

  criterion(5, "Markov chain", [] {
    u64 bad = 0, checked = 0;
    const auto f = PolynomialSpec::parse("1,0,1");
    {
      const auto r = totient_ratios(gen_poly_int(f, 1e4), table());
      for (unsigned s = 1; s <= 8; ++s) {
        const Rational S = *moment_sum(r, s, true).exact;
        for (unsigned t : {2u, 3u, 4u}) {
          ++checked;
          if (Rational(static_cast<unsigned long>(tail_count(r, t))) * pow(Rational(t), s) > S) ++bad;
        }
      }
    }
    {
      const auto r = totient_ratios(gen_poly_int(f, 1e5), table());
      for (unsigned s = 1; s <= 8; ++s) {
        const double S = moment_sum(r, s, false).value;
        for (double t : {2.0, 3.0, 4.0}) {
          ++checked;
          if (static_cast<double>(tail_count(r, t)) * std::pow(t, s) > S * (1 + kMarkovFloatSlack)) ++bad;
        }
      }
    }
    return Outcome{bad == 0, fmt("%.0f comparisons, %.0f violations", checked, bad)};
  });

  criterion(6, "proof-chain dominance", [] {
    const double alpha = 0.5;
    const auto seq = gen_poly_int(PolynomialSpec::parse("1,0,1"), 1e4);
    const double y = std::max(std::pow(std::log(seq.M), alpha), 2.0);
    const auto g = MultiplicativeSpec::power_root(2);
    const auto omega = omega_hypothesis_check(seq, g, enumerate_smooth(y, table()));
    const auto c = ratio_constant_fit(static_cast<u64>(std::ceil(seq.M)), alpha, table());
    const auto r = totient_ratios(seq, table());
    u64 bad = 0;
    double worst = 0;
    for (unsigned s = 1; s <= 6; ++s) {
      const double S = moment_sum(r, s, false).value;
      const double bound = moment_bound(omega.K, c.c / alpha, s, y, g, table());
      worst = std::max(worst, S / bound);
      if (S > bound) ++bad;
    }
    return Outcome{bad == 0, fmt("K=%.0f c=%.4f, max S_s/bound=%.4f", omega.K, c.c, worst)};
  });

  criterion(7, "fitted-C stability", [] {
    const auto f = PolynomialSpec::parse("1,0,1");
    const std::vector<unsigned> s_values{1, 2, 3, 4, 5, 6, 7, 8};
    const double C = make_moment_report("x1e4", totient_ratios(gen_poly_int(f, 1e4), table()), s_values, false).fitted_C;
    const auto r = totient_ratios(gen_poly_int(f, 1e5), table());
    u64 bad = 0;
    double worst = 0;
    for (unsigned s : s_values) {
      const double S = moment_sum(r, s, false).value;
      const double bound = std::exp(s * std::log(std::log(s + 2.0)) + (C + kStabilityMarginC) * s) *
                           static_cast<double>(r.size());
      worst = std::max(worst, S / bound);
      if (S > bound) ++bad;
    }
    return Outcome{bad == 0, fmt("C(10^4)=%.5f, max S_s/bound at 10^5=%.4f", C, worst)};
  });

  criterion(8, "tail decay", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = totient_ratios(gen_poly_int(PolynomialSpec::parse("0,1"), 1e6), table());
    const std::vector<double> ts{2, 2.5, 3, 3.5, 4, 5};
    const auto rep = make_tail_report("tail", r, ts, nullptr);
    bool decreasing = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
      decreasing = decreasing && rep.rows[i].fraction < rep.rows[i - 1].fraction;
    const double f5 = rep.rows.back().fraction;
    const auto k = fit_tail_constants(rep, r.size());
    bool feasible = k.c2 > 0;
    for (const auto& row : rep.rows)
      feasible = feasible && static_cast<double>(row.count) <=
                                 k.c1 * std::exp(-std::exp(k.c2 * row.t)) * static_cast<double>(r.size()) * (1 + 1e-12);
    const std::size_t N = 1'000'000'000;
    std::vector<double> syn_t{0.5, 1, 1.5, 2, 2.5};
    std::vector<std::size_t> counts;
    for (double t : syn_t) counts.push_back(static_cast<std::size_t>(std::floor(std::exp(-std::exp(t)) * N)));
    const double syn_c2 = fit_tail_constants(syn_t, counts, N).c2;
    const double secs = seconds_since(t0);
    const bool ok = decreasing && f5 <= kTailFractionAt5 && feasible &&
                    std::fabs(syn_c2 - 1) <= kSyntheticC2Tolerance && secs < kRuntimeTail;
    return Outcome{ok, fmt("fraction(5)=%.2e, c2=%.4f, synthetic c2=%.4f", f5, k.c2, syn_c2) +
                           (decreasing ? "" : ", not strictly decreasing") + (feasible ? "" : ", infeasible")};
  });

  criterion(9, "prime-argument decomposition", [] {
    const double x = 1e6;
    const auto f = PolynomialSpec::parse("1,0,1");
    const auto seq = gen_poly_prime(f, x, table());
    u64 checked = 0, bad = 0;
    for (u64 n = 1; n <= 100; ++n) {
      if (!oracle::squarefree(n)) continue;
      const auto roots = rho_crt(f, factorize(n, table()));
      const auto classes = residue_class_counts(x, n, table());
      u64 total = 0;
      for (u64 r : *roots.roots) total += classes[r];
      ++checked;
      if (omega_counter(seq, n) != total) ++bad;
    }
    const auto bt = brun_titchmarsh_check(x, 100, 0.5, table());
    u64 bt5 = 0;
    for (const auto& row : bt.rows) bt5 += row.violations_5x;
    return Outcome{bad == 0 && bt5 == 0,
                   fmt("%.0f moduli, %.0f mismatches; 5x/(phi log x) max ratio %.4f", checked, bad,
                       bt.max_ratio_5x) +
                       (bt5 ? ", class bound violated" : "")};
  });

  criterion(10, "linear-form machinery", [] {
    LinearDeltaSpec spec{1, {0, 2, 6}, 1.0, 20.0};
    const auto g = MultiplicativeSpec::linear_min(3);
    const auto seq20 = gen_linear_delta(spec);
    double worst_omega = 0;
    bool omega_ok = true;
    const double y_rule = std::max(std::pow(std::log(seq20.M), 0.5), 2.0);
    for (double y : {y_rule, 5.0}) {
      const auto fit = omega_hypothesis_check(seq20, g, enumerate_smooth(y, table()));
      const double cap = 3 * spec.eta * spec.log_x;
      worst_omega = std::max(worst_omega, fit.K / cap);
      omega_ok = omega_ok && fit.K <= kOmegaSlack * cap;
    }
    const auto c_fit = [&](const LinearDeltaSpec& sp) {
      const auto r = totient_ratios(gen_linear_delta(sp), table());
      double c = 0;
      for (unsigned s = 1; s <= 8; ++s) {
        const double S = moment_sum(r, s, false).value;
        const double base = std::log(std::max<double>(static_cast<double>(sp.k()), s));
        c = std::max(c, std::pow(S / (sp.eta * sp.log_x), 1.0 / s) / base);
      }
      return c;
    };
    const double c20 = c_fit(spec);
    LinearDeltaSpec wide = spec;
    wide.log_x = 40;
    const double c40 = c_fit(wide);
    const bool stable = std::fabs(c40 / c20 - 1) <= kLinearFitStability;
    return Outcome{omega_ok && stable,
                   fmt("max K/(3 eta ln x)=%.3f; c_fit e^20=%.4f, e^40=%.4f", worst_omega, c20, c40)};
  });

  criterion(11, "determinism", [] {
    std::vector<RunConfig> configs;
    const auto add = [&](std::string cmd, std::string poly, double x) {
      RunConfig c;
      c.command = std::move(cmd);
      c.poly = std::move(poly);
      c.x = x;
      c.reproducible = true;
      configs.push_back(c);
      return &configs.back();
    };
    add("identities", "1,0,1", 1e4)->y = 10;
    add("rho", "1,0,1", 1e4);
    add("moments", "1,0,1", 1e4)->s_values = {1, 2, 3, 4, 5, 6, 7, 8};
    add("tail", "0,1", 1e6)->t_values = {2, 2.5, 3, 3.5, 4, 5};
    add("bounds", "1,0,1", 1e4);
    add("brun-titchmarsh", "0,1", 1e6);
    {
      RunConfig* c = add("omega", "0,1", 1);
      c->family = "linear-delta";
      c->shifts = {0, 2, 6};
      c->log_x = 20;
      c->y = 5;
    }
    u64 differ = 0;
    for (const auto& c : configs) {
      const std::string a = render_json(execute(c).report);
      RunConfig threaded = c;
      threaded.threads = 2;
      const std::string b = render_json(execute(threaded).report);
      if (a != b) ++differ;
    }
    return Outcome{differ == 0, fmt("%.0f reports run twice, %.0f differ", configs.size(), differ)};
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
