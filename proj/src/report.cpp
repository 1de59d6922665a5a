#include "tml/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "tml/brun_titchmarsh.hpp"
#include "tml/congruence.hpp"
#include "tml/error.hpp"
#include "tml/identities.hpp"
#include "tml/moments.hpp"
#include "tml/parallel.hpp"
#include "tml/sequences.hpp"
#include "tml/sieve_cache.hpp"
#include "tml/smooth.hpp"

namespace tml {

using json = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kCommands{"moments",    "tail",           "bounds",    "omega", "rho",
                                         "identities", "brun-titchmarsh", "report-all"};

constexpr u64 kMinSieve = 1 << 20;
constexpr double kRelSlack = 1e-12;
constexpr double kMarkovFloatSlack = 1e-9;

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double lnln(double v) { return std::log(std::log(v)); }

// Results of one command: rows for "results", constants, and named checks.
struct Section {
  std::string name;
  json rows = json::array();
  json fitted = json::object();
  json checks = json::object();
  bool passed = true;

  void check(const std::string& key, u64 checked, u64 failures) {
    checks[key] = {{"checked", checked}, {"failures", failures}};
    if (failures) passed = false;
  }
};

class Context {
 public:
  explicit Context(const RunConfig& c) : config(c) {}

  const RunConfig& config;

  const PrimeTable& table() {
    if (!table_) table_ = load_prime_table(sieve_limit());
    return *table_;
  }

  const SequenceInstance& sequence() {
    if (!seq_) {
      const Family family = parse_family(config.family);
      switch (family) {
        case Family::PolyInt:
          seq_ = gen_poly_int(PolynomialSpec::parse(config.poly), config.x);
          break;
        case Family::PolyPrime:
          seq_ = gen_poly_prime(PolynomialSpec::parse(config.poly), config.x, table());
          break;
        case Family::LinearDelta:
          seq_ = gen_linear_delta(linear_spec());
          break;
      }
    }
    return *seq_;
  }

  LinearDeltaSpec linear_spec() const {
    LinearDeltaSpec spec;
    spec.a = config.a;
    spec.shifts = config.shifts;
    spec.eta = config.eta;
    spec.log_x = config.log_x.value_or(std::log(config.x));
    return spec;
  }

  const TotientRatios& ratios() {
    if (!ratios_) ratios_ = totient_ratios(sequence(), table());
    return *ratios_;
  }

  MultiplicativeSpec g() {
    if (config.g) return MultiplicativeSpec::parse(*config.g);
    switch (parse_family(config.family)) {
      case Family::PolyInt: return MultiplicativeSpec::power_root(PolynomialSpec::parse(config.poly).degree());
      case Family::PolyPrime: return MultiplicativeSpec::shifted_min(PolynomialSpec::parse(config.poly).degree());
      case Family::LinearDelta: return MultiplicativeSpec::linear_min(static_cast<unsigned>(config.shifts.size()));
    }
    return MultiplicativeSpec::unit();
  }

  double y() {
    if (config.y) return *config.y;
    return std::max(std::pow(std::log(sequence().M), config.alpha), 2.0);
  }

  std::string id() const {
    if (config.family == "linear-delta") {
      std::string s = "linear-delta:a=" + std::to_string(config.a) + ";shifts=";
      for (std::size_t i = 0; i < config.shifts.size(); ++i)
        s += (i ? "," : "") + std::to_string(config.shifts[i]);
      return s;
    }
    return config.family + ":" + config.poly;
  }

  const MomentReport& moments() {
    if (!moments_) moments_ = make_moment_report(id(), ratios(), config.s_values, config.exact);
    return *moments_;
  }

  u64 ratio_fit_range(bool* capped) {
    if (config.range_max) return *config.range_max;
    const double m = std::ceil(sequence().M);
    *capped = m > static_cast<double>(kMaxRatioFitRange);
    return *capped ? kMaxRatioFitRange : std::max<u64>(2, static_cast<u64>(m));
  }

 private:
  u64 sieve_limit() const {
    if (config.sieve_limit) return *config.sieve_limit;
    double need = kMinSieve;
    if (config.family == "poly-prime" || config.command == "brun-titchmarsh") need = std::max(need, config.x);
    if (config.command == "identities") need = std::max(need, static_cast<double>(config.n_max));
    if (config.command == "rho") need = std::max(need, static_cast<double>(config.m_max));
    if (config.range_max) need = std::max(need, std::sqrt(static_cast<double>(*config.range_max)) + 1);
    if (config.command == "bounds" || config.command == "report-all")
      need = std::max(need, std::sqrt(static_cast<double>(kMaxRatioFitRange)) + 1);
    return static_cast<u64>(std::min(std::ceil(need), static_cast<double>(kMaxSieveLimit)));
  }

  std::optional<PrimeTable> table_;
  std::optional<SequenceInstance> seq_;
  std::optional<TotientRatios> ratios_;
  std::optional<MomentReport> moments_;
};

double power_mean_bound(unsigned s, double C, std::size_t N) {
  return std::exp(s * lnln(s + 2.0) + C * s) * static_cast<double>(N);
}

Section moments_section(Context& ctx) {
  Section sec{"moments"};
  const MomentReport& rep = ctx.moments();
  u64 below_n = 0, nonmonotone = 0, bound_fail = 0;
  double prev = 0;
  for (const auto& row : rep.rows) {
    json r;
    r["s"] = row.s;
    r["S_s"] = row.sum.value;
    if (row.sum.exact) r["S_s_exact"] = to_string(*row.sum.exact);
    r["normalized"] = row.normalized;
    const double bound = power_mean_bound(row.s, rep.fitted_C, rep.N);
    r["power_mean_bound"] = bound;
    sec.rows.push_back(r);
    if (row.sum.exact ? *row.sum.exact < from_u64(rep.N) : row.sum.value < rep.N * (1 - kRelSlack))
      ++below_n;
    if (row.normalized < prev * (1 - kRelSlack)) ++nonmonotone;
    prev = row.normalized;
    if (row.sum.value > bound * (1 + kRelSlack)) ++bound_fail;
  }
  sec.fitted["N"] = rep.N;
  sec.fitted["C"] = rep.fitted_C;
  sec.fitted["C_attained_at_s"] = rep.fitted_C_at;
  sec.check("moment_at_least_N", rep.rows.size(), below_n);
  sec.check("normalized_nondecreasing_in_s", rep.rows.size(), nonmonotone);
  sec.check("power_mean_bound_with_fitted_C", rep.rows.size(), bound_fail);
  return sec;
}

Section tail_section(Context& ctx) {
  Section sec{"tail"};
  const MomentReport& mom = ctx.moments();
  const TailReport rep = make_tail_report(ctx.id(), ctx.ratios(), ctx.config.t_values, &mom);
  u64 markov_checked = 0, markov_fail = 0, order_fail = 0;
  std::vector<std::pair<double, std::size_t>> by_t;
  for (const auto& row : rep.rows) {
    json r;
    r["t"] = row.t;
    r["count"] = row.count;
    r["fraction"] = row.fraction;
    r["markov_bound"] = row.markov_bound ? json(*row.markov_bound) : json(nullptr);
    r["chosen_s"] = row.chosen_s ? json(*row.chosen_s) : json(nullptr);
    r["theoretical_bound"] = row.theoretical ? json(*row.theoretical) : json(nullptr);
    sec.rows.push_back(r);
    by_t.emplace_back(row.t, row.count);
    for (const auto& m : mom.rows) {
      ++markov_checked;
      bool ok;
      if (m.sum.exact) {
        ok = from_u64(row.count) * pow(from_double(row.t), m.s) <= *m.sum.exact;
      } else {
        ok = row.count * std::pow(row.t, static_cast<int>(m.s)) <= m.sum.value * (1 + kMarkovFloatSlack);
      }
      if (!ok) ++markov_fail;
    }
  }
  std::sort(by_t.begin(), by_t.end());
  for (std::size_t i = 1; i < by_t.size(); ++i)
    if (by_t[i].second > by_t[i - 1].second) ++order_fail;
  sec.check("markov_chain", markov_checked, markov_fail);
  sec.check("count_nonincreasing_in_t", by_t.empty() ? 0 : by_t.size() - 1, order_fail);
  sec.fitted["N"] = rep.N;
  sec.fitted["C"] = mom.fitted_C;
  try {
    const TailConstants tc = fit_tail_constants(rep, rep.N);
    sec.fitted["c1"] = tc.c1;
    sec.fitted["c2"] = tc.c2;
    u64 infeasible = 0;
    for (const auto& row : rep.rows)
      if (row.count > tc.c1 * std::exp(-std::exp(tc.c2 * row.t)) * rep.N * (1 + kRelSlack)) ++infeasible;
    sec.check("tail_fit_feasible", rep.rows.size(), infeasible);
  } catch (const InsufficientDataError& e) {
    sec.fitted["c1"] = nullptr;
    sec.fitted["c2"] = nullptr;
    sec.fitted["tail_fit_note"] = e.what();
  }
  return sec;
}

Section omega_section(Context& ctx) {
  Section sec{"omega"};
  const SequenceInstance& seq = ctx.sequence();
  const MultiplicativeSpec g = ctx.g();
  const double y = ctx.y();
  const SmoothSet dset = enumerate_smooth(y, ctx.table());
  const OmegaFit fit = omega_hypothesis_check(seq, g, dset);
  std::map<u64, std::size_t> omega_of;
  for (std::size_t i = 0; i < dset.members.size(); ++i) {
    const u64 n = dset.members[i];
    omega_of[n] = fit.omega[i];
    Factorization f;
    f.value = n;
    for (u64 p : dset.prime_factors(n)) f.factors.push_back({p, 1});
    const double gn = g.value(f);
    sec.rows.push_back({{"n", n}, {"omega", fit.omega[i]}, {"g", gn},
                        {"omega_times_g", static_cast<double>(fit.omega[i]) * gn}});
  }
  u64 mono_checked = 0, mono_fail = 0;
  for (u64 n : dset.members)
    for (u64 p : dset.primes)
      if (n % p != 0) {
        ++mono_checked;
        if (omega_of[n * p] > omega_of[n]) ++mono_fail;
      }
  sec.check("omega_monotone_under_divisibility", mono_checked, mono_fail);
  if (seq.polynomial) {
    u64 checked = 0, fail = 0, count_fail = 0;
    for (u64 n : dset.members) {
      const u64 rho = rho_crt(*seq.polynomial, factorize(n, ctx.table())).count;
      ++checked;
      if (rho == 0 && omega_of[n] != 0) ++fail;
      if (seq.family == Family::PolyInt && n <= seq.N()) {
        const double expect = static_cast<double>(rho) * seq.N() / n;
        if (std::fabs(omega_of[n] - expect) > rho + 1e-9) ++count_fail;
      }
    }
    sec.check("omega_zero_when_rho_zero", checked, fail);
    if (seq.family == Family::PolyInt) sec.check("omega_near_rho_N_over_d", checked, count_fail);
  }
  sec.fitted["y"] = y;
  sec.fitted["g"] = g.name();
  sec.fitted["K"] = fit.K;
  sec.fitted["K_witness"] = fit.witness;
  sec.fitted["gamma"] = fit.gamma ? json(*fit.gamma) : json(nullptr);
  return sec;
}

Section bounds_section(Context& ctx) {
  Section sec{"bounds"};
  const RunConfig& cfg = ctx.config;
  const SequenceInstance& seq = ctx.sequence();
  const MultiplicativeSpec g = ctx.g();
  const double y = ctx.y();
  const SmoothSet dset = enumerate_smooth(y, ctx.table());
  const OmegaFit omega = omega_hypothesis_check(seq, g, dset);
  bool capped = false;
  const u64 range = ctx.ratio_fit_range(&capped);
  const RatioConstantFit ratio_fit = ratio_constant_fit(range, cfg.alpha, ctx.table());
  const double c_over_alpha = ratio_fit.c / cfg.alpha;
  const MomentReport& mom = ctx.moments();

  const bool linear = seq.family == Family::LinearDelta;
  double lin_c = 0, a_ratio = 1;
  LinearDeltaSpec lin;
  if (linear) {
    lin = ctx.linear_spec();
    a_ratio = totient_ratio_double(factorize(lin.a, ctx.table()));
  }

  u64 fail = 0;
  for (const auto& row : mom.rows) {
    const auto product = euler_product_bound(y, row.s, g, ctx.table());
    const double bound = moment_bound(omega.K, c_over_alpha, row.s, y, g, ctx.table());
    const bool holds = row.sum.value <= bound * (1 + kRelSlack);
    if (!holds) ++fail;
    json r;
    r["s"] = row.s;
    r["S_s"] = row.sum.value;
    r["euler_product"] = product.value;
    if (product.exact) r["euler_product_exact"] = to_string(*product.exact);
    r["moment_bound"] = bound;
    r["moment_bound_holds"] = holds;
    r["power_mean_bound"] = power_mean_bound(row.s, mom.fitted_C, mom.N);
    if (linear) {
      const double scale = lin.eta * lin.log_x;
      const double logk = std::log(std::max<double>(lin.k(), row.s));
      const double c = std::pow(row.sum.value / scale, 1.0 / row.s) / (a_ratio * logk);
      r["linear_c"] = c;
      lin_c = std::max(lin_c, c);
    }
    sec.rows.push_back(r);
  }
  sec.check("moment_bound_dominance", mom.rows.size(), fail);

  sec.fitted["N"] = mom.N;
  sec.fitted["M"] = seq.M;
  sec.fitted["alpha"] = cfg.alpha;
  sec.fitted["y"] = y;
  sec.fitted["g"] = g.name();
  sec.fitted["K"] = omega.K;
  sec.fitted["K_witness"] = omega.witness;
  sec.fitted["gamma"] = omega.gamma ? json(*omega.gamma) : json(nullptr);
  sec.fitted["ratio_c"] = ratio_fit.c;
  sec.fitted["ratio_c_witness"] = ratio_fit.witness;
  sec.fitted["ratio_c_range"] = range;
  sec.fitted["ratio_c_range_capped"] = capped;
  sec.fitted["C"] = mom.fitted_C;
  if (linear) sec.fitted["linear_c"] = lin_c;
  try {
    double c0 = 1.0;
    if (g.kind() == MultiplicativeSpec::Kind::ShiftedMin) c0 = 0.5;
    const u64 P = std::min<u64>(100'000, ctx.table().limit());
    const PrimeSeriesBound L = compute_L(g, P, c0, ctx.table());
    sec.fitted["L_partial"] = L.partial;
    sec.fitted["L_tail_bound"] = L.tail_bound;
  } catch (const DivergenceError&) {
    sec.fitted["L_partial"] = nullptr;
    sec.fitted["L_tail_bound"] = nullptr;
  } catch (const DomainError&) {
    sec.fitted["L_partial"] = nullptr;
    sec.fitted["L_tail_bound"] = nullptr;
  }
  return sec;
}

Section rho_section(Context& ctx) {
  Section sec{"rho"};
  const PolynomialSpec f = PolynomialSpec::parse(ctx.config.poly);
  const u64 m_max = ctx.config.m_max;
  if (m_max > 100'000) throw BoundsError("rho: m_max must not exceed 10^5");
  u64 mismatch = 0;
  for (u64 m = 1; m <= m_max; ++m) {
    const u64 brute = rho_bruteforce(f, m).count;
    const u64 crt = rho_crt(f, factorize(m, ctx.table())).count;
    if (brute != crt) ++mismatch;
    const double d = f.degree();
    sec.rows.push_back({{"m", m},
                        {"rho", brute},
                        {"rho_crt", crt},
                        {"ratio", static_cast<double>(brute) / (d * std::pow(static_cast<double>(m), 1 - 1 / d))}});
  }
  sec.check("crt_matches_bruteforce", m_max, mismatch);
  u64 lag_checked = 0, lag_fail = 0;
  for (u64 p : ctx.table().primes()) {
    if (p > m_max) break;
    ++lag_checked;
    try {
      lagrange_check(f, p);
    } catch (const InvariantViolation&) {
      ++lag_fail;
    }
  }
  sec.check("lagrange_bound", lag_checked, lag_fail);
  const RatioWitness k = konyagin_ratio(f, m_max, ctx.table());
  sec.fitted["konyagin_ratio"] = k.max_ratio;
  sec.fitted["konyagin_witness"] = k.witness;
  return sec;
}

Section identities_section(Context& ctx) {
  Section sec{"identities"};
  const double y = ctx.config.y.value_or(10.0);
  for (const auto& r : run_identity_suite(y, ctx.config.n_max, ctx.table())) {
    sec.rows.push_back({{"identity", r.name},
                        {"checked", r.checked},
                        {"failures", r.failures},
                        {"first_failure", r.first_failure}});
    sec.check(r.name, r.checked, r.failures);
  }
  return sec;
}

Section brun_titchmarsh_section(Context& ctx) {
  Section sec{"brun-titchmarsh"};
  const auto rep = brun_titchmarsh_check(ctx.config.x, ctx.config.k_max, ctx.config.epsilon, ctx.table());
  u64 classes = 0;
  for (const auto& row : rep.rows) {
    classes += row.classes;
    sec.rows.push_back({{"k", row.k},
                        {"phi_k", row.phi_k},
                        {"classes", row.classes},
                        {"max_count", row.max_count},
                        {"max_ratio", row.max_ratio},
                        {"max_ratio_5x", row.max_ratio_5x},
                        {"violations", row.violations},
                        {"violations_5x", row.violations_5x}});
  }
  sec.check("brun_titchmarsh_bounds", classes, rep.violations);
  sec.fitted["max_ratio"] = rep.max_ratio;
  sec.fitted["max_ratio_5x"] = rep.max_ratio_5x;
  return sec;
}

}  // namespace

void RunConfig::validate() const {
  if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end())
    throw DomainError("unknown command '" + command + "'");
  parse_family(family);
  if (family != "linear-delta") PolynomialSpec::parse(poly);
  if (!(alpha > 0 && alpha <= 1)) throw DomainError("alpha must lie in (0, 1]");
  if (y && !(*y >= 2)) throw DomainError("y must be at least 2");
  if (!(x > 0)) throw DomainError("x must be positive");
  for (unsigned s : s_values)
    if (s == 0 || s > 64) throw DomainError("moment exponents must lie in [1, 64]");
  if (s_values.empty()) throw DomainError("need at least one moment exponent s");
  for (double t : t_values)
    if (!(t > 0)) throw DomainError("tail thresholds must be positive");
  if (format != "json" && format != "csv") throw DomainError("format must be json or csv");
  if (!(epsilon > 0)) throw DomainError("epsilon must be positive");
  if (g) MultiplicativeSpec::parse(*g);
  if (threads == 0) throw DomainError("threads must be positive");
}

json RunConfig::to_json() const {
  json j;
  j["command"] = command;
  j["family"] = family;
  if (family == "linear-delta") {
    j["a"] = a;
    j["shifts"] = shifts;
    j["eta"] = eta;
    j["log_x"] = log_x.value_or(std::log(x));
  } else {
    j["poly"] = poly;
    j["x"] = x;
  }
  j["s"] = s_values;
  j["t"] = t_values;
  j["alpha"] = alpha;
  j["y"] = y ? json(*y) : json(nullptr);
  j["g"] = g ? json(*g) : json(nullptr);
  j["sieve_limit"] = sieve_limit ? json(*sieve_limit) : json(nullptr);
  j["range_max"] = range_max ? json(*range_max) : json(nullptr);
  j["k_max"] = k_max;
  j["epsilon"] = epsilon;
  j["n_max"] = n_max;
  j["m_max"] = m_max;
  j["format"] = format;
  j["exact"] = exact;
  return j;
}

std::vector<unsigned> parse_s_list(const std::string& text) {
  std::vector<unsigned> out;
  for (const auto& item : split(text, ',')) {
    try {
      const auto dots = item.find("..");
      if (dots != std::string::npos) {
        const unsigned lo = static_cast<unsigned>(std::stoul(item.substr(0, dots)));
        const unsigned hi = static_cast<unsigned>(std::stoul(item.substr(dots + 2)));
        if (lo > hi) throw DomainError("empty range");
        for (unsigned s = lo; s <= hi; ++s) out.push_back(s);
      } else {
        out.push_back(static_cast<unsigned>(std::stoul(item)));
      }
    } catch (const std::exception&) {
      throw DomainError("malformed s list \"" + text + "\"");
    }
  }
  return out;
}

std::vector<double> parse_t_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw DomainError("malformed t list \"" + text + "\"");
    }
  }
  return out;
}

std::vector<i64> parse_int_list(const std::string& text) {
  std::vector<i64> out;
  for (const auto& item : split(text, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw DomainError("malformed integer list \"" + text + "\"");
    }
  }
  return out;
}

RunOutcome execute(const RunConfig& config) {
  config.validate();
  set_worker_count(config.threads);
  const auto start = std::chrono::steady_clock::now();
  Context ctx(config);

  std::vector<Section> sections;
  const std::string& cmd = config.command;
  if (cmd == "moments") sections.push_back(moments_section(ctx));
  if (cmd == "tail") sections.push_back(tail_section(ctx));
  if (cmd == "bounds") sections.push_back(bounds_section(ctx));
  if (cmd == "omega") sections.push_back(omega_section(ctx));
  if (cmd == "rho") sections.push_back(rho_section(ctx));
  if (cmd == "identities") sections.push_back(identities_section(ctx));
  if (cmd == "brun-titchmarsh") sections.push_back(brun_titchmarsh_section(ctx));
  if (cmd == "report-all") {
    sections.push_back(moments_section(ctx));
    sections.push_back(tail_section(ctx));
    sections.push_back(omega_section(ctx));
    sections.push_back(bounds_section(ctx));
  }

  RunOutcome outcome;
  json& rep = outcome.report;
  rep["schema"] = kSchema;
  rep["version"] = kToolVersion;
  rep["command"] = cmd;
  rep["config"] = config.to_json();
  rep["results"] = json::array();
  rep["fitted_constants"] = json::object();
  rep["checks"] = json::object();
  const bool tagged = sections.size() > 1;
  for (auto& sec : sections) {
    for (auto& row : sec.rows) {
      if (tagged) {
        json r;
        r["section"] = sec.name;
        for (auto& [k, v] : row.items()) r[k] = v;
        rep["results"].push_back(std::move(r));
      } else {
        rep["results"].push_back(std::move(row));
      }
    }
    if (tagged) {
      rep["fitted_constants"][sec.name] = sec.fitted;
      rep["checks"][sec.name] = sec.checks;
    } else {
      rep["fitted_constants"] = sec.fitted;
      rep["checks"] = sec.checks;
    }
    outcome.checks_passed = outcome.checks_passed && sec.passed;
  }
  rep["passed"] = outcome.checks_passed;
  json timings = json::object();
  if (!config.reproducible) {
    const auto elapsed = std::chrono::steady_clock::now() - start;
    timings["wall_ms"] = std::chrono::duration<double, std::milli>(elapsed).count();
  }
  rep["timings"] = timings;
  return outcome;
}

std::string render_json(const json& report) { return report.dump(2) + "\n"; }

std::string render_csv(const json& report) {
  std::vector<std::string> header;
  for (const auto& row : report.at("results"))
    for (const auto& [k, v] : row.items())
      if (std::find(header.begin(), header.end(), k) == header.end()) header.push_back(k);
  auto cell = [](const json& v) -> std::string {
    if (v.is_null()) return "";
    if (v.is_string()) {
      const std::string s = v.get<std::string>();
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char c : s) {
        if (c == '"') q += '"';
        q += c;
      }
      return q + "\"";
    }
    return v.dump();
  };
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += "\n";
  for (const auto& row : report.at("results")) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out += ",";
      if (row.contains(header[i])) out += cell(row.at(header[i]));
    }
    out += "\n";
  }
  return out;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  RunOutcome outcome;
  try {
    outcome = execute(config);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  const std::string text =
      config.format == "csv" ? render_csv(outcome.report) : render_json(outcome.report);
  if (config.output == "-") {
    out << text;
  } else {
    std::ofstream file(config.output, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "error: cannot write " << config.output << "\n";
      return 1;
    }
    file << text;
  }
  if (!outcome.checks_passed) {
    err << "check failure: see \"checks\" in the report\n";
    return 2;
  }
  return 0;
}

int run_command_line(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Totient-ratio moment sums, tail counts and bound checks"};
  app.set_version_flag("--version", kToolVersion);
  RunConfig cfg;
  std::string s_text, t_text, shifts_text;
  std::optional<double> y, log_x;
  std::optional<std::string> g;
  std::optional<u64> sieve_limit, range_max;

  app.add_option("command", cfg.command, "moments|tail|bounds|omega|rho|identities|brun-titchmarsh|report-all")
      ->required();
  app.add_option("--family", cfg.family, "poly-int, poly-prime or linear-delta");
  app.add_option("--poly", cfg.poly, "coefficients from the constant term up, e.g. \"1,0,1\"");
  app.add_option("--x", cfg.x, "range bound x");
  app.add_option("--log-x", log_x, "linear-delta: ln x (overrides --x)");
  app.add_option("--a", cfg.a, "linear-delta: a");
  app.add_option("--shifts", shifts_text, "linear-delta: b_1,...,b_k");
  app.add_option("--eta", cfg.eta, "linear-delta: eta");
  app.add_option("--s", s_text, "moment exponents, e.g. 1..6");
  app.add_option("--t", t_text, "tail thresholds, e.g. 2,2.5,3");
  app.add_option("--alpha", cfg.alpha, "alpha in (0, 1]");
  app.add_option("--y", y, "smoothness bound (default max((ln M)^alpha, 2))");
  app.add_option("--g", g, "power-root:d, linear-min:k, shifted-min:d or unit");
  app.add_option("--sieve-limit", sieve_limit, "prime table limit");
  app.add_option("--range-max", range_max, "range of the n/phi(n) constant fit");
  app.add_option("--k-max", cfg.k_max, "brun-titchmarsh: largest modulus");
  app.add_option("--epsilon", cfg.epsilon, "brun-titchmarsh: epsilon");
  app.add_option("--n-max", cfg.n_max, "identities: divisor-sum range");
  app.add_option("--m-max", cfg.m_max, "rho: largest modulus");
  app.add_option("--format", cfg.format, "json or csv");
  app.add_option("--output,-o", cfg.output, "output path, - for stdout");
  app.add_flag("--exact", cfg.exact, "exact rational moment sums");
  app.add_option("--threads", cfg.threads, "worker threads");
  app.add_flag("--reproducible", cfg.reproducible, "omit wall-clock timings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << kToolVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  try {
    if (!s_text.empty()) cfg.s_values = parse_s_list(s_text);
    if (!t_text.empty()) cfg.t_values = parse_t_list(t_text);
    if (!shifts_text.empty()) cfg.shifts = parse_int_list(shifts_text);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  cfg.y = y;
  cfg.log_x = log_x;
  cfg.g = g;
  cfg.sieve_limit = sieve_limit;
  cfg.range_max = range_max;
  return run(cfg, out, err);
}

}  // namespace tml
