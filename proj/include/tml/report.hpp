#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tml/arith.hpp"

namespace tml {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kSchema = "tml/1";

struct RunConfig {
  std::string command;

  // sequence
  std::string family = "poly-int";
  std::string poly = "1,0,1";
  double x = 1e4;
  std::optional<double> log_x;  // linear-delta: overrides ln(x)
  u64 a = 1;
  std::vector<i64> shifts;
  double eta = 1.0;

  std::vector<unsigned> s_values{1, 2, 3, 4, 5, 6};
  std::vector<double> t_values{2, 2.5, 3, 3.5};
  double alpha = 0.5;
  std::optional<double> y;
  std::optional<std::string> g;  // defaults per family
  std::optional<u64> sieve_limit;
  std::optional<u64> range_max;  // n/phi(n) constant fit range, defaults to ceil(M)

  u64 k_max = 100;
  double epsilon = 0.5;
  u64 n_max = 10'000;
  u64 m_max = 10'000;

  std::string format = "json";
  std::string output = "-";
  bool exact = false;
  unsigned threads = 1;
  bool reproducible = false;

  // Throws DomainError naming the offending field.
  void validate() const;
  nlohmann::ordered_json to_json() const;
};

// "1..6", "1,2,8", "1..3,8".
std::vector<unsigned> parse_s_list(const std::string& text);
std::vector<double> parse_t_list(const std::string& text);
std::vector<i64> parse_int_list(const std::string& text);

struct RunOutcome {
  nlohmann::ordered_json report;
  bool checks_passed = true;
};

// Builds the full report. Throws tml::Error on configuration errors.
RunOutcome execute(const RunConfig& config);

std::string render_json(const nlohmann::ordered_json& report);
// One row per entry of report["results"], header from the union of row keys.
std::string render_csv(const nlohmann::ordered_json& report);

// Exit codes: 0 success, 1 usage or configuration error, 2 a check failed.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv into a config and runs it.
int run_command_line(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tml
