#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "threadlint/alert.hpp"
#include "threadlint/options.hpp"

namespace threadlint {

enum class OutputFormat { Text, Json, Sarif };

std::string_view format_name(OutputFormat f);
std::optional<OutputFormat> parse_format(std::string_view s);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  AnalysisOptions analysis;
  RuleSet rules;
  OutputFormat format = OutputFormat::Text;
  unsigned jobs = 1;
  bool timings = false;  // include wall time in serialized reports
  std::optional<std::size_t> oracle_bound;  // executions per driver program
};

/// Applies a config file on top of `cfg`. Lines are `key = v1, v2` (replace)
/// or `key += v1, v2` (append); `#` starts a comment.
///
/// Keys: annotations, allowlist, lock_types, lock_methods, unlock_methods,
/// mutator_methods, rules, format, jobs, timings, oracle_bound. Allowlist
/// entries ending in '.' are package prefixes, the rest exact type names;
/// `allowlist = ...` keeps the java.util.concurrent prefix only if listed.
void apply_config_text(Config& cfg, std::string_view text, const std::string& path = "<config>");
void apply_config_file(Config& cfg, const std::string& path);
/// Applies one entry; used for files and command-line flags alike.
void apply_config_entry(Config& cfg, const std::string& key, const std::vector<std::string>& values,
                        bool append);
/// Throws ConfigError when no rule is enabled.
void check_config(const Config& cfg);

/// An input that could not be read or parsed.
struct FileError {
  std::string file;
  std::uint32_t line = 0;  // 0 for I/O errors
  std::uint32_t column = 0;
  std::string message;
};

enum class OracleVerdict {
  AgreeRaceFree,   // no static alert, no race found
  AgreeRacy,       // static alerts and a witness race
  Conservative,    // static alerts, yet every enumerated execution is race-free
  Counterexample,  // no static alert but a race: the static rules missed it
  Unsupported,     // a method body is outside the oracle's fragment
  BudgetExceeded,  // enumeration did not finish
};

std::string_view verdict_name(OracleVerdict v);

struct OracleEntry {
  std::string class_id;
  std::string file;
  OracleVerdict verdict = OracleVerdict::AgreeRaceFree;
  std::size_t static_alerts = 0;
  std::size_t programs = 0;
  std::size_t executions = 0;
  std::size_t racy_executions = 0;
  std::string detail;  // witness program and races, or the reason it was skipped
};

struct ReportStats {
  std::size_t files_parsed = 0;
  std::size_t classes_analyzed = 0;
  std::size_t annotated_classes = 0;
  std::array<std::size_t, 3> per_rule{};  // indexed by Rule
  double wall_ms = 0;
};

struct Report {
  std::vector<Alert> alerts;  // sorted with alert_less
  std::vector<std::string> notes;
  std::vector<FileError> errors;
  ReportStats stats;
  bool oracle_mode = false;
  std::vector<OracleEntry> oracle;
};

/// `.java` files under each path (recursively for directories), sorted.
/// Throws IoError for a path that does not exist.
std::vector<std::string> discover_sources(const std::vector<std::string>& paths);

/// Parses and analyzes every annotated class. Unreadable or malformed files
/// are recorded in `errors`; a missing path throws IoError.
Report run(const std::vector<std::string>& paths, const Config& cfg);

/// Static analysis plus the exhaustive two-thread oracle for each annotated
/// class.
Report oracle_check(const std::vector<std::string>& paths, const Config& cfg);

/// 2 when there are file errors, 1 for alerts (or oracle counterexamples in
/// oracle mode), else 0.
int exit_code(const Report& r);

std::string serialize_report(const Report& r, OutputFormat format, bool timings = false);

}  // namespace threadlint
