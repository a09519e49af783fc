#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "threadlint/source.hpp"

namespace threadlint {

enum class Rule { P1, P2, P3 };

std::string_view rule_name(Rule r);
std::optional<Rule> parse_rule(std::string_view s);

/// P1: a field is not private. P2: a field is not safely published.
/// P3: a conflicting pair of accesses shares no monitor.
struct Alert {
  Rule rule = Rule::P1;
  std::string file;
  SourceSpan primary;
  std::optional<SourceSpan> secondary;  // the other access of a P3 pair
  std::string field;
  std::string message;
  std::string class_id;
};

/// Which rules to report.
struct RuleSet {
  bool p1 = true;
  bool p2 = true;
  bool p3 = true;

  bool has(Rule r) const { return r == Rule::P1 ? p1 : r == Rule::P2 ? p2 : p3; }
  static RuleSet none() { return {false, false, false}; }
  void add(Rule r) { (r == Rule::P1 ? p1 : r == Rule::P2 ? p2 : p3) = true; }
  bool empty() const { return !p1 && !p2 && !p3; }
};

/// Total order used for every alert list: file, primary line/column, rule,
/// then secondary location.
bool alert_less(const Alert& a, const Alert& b);

}  // namespace threadlint
