#include <algorithm>
#include <tuple>

#include "threadlint/alert.hpp"
#include "threadlint/options.hpp"

namespace threadlint {

std::string erase_type_arguments(std::string_view type) {
  std::string out;
  int depth = 0;
  for (char c : type) {
    if (c == '<') {
      ++depth;
    } else if (c == '>') {
      --depth;
    } else if (depth == 0 && c != ' ' && c != '\t' && c != '\n' && c != '[' && c != ']') {
      out += c;
    }
  }
  return out;
}

std::string simple_type_name(std::string_view type) {
  std::string erased = erase_type_arguments(type);
  auto dot = erased.rfind('.');
  return dot == std::string::npos ? erased : erased.substr(dot + 1);
}

bool is_array_type(std::string_view type) {
  // Brackets inside type arguments (List<int[]>) do not make an array.
  int depth = 0;
  for (char c : type) {
    if (c == '<') ++depth;
    if (c == '>') --depth;
    if (c == '[' && depth == 0) return true;
  }
  return false;
}

bool contains_name(const std::vector<std::string>& names, std::string_view name) {
  return std::find(names.begin(), names.end(), name) != names.end();
}

bool ThreadSafeTypeAllowlist::contains(std::string_view qualified, std::string_view simple) const {
  for (const auto& p : qualified_prefixes)
    if (qualified.substr(0, p.size()) == p) return true;
  for (const auto& t : exact_types) {
    if (t == qualified) return true;
    if (t.find('.') == std::string::npos && t == simple) return true;
  }
  return false;
}

std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::P1:
      return "P1";
    case Rule::P2:
      return "P2";
    case Rule::P3:
      return "P3";
  }
  return "?";
}

std::optional<Rule> parse_rule(std::string_view s) {
  if (s == "P1" || s == "p1") return Rule::P1;
  if (s == "P2" || s == "p2") return Rule::P2;
  if (s == "P3" || s == "p3") return Rule::P3;
  return std::nullopt;
}

bool alert_less(const Alert& a, const Alert& b) {
  auto key = [](const Alert& x) {
    std::uint32_t sl = x.secondary ? x.secondary->begin.line : 0;
    std::uint32_t sc = x.secondary ? x.secondary->begin.column : 0;
    return std::make_tuple(std::cref(x.file), x.primary.begin.line, x.primary.begin.column,
                           static_cast<int>(x.rule), sl, sc, std::cref(x.field));
  };
  return key(a) < key(b);
}

}  // namespace threadlint
