#include <charconv>
#include <fstream>
#include <sstream>

#include "threadlint/cli.hpp"
#include "threadlint/source.hpp"

namespace threadlint {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_values(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t comma = s.find(',', start);
    if (comma == std::string_view::npos) comma = s.size();
    std::string v = trim(s.substr(start, comma - start));
    if (!v.empty()) out.push_back(std::move(v));
    start = comma + 1;
  }
  return out;
}

void set_list(std::vector<std::string>& list, const std::vector<std::string>& values, bool append) {
  if (!append) list.clear();
  for (const auto& v : values)
    if (!contains_name(list, v)) list.push_back(v);
}

const std::string& single(const std::string& key, const std::vector<std::string>& values) {
  if (values.size() != 1) throw ConfigError("'" + key + "' takes exactly one value");
  return values[0];
}

std::size_t positive(const std::string& key, const std::string& v) {
  std::size_t n = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
  if (ec != std::errc{} || p != v.data() + v.size() || n == 0)
    throw ConfigError("'" + key + "' expects a positive integer, got '" + v + "'");
  return n;
}

}  // namespace

std::string_view format_name(OutputFormat f) {
  switch (f) {
    case OutputFormat::Text:
      return "text";
    case OutputFormat::Json:
      return "json";
    case OutputFormat::Sarif:
      return "sarif";
  }
  return "text";
}

std::optional<OutputFormat> parse_format(std::string_view s) {
  if (s == "text") return OutputFormat::Text;
  if (s == "json") return OutputFormat::Json;
  if (s == "sarif") return OutputFormat::Sarif;
  return std::nullopt;
}

void apply_config_entry(Config& cfg, const std::string& key, const std::vector<std::string>& values,
                        bool append) {
  AnalysisOptions& a = cfg.analysis;
  if (key == "annotations") {
    set_list(a.annotation_names, values, append);
  } else if (key == "allowlist") {
    if (!append) {
      a.allowlist.qualified_prefixes.clear();
      a.allowlist.exact_types.clear();
    }
    for (const auto& v : values)
      set_list(v.back() == '.' ? a.allowlist.qualified_prefixes : a.allowlist.exact_types, {v}, true);
  } else if (key == "lock_types") {
    set_list(a.lock_types, values, append);
  } else if (key == "lock_methods") {
    set_list(a.lock_methods, values, append);
  } else if (key == "unlock_methods") {
    set_list(a.unlock_methods, values, append);
  } else if (key == "mutator_methods") {
    set_list(a.mutator_methods, values, append);
  } else if (key == "rules") {
    if (!append) cfg.rules = RuleSet::none();
    for (const auto& v : values) {
      auto r = parse_rule(v);
      if (!r) throw ConfigError("unknown rule '" + v + "' (expected P1, P2 or P3)");
      cfg.rules.add(*r);
    }
  } else if (key == "format") {
    if (append) throw ConfigError("'format' cannot be appended to");
    const std::string& v = single(key, values);
    auto f = parse_format(v);
    if (!f) throw ConfigError("unknown format '" + v + "' (expected text, json or sarif)");
    cfg.format = *f;
  } else if (key == "jobs") {
    cfg.jobs = static_cast<unsigned>(positive(key, single(key, values)));
  } else if (key == "oracle_bound") {
    cfg.oracle_bound = positive(key, single(key, values));
  } else if (key == "timings") {
    const std::string& v = single(key, values);
    if (v != "true" && v != "false") throw ConfigError("'timings' expects true or false");
    cfg.timings = v == "true";
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

void apply_config_text(Config& cfg, std::string_view text, const std::string& path) {
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::string content = trim(line);
    if (content.empty()) continue;
    auto where = [&] { return path + ":" + std::to_string(line_no) + ": "; };
    std::size_t eq = content.find('=');
    if (eq == std::string::npos) throw ConfigError(where() + "expected 'key = value'");
    bool append = eq > 0 && content[eq - 1] == '+';
    std::string key = trim(std::string_view(content).substr(0, append ? eq - 1 : eq));
    if (key.empty()) throw ConfigError(where() + "missing key");
    try {
      apply_config_entry(cfg, key, split_values(std::string_view(content).substr(eq + 1)), append);
    } catch (const ConfigError& e) {
      throw ConfigError(where() + e.what());
    }
  }
}

void apply_config_file(Config& cfg, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  apply_config_text(cfg, ss.str(), path);
}

void check_config(const Config& cfg) {
  if (cfg.rules.empty()) throw ConfigError("no rule enabled");
}

}  // namespace threadlint
