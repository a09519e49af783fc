#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "threadlint/cli.hpp"

namespace threadlint {

namespace {

using nlohmann::json;  // objects are std::map backed, so keys come out sorted

constexpr const char* kRuleDescriptions[] = {
    "Fields of a thread-safe class must be private.",
    "Fields of a thread-safe class must be final, volatile or default-initialized.",
    "Conflicting accesses to a field must share a monitor.",
};

json location(const std::string& file, const SourceSpan& s) {
  return {{"file", file}, {"line", s.begin.line}, {"column", s.begin.column}};
}

json alert_json(const Alert& a) {
  json j = location(a.file, a.primary);
  j["rule"] = rule_name(a.rule);
  j["field"] = a.field;
  j["class"] = a.class_id;
  j["message"] = a.message;
  if (a.secondary) j["related"] = location(a.file, *a.secondary);
  return j;
}

json stats_json(const ReportStats& s, bool timings) {
  json j = {{"files_parsed", s.files_parsed},
            {"classes_analyzed", s.classes_analyzed},
            {"annotated_classes", s.annotated_classes},
            {"alerts_per_rule", {{"P1", s.per_rule[0]}, {"P2", s.per_rule[1]}, {"P3", s.per_rule[2]}}}};
  if (timings) j["wall_time_ms"] = s.wall_ms;
  return j;
}

json error_json(const FileError& e) {
  return {{"file", e.file}, {"line", e.line}, {"column", e.column}, {"message", e.message}};
}

json oracle_json(const OracleEntry& e) {
  return {{"class", e.class_id},       {"file", e.file},
          {"verdict", verdict_name(e.verdict)}, {"static_alerts", e.static_alerts},
          {"programs", e.programs},     {"executions", e.executions},
          {"racy_executions", e.racy_executions}, {"detail", e.detail}};
}

std::string to_json(const Report& r, bool timings) {
  json j;
  j["alerts"] = json::array();
  for (const auto& a : r.alerts) j["alerts"].push_back(alert_json(a));
  j["notes"] = r.notes;
  j["errors"] = json::array();
  for (const auto& e : r.errors) j["errors"].push_back(error_json(e));
  j["stats"] = stats_json(r.stats, timings);
  if (r.oracle_mode) {
    j["oracle"] = json::array();
    for (const auto& e : r.oracle) j["oracle"].push_back(oracle_json(e));
  }
  return j.dump(2) + "\n";
}

json sarif_location(const std::string& file, const SourceSpan& s) {
  return {{"physicalLocation",
           {{"artifactLocation", {{"uri", file}}},
            {"region",
             {{"startLine", s.begin.line},
              {"startColumn", s.begin.column},
              {"endLine", s.end.line},
              {"endColumn", s.end.column}}}}}};
}

std::string to_sarif(const Report& r, bool timings) {
  json rules = json::array();
  for (int i = 0; i < 3; ++i)
    rules.push_back({{"id", rule_name(static_cast<Rule>(i))},
                     {"shortDescription", {{"text", kRuleDescriptions[i]}}},
                     {"defaultConfiguration", {{"level", "warning"}}}});
  json results = json::array();
  for (const auto& a : r.alerts) {
    json res = {{"ruleId", rule_name(a.rule)},
                {"ruleIndex", static_cast<int>(a.rule)},
                {"level", "warning"},
                {"message", {{"text", a.message}}},
                {"locations", json::array({sarif_location(a.file, a.primary)})},
                {"properties", {{"field", a.field}, {"class", a.class_id}}}};
    if (a.secondary) {
      json rel = sarif_location(a.file, *a.secondary);
      rel["id"] = 1;
      rel["message"] = {{"text", "other access of the conflicting pair"}};
      res["relatedLocations"] = json::array({rel});
    }
    results.push_back(std::move(res));
  }
  json notifications = json::array();
  for (const auto& e : r.errors) {
    json n = {{"level", "error"}, {"message", {{"text", e.message}}}};
    n["locations"] = json::array({{{"physicalLocation",
                                    {{"artifactLocation", {{"uri", e.file}}},
                                     {"region", {{"startLine", std::max<std::uint32_t>(e.line, 1)},
                                                 {"startColumn", std::max<std::uint32_t>(e.column, 1)}}}}}}});
    notifications.push_back(std::move(n));
  }
  json invocation = {{"executionSuccessful", r.errors.empty()},
                     {"toolExecutionNotifications", notifications}};
  json run = {{"tool", {{"driver", {{"name", "threadlint"}, {"rules", rules}}}}},
              {"results", results},
              {"invocations", json::array({invocation})},
              {"properties", {{"stats", stats_json(r.stats, timings)}}}};
  json doc = {{"$schema", "https://json.schemastore.org/sarif-2.1.0.json"},
              {"version", "2.1.0"},
              {"runs", json::array({run})}};
  return doc.dump(2) + "\n";
}

std::string to_text(const Report& r, bool timings) {
  std::ostringstream out;
  for (const auto& a : r.alerts)
    out << a.file << ':' << a.primary.begin.line << ':' << a.primary.begin.column << ' ' << rule_name(a.rule)
        << ' ' << a.field << ' ' << a.message << '\n';
  for (const auto& n : r.notes) out << "note: " << n << '\n';
  for (const auto& e : r.errors) {
    out << "error: " << e.file;
    if (e.line) out << ':' << e.line << ':' << e.column;
    out << ": " << e.message << '\n';
  }
  for (const auto& e : r.oracle) {
    out << "oracle: " << e.class_id << ' ' << verdict_name(e.verdict) << " (" << e.static_alerts
        << " static alerts, " << e.executions << " executions, " << e.racy_executions << " racy)";
    if (!e.detail.empty()) out << ": " << e.detail;
    out << '\n';
  }
  const auto& s = r.stats;
  out << r.alerts.size() << " alerts (P1 " << s.per_rule[0] << ", P2 " << s.per_rule[1] << ", P3 " << s.per_rule[2]
      << ") in " << s.annotated_classes << " annotated of " << s.classes_analyzed << " classes, "
      << s.files_parsed << " files";
  if (!r.errors.empty()) out << ", " << r.errors.size() << " errors";
  if (timings) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", s.wall_ms);
    out << ", " << buf << " ms";
  }
  out << '\n';
  return out.str();
}

}  // namespace

std::string serialize_report(const Report& r, OutputFormat format, bool timings) {
  switch (format) {
    case OutputFormat::Json:
      return to_json(r, timings);
    case OutputFormat::Sarif:
      return to_sarif(r, timings);
    case OutputFormat::Text:
      break;
  }
  return to_text(r, timings);
}

}  // namespace threadlint
