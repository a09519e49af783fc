#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <thread>

#include "threadlint/ast.hpp"
#include "threadlint/class_model.hpp"
#include "threadlint/cli.hpp"
#include "threadlint/hb_oracle.hpp"
#include "threadlint/race_analysis.hpp"

namespace threadlint {

namespace fs = std::filesystem;

namespace {

struct FileResult {
  std::vector<Alert> alerts;
  std::vector<std::string> notes;
  std::optional<FileError> error;
  std::size_t classes = 0;
  std::size_t annotated = 0;
  std::vector<OracleEntry> oracle;
};

std::string describe_race(const Execution& e, std::pair<std::size_t, std::size_t> race) {
  auto side = [&](std::size_t i) {
    const TraceAction& a = e.actions[i];
    std::string s = "'" + format_action(a) + "'";
    if (a.line) s += " (line " + std::to_string(a.line) + ")";
    return s;
  };
  return "race on " + e.actions[race.first].target + " between " + side(race.first) + " and " +
         side(race.second);
}

OracleEntry run_oracle(const ClassModel& cm, std::size_t static_alerts, const Config& cfg) {
  OracleEntry entry;
  entry.class_id = cm.class_id();
  entry.file = cm.file();
  entry.static_alerts = static_alerts;
  bool racy = false;
  try {
    auto programs = driver_from_class(cm);
    entry.programs = programs.size();
    for (const auto& p : programs) {
      RaceResult r = program_races(p, cfg.oracle_bound);
      entry.executions += r.executions;
      entry.racy_executions += r.racy_executions;
      if (r.racy && !racy) {
        racy = true;
        entry.detail = p.name + ": " + describe_race(*r.witness, r.witness_races.front());
      }
    }
  } catch (const UnsupportedForOracle& e) {
    entry.verdict = OracleVerdict::Unsupported;
    entry.detail = e.what();
    return entry;
  } catch (const BudgetExceeded& e) {
    entry.verdict = OracleVerdict::BudgetExceeded;
    entry.detail = e.what();
    return entry;
  }
  if (static_alerts == 0)
    entry.verdict = racy ? OracleVerdict::Counterexample : OracleVerdict::AgreeRaceFree;
  else
    entry.verdict = racy ? OracleVerdict::AgreeRacy : OracleVerdict::Conservative;
  return entry;
}

FileResult analyze_file(const std::string& path, const Config& cfg, bool oracle) {
  FileResult out;
  try {
    Ast ast = parse_compilation_unit(SourceFile::load(path));
    ast.visit_classes([&](const ClassDecl& decl) {
      ++out.classes;
      ClassModel cm = build_class_model(ast, decl, cfg.analysis);
      if (!cm.annotated) return;
      ++out.annotated;
      ClassResult r = analyze_class(cm, cfg.rules);
      if (oracle) out.oracle.push_back(run_oracle(cm, r.alerts.size(), cfg));
      out.alerts.insert(out.alerts.end(), r.alerts.begin(), r.alerts.end());
      out.notes.insert(out.notes.end(), r.notes.begin(), r.notes.end());
    });
  } catch (const ParseError& e) {
    out = FileResult{};
    out.error = FileError{path, e.line(), e.column(), e.message()};
  } catch (const std::exception& e) {
    out = FileResult{};
    out.error = FileError{path, 0, 0, e.what()};
  }
  return out;
}

Report run_impl(const std::vector<std::string>& paths, const Config& cfg, bool oracle) {
  auto start = std::chrono::steady_clock::now();
  check_config(cfg);
  std::vector<std::string> files = discover_sources(paths);

  std::vector<FileResult> results(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < files.size();) results[i] = analyze_file(files[i], cfg, oracle);
  };
  unsigned n = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(files.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Merge in file order so the report does not depend on scheduling.
  Report r;
  r.oracle_mode = oracle;
  for (auto& fr : results) {
    if (fr.error) {
      r.errors.push_back(std::move(*fr.error));
      continue;
    }
    ++r.stats.files_parsed;
    r.stats.classes_analyzed += fr.classes;
    r.stats.annotated_classes += fr.annotated;
    r.alerts.insert(r.alerts.end(), fr.alerts.begin(), fr.alerts.end());
    r.notes.insert(r.notes.end(), fr.notes.begin(), fr.notes.end());
    r.oracle.insert(r.oracle.end(), fr.oracle.begin(), fr.oracle.end());
  }
  std::stable_sort(r.alerts.begin(), r.alerts.end(), alert_less);
  for (const auto& a : r.alerts) ++r.stats.per_rule[static_cast<std::size_t>(a.rule)];
  r.stats.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

std::string_view verdict_name(OracleVerdict v) {
  switch (v) {
    case OracleVerdict::AgreeRaceFree:
      return "agree-race-free";
    case OracleVerdict::AgreeRacy:
      return "agree-racy";
    case OracleVerdict::Conservative:
      return "conservative";
    case OracleVerdict::Counterexample:
      return "counterexample";
    case OracleVerdict::Unsupported:
      return "unsupported";
    case OracleVerdict::BudgetExceeded:
      return "budget-exceeded";
  }
  return "?";
}

std::vector<std::string> discover_sources(const std::vector<std::string>& paths) {
  std::vector<std::string> out;
  for (const auto& p : paths) {
    std::error_code ec;
    fs::file_status st = fs::status(p, ec);
    if (ec || !fs::exists(st)) throw IoError("no such file or directory: '" + p + "'");
    if (!fs::is_directory(st)) {
      out.push_back(fs::path(p).generic_string());
      continue;
    }
    for (auto it = fs::recursive_directory_iterator(p, fs::directory_options::skip_permission_denied, ec);
         !ec && it != fs::recursive_directory_iterator(); it.increment(ec)) {
      if (it->is_regular_file() && it->path().extension() == ".java") out.push_back(it->path().generic_string());
    }
    if (ec) throw IoError("cannot list '" + p + "': " + ec.message());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Report run(const std::vector<std::string>& paths, const Config& cfg) { return run_impl(paths, cfg, false); }

Report oracle_check(const std::vector<std::string>& paths, const Config& cfg) {
  return run_impl(paths, cfg, true);
}

int exit_code(const Report& r) {
  if (!r.errors.empty()) return 2;
  if (r.oracle_mode)
    return std::any_of(r.oracle.begin(), r.oracle.end(),
                       [](const OracleEntry& e) { return e.verdict == OracleVerdict::Counterexample; })
               ? 1
               : 0;
  return r.alerts.empty() ? 0 : 1;
}

}  // namespace threadlint
