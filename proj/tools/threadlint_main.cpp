#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "threadlint/cli.hpp"
#include "threadlint/source.hpp"

using namespace threadlint;

int main(int argc, char** argv) {
  CLI::App app{"threadlint: checks @ThreadSafe Java classes for escaping fields, unsafe publication and "
               "unsynchronized conflicting accesses"};
  std::vector<std::string> paths, rules, allow_add, lock_add, annot_add;
  std::string config_path, format, output;
  unsigned jobs = 0;
  std::size_t bound = 0;
  bool oracle = false, timings = false;
  app.add_option("paths", paths, "Java files or directories (searched recursively)")->required();
  app.add_option("-c,--config", config_path, "Config file (default: $THREADLINT_CONFIG)");
  app.add_option("--rule", rules, "Rule to report (P1, P2, P3); repeatable, replaces the configured set");
  app.add_option("-f,--format", format, "Output format")->check(CLI::IsMember({"text", "json", "sarif"}));
  app.add_option("--allowlist-add", allow_add, "Thread-safe type (or package prefix ending in '.')");
  app.add_option("--lock-type-add", lock_add, "Additional lock type name");
  app.add_option("--annotation-add", annot_add, "Additional class annotation marking thread safety");
  app.add_flag("--oracle", oracle, "Also run the exhaustive two-thread oracle on each annotated class");
  app.add_option("--oracle-bound", bound, "Stop enumerating a driver program after this many executions")
      ->check(CLI::PositiveNumber);
  app.add_option("-j,--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--timings", timings, "Report wall time");
  app.add_option("-o,--output", output, "Write the report to a file instead of stdout");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Config cfg;
    if (config_path.empty())
      if (const char* env = std::getenv("THREADLINT_CONFIG"); env && *env) config_path = env;
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    if (!rules.empty()) apply_config_entry(cfg, "rules", rules, false);
    if (!format.empty()) apply_config_entry(cfg, "format", {format}, false);
    if (!allow_add.empty()) apply_config_entry(cfg, "allowlist", allow_add, true);
    if (!lock_add.empty()) apply_config_entry(cfg, "lock_types", lock_add, true);
    if (!annot_add.empty()) apply_config_entry(cfg, "annotations", annot_add, true);
    if (jobs) cfg.jobs = jobs;
    if (bound) cfg.oracle_bound = bound;
    if (timings) cfg.timings = true;
    check_config(cfg);

    Report r = oracle ? oracle_check(paths, cfg) : run(paths, cfg);
    std::string text = serialize_report(r, cfg.format, cfg.timings);
    if (output.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(output, std::ios::binary);
      if (!(out << text)) throw IoError("cannot write '" + output + "'");
    }
    return exit_code(r);
  } catch (const std::exception& e) {
    std::cerr << "threadlint: error: " << e.what() << '\n';
    return 2;
  }
}
