#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "threadlint/hb_oracle.hpp"
#include "threadlint/source.hpp"

using namespace threadlint;

namespace {

std::string_view edge_name(HbEdgeKind k) {
  switch (k) {
    case HbEdgeKind::ProgramOrder:
      return "po";
    case HbEdgeKind::Synchronization:
      return "sync";
    case HbEdgeKind::Initialization:
      return "init";
  }
  return "?";
}

}  // namespace

// Checks one recorded execution: prints the happens-before generating edges
// on request and every data race. Exit 1 when a race is found.
int main(int argc, char** argv) {
  CLI::App app{"hbtrace: happens-before and data races of one execution trace"};
  std::string path;
  bool edges = false;
  app.add_option("trace", path, "Trace file: one '<thread> <op> <target>' per line")->required();
  app.add_flag("--edges", edges, "Print the generating happens-before edges");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    Execution e = parse_trace(ss.str(), path);
    HbGraph hb = hb_closure(e);
    auto show = [&](std::size_t i) {
      return "#" + std::to_string(i) + " '" + format_action(e.actions[i]) + "'";
    };
    if (edges)
      for (const auto& edge : hb.edges())
        std::cout << edge_name(edge.kind) << ' ' << show(edge.from) << " -> " << show(edge.to) << '\n';
    auto races = detect_races(e);
    for (auto [i, j] : races) std::cout << "race " << show(i) << " / " << show(j) << '\n';
    std::cout << e.actions.size() << " actions, " << races.size() << " races\n";
    return races.empty() ? 0 : 1;
  } catch (const ParseError& err) {
    std::cerr << "hbtrace: error: " << err.what() << '\n';
  } catch (const std::exception& err) {
    std::cerr << "hbtrace: error: " << err.what() << '\n';
  }
  return 2;
}
