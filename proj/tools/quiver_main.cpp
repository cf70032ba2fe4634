// quiver command line: REPL, script runner and bundle export.
//
//   quiver repl --graph <dir> [--param k=v]... [--stats] [--format aligned|tsv]
//   quiver run <script> [--graph <dir>] [--param k=v]... [--stats] [--format ...]
//   quiver export --graph <dir> --out <dir>
//
// Exit status: 0 success, 1 statement error, 2 load or usage error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "quiver/quiver.hpp"

namespace {

struct CommonOptions {
  std::string graph;
  std::vector<std::string> params;
  bool stats = false;
  std::string format = "aligned";
};

int make_session(const CommonOptions& opts, bool graph_required,
                 std::optional<quiver::Session>& session) {
  quiver::SessionConfig config;
  if (!opts.graph.empty()) {
    config.graph_path = opts.graph;
  } else if (graph_required) {
    std::cerr << "error: --graph is required\n";
    return 2;
  }
  for (const auto& p : opts.params) {
    auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "error: --param expects name=value, got '" << p << "'\n";
      return 2;
    }
    config.parameters[p.substr(0, eq)] = p.substr(eq + 1);
  }
  if (opts.format == "aligned") {
    config.format = quiver::TableFormat::aligned;
  } else if (opts.format == "tsv") {
    config.format = quiver::TableFormat::tsv;
  } else {
    std::cerr << "error: --format must be 'aligned' or 'tsv'\n";
    return 2;
  }
  config.stats = opts.stats;
  try {
    session.emplace(std::move(config));
  } catch (const quiver::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--graph", opts.graph, "graph bundle directory");
  cmd->add_option("--param", opts.params, "parameter binding name=value")->take_all();
  cmd->add_flag("--stats", opts.stats, "print per-statement traversal counters");
  cmd->add_option("--format", opts.format, "output format: aligned or tsv");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quiver - embedded property-graph query engine"};
  app.require_subcommand(1);

  CommonOptions repl_opts;
  CLI::App* repl = app.add_subcommand("repl", "interactive query shell");
  add_common(repl, repl_opts);

  CommonOptions run_opts;
  std::string script_path;
  CLI::App* run = app.add_subcommand("run", "execute a statement script");
  run->add_option("script", script_path, "script file")->required();
  add_common(run, run_opts);

  std::string export_graph, export_out;
  CLI::App* exp = app.add_subcommand("export", "load a bundle and write it back out");
  exp->add_option("--graph", export_graph, "graph bundle directory")->required();
  exp->add_option("--out", export_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (repl->parsed()) {
    std::optional<quiver::Session> session;
    if (int rc = make_session(repl_opts, false, session)) return rc;
    return session->repl(std::cin, std::cout);
  }

  if (run->parsed()) {
    std::ifstream in(script_path, std::ios::binary);
    if (!in) {
      std::cerr << "error: cannot open script '" << script_path << "'\n";
      return 2;
    }
    std::ostringstream source;
    source << in.rdbuf();
    std::optional<quiver::Session> session;
    if (int rc = make_session(run_opts, false, session)) return rc;
    return session->run_script(source.str(), std::cout);
  }

  // export
  try {
    quiver::LoadedBundle bundle = quiver::load_bundle(export_graph);
    quiver::export_bundle(bundle.store, export_out);
  } catch (const quiver::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
