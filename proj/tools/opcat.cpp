#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "opcat/cli.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw opcat::Error(opcat::ErrorKind::parse, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite operads, categories of operators and dendroidal checks"};
  std::string command;
  std::vector<std::string> args, files;
  std::optional<std::uint32_t> arity;
  std::optional<std::uint64_t> budget;
  std::string out, dot;
  unsigned threads = 1;
  bool timing = false, normalize = false;

  std::string names;
  for (const auto& c : opcat::cli::commands()) names += (names.empty() ? "" : ", ") + c;
  app.add_option("command", command, "One of: " + names);
  app.add_option("args", args, "Arguments NAME=expression");
  app.add_option("-w,--workspace", files, "Workspace file (repeatable)");
  app.add_option("--arity", arity, "Arity bound N (default 3)");
  app.add_option("--budget", budget, "Search budget (default 100000)");
  app.add_option("--out", out, "Write the report to FILE instead of stdout");
  app.add_option("--dot", dot, "Write a graph description of the constructed object to FILE");
  app.add_option("--threads", threads, "Worker threads for table generation");
  app.add_flag("--timing", timing, "Append wall-clock time to the report");
  app.add_flag("--normalize", normalize, "Print the workspace in normal form and exit");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  opcat::set_worker_threads(threads);
  opcat::cli::Invocation inv{command, {}, arity, budget, timing};
  opcat::cli::Workspace ws;
  try {
    for (const auto& f : files) {
      try {
        opcat::cli::merge(ws, opcat::cli::parse_workspace(slurp(f)));
      } catch (const opcat::Error& e) {
        throw opcat::Error(e.kind(), f + ": " + opcat::cli::bare_message(e));
      }
    }
    for (const auto& a : args) inv.args.push_back(opcat::cli::split_argument(a));
  } catch (const opcat::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  if (normalize) {
    std::cout << opcat::cli::serialize(ws, arity.value_or(3));
    return 0;
  }

  if (command.empty()) {
    std::cerr << "a command is required\n" << app.help();
    return 2;
  }
  const auto report = opcat::cli::run(inv, ws);
  if (!report.error.empty()) std::cerr << report.error << "\n";
  if (out.empty()) {
    std::cout << report.text;
  } else {
    std::ofstream(out, std::ios::binary) << report.text;
  }
  if (!dot.empty() && !report.dot.empty()) std::ofstream(dot, std::ios::binary) << report.dot;
  return report.exit_code;
}
