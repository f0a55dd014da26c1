#pragma once

// Command-line front end:
//   alc <kind> --config <path> [--seed N] [--threads N] [--fresh-matrix] [--assert]
// Exit codes: 0 ok, 2 config error, 3 resource limit, 4 failed --assert.

#include <CLI11.hpp>

#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "alc/error.hpp"
#include "alc/harness/config.hpp"
#include "alc/harness/experiments.hpp"

namespace alc {

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_resource = 3, exit_assert = 4 };

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot read config file '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, const std::string& body) {
  std::ofstream f(path);
  if (!f) throw config_error("cannot write output file '" + path + "'");
  f << body;
  if (!f) throw config_error("failed writing output file '" + path + "'");
}

}  // namespace detail

/// Runs the CLI. CSV goes to `output` from the config (with a `.json` summary
/// next to it) or to `out` when no output path is set; the verdict line and
/// diagnostics go to `err`.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Seeded experiments on dimension estimates and structured-signal recovery", "alc"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  bool fresh_matrix = false;
  bool assert_pass = false;

  for (auto kind : {ExperimentKind::dim, ExperimentKind::nsp, ExperimentKind::recover, ExperimentKind::kron,
                    ExperimentKind::collide, ExperimentKind::interleave}) {
    auto* sub = app.add_subcommand(to_string(kind), "run a " + to_string(kind) + " experiment");
    sub->add_option("--config", config_path, "experiment config (key = value)")->required();
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--threads", threads, "worker threads (results do not depend on it)")
        ->check(CLI::Range(1u, 1024u));
    sub->add_flag("--fresh-matrix", fresh_matrix, "draw a new matrix per trial (recover, kron)");
    sub->add_flag("--assert", assert_pass, "exit 4 if the experiment's acceptance check fails");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "alc: " << e.what() << '\n';
    return exit_config;
  }
  const std::string name = app.get_subcommands().front()->get_name();

  try {
    auto cfg = parse_config(detail::read_file(config_path), parse_kind(name));
    if (seed) cfg.set("seed", std::to_string(*seed));
    const auto result = run_experiment(cfg, RunOptions{threads, fresh_matrix});
    if (const auto path = cfg.output_path(); !path.empty()) {
      detail::write_file(path, result.csv);
      detail::write_file(path + ".json", result.summary.dump(2) + "\n");
      out << result.summary.dump(2) << '\n';
    } else {
      out << result.csv;
    }
    err << "alc " << name << ": " << (result.passed ? "PASS" : "FAIL") << " (" << result.verdict << ")\n";
    return assert_pass && !result.passed ? exit_assert : exit_ok;
  } catch (const config_error& e) {
    err << "alc: config error: " << e.what() << '\n';
    return exit_config;
  } catch (const resource_limit& e) {
    err << "alc: resource limit: " << e.what() << '\n';
    return exit_resource;
  } catch (const invalid_argument& e) {
    err << "alc: invalid argument: " << e.what() << '\n';
    return exit_config;
  }
}

inline int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

}  // namespace alc
