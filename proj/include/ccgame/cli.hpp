#pragma once

#include "ccgame/ode.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ccgame::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kSolver = 2, kGolden = 3 };

struct RunManifest {
  std::string command;    // validate | solve-exact | solve-asymptotic | evaluate | sweep | simulate | example
  std::string spec_path;  // empty: the built-in pursuit-evasion game
  std::vector<double> eps_list;  // overrides the file's epsilon when nonempty
  std::string output_dir;        // empty: no files written
  std::optional<double> rtol, atol;
  std::optional<Method> method;
  std::uint64_t seed = 20240607;
  std::string law = "both";  // simulate: exact | asymptotic | both
};

Config integrator_config(const RunManifest& m);

/// Dispatches the command. Human-readable output goes to `out`, failures to
/// `err`. Returns an ExitCode.
int run(const RunManifest& manifest, std::ostream& out, std::ostream& err);

/// Reproduces the pursuit-evasion example end to end and checks it against
/// reference values. Writes into manifest.output_dir when set.
int run_example(const RunManifest& manifest, std::ostream& out, std::ostream& err);

/// Parses argv into a manifest. Returns an exit code when the process should
/// stop (help, parse error).
std::optional<int> parse_args(int argc, char** argv, RunManifest& manifest, std::ostream& out,
                              std::ostream& err);

}  // namespace ccgame::cli
