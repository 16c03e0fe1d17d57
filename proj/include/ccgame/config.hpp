#pragma once

#include "ccgame/game_model.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace ccgame {

/// Parse or schema error. `line` is 0 when not tied to a source line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& field, const std::string& what)
      : std::runtime_error(format(line, field, what)), line_(line), field_(field) {}
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  static std::string format(int line, const std::string& field, const std::string& what) {
    std::string s;
    if (line > 0) s += "line " + std::to_string(line) + ": ";
    if (!field.empty()) s += field + ": ";
    return s + what;
  }
  int line_;
  std::string field_;
};

/// Reads the TOML subset used by game files: [section] headers, key = value
/// pairs, numbers, booleans, double-quoted strings and (possibly multi-line,
/// nested) arrays, with # comments. Tables map to JSON objects.
nlohmann::json parse_toml_subset(const std::string& text);

/// Game file schema:
///   [dimensions] n, m, l, m1, t_f, epsilon (number or list)
///   [dynamics]   A1, A2, A3, A4, C1, C2
///   [cost]       D1, lambda, G, F1
///   [initial]    x0, y0
/// A matrix is a row-major nested array, or a list of such arrays giving
/// polynomial coefficients lowest degree first. A 1 x 1 matrix may be a bare
/// number. lambda holds one entry per fast state: a number or a coefficient
/// list.
struct LoadedSpec {
  GameSpec spec;  // epsilon set to eps_list.front()
  std::vector<double> eps_list;
};

LoadedSpec spec_from_json(const nlohmann::json& doc);

/// Dispatches on extension: ".json" is read as JSON, anything else as the
/// TOML subset.
LoadedSpec load_spec(const std::string& path);

}  // namespace ccgame
