#include "ccgame/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace ccgame {

namespace {

using nlohmann::json;

class ValueParser {
 public:
  ValueParser(const std::string& text, int line) : s_(text), line_(line) {}

  json parse_document_value(const std::string& key) {
    key_ = key;
    json v = value();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing text '" + s_.substr(pos_) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(line_, key_, what); }

  void skip_ws() {
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  json value() {
    skip_ws();
    if (pos_ >= s_.size()) fail("missing value");
    const char c = s_[pos_];
    if (c == '[') return array();
    if (c == '"') return string();
    if (s_.compare(pos_, 4, "true") == 0) {
      pos_ += 4;
      return true;
    }
    if (s_.compare(pos_, 5, "false") == 0) {
      pos_ += 5;
      return false;
    }
    return number();
  }

  json array() {
    ++pos_;  // '['
    json arr = json::array();
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == ']') {
      ++pos_;
      return arr;
    }
    while (true) {
      arr.push_back(value());
      skip_ws();
      if (pos_ >= s_.size()) fail("unterminated array");
      if (s_[pos_] == ',') {
        ++pos_;
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == ']') {  // trailing comma
          ++pos_;
          return arr;
        }
        continue;
      }
      if (s_[pos_] == ']') {
        ++pos_;
        return arr;
      }
      fail(std::string("expected ',' or ']' but found '") + s_[pos_] + "'");
    }
  }

  json string() {
    ++pos_;
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
      out += s_[pos_++];
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  json number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
            s_[pos_] == '-' || s_[pos_] == '+' || s_[pos_] == '_')) {
      ++pos_;
    }
    std::string tok = s_.substr(start, pos_ - start);
    std::erase(tok, '_');
    if (tok.empty()) fail(std::string("unexpected character '") + s_[start] + "'");
    try {
      std::size_t used = 0;
      const double d = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      const bool integral = tok.find_first_of(".eEn") == std::string::npos;
      if (integral) return static_cast<long long>(d);
      return d;
    } catch (const std::logic_error&) {
      fail("'" + tok + "' is not a number");
    }
  }

  const std::string& s_;
  int line_;
  std::string key_;
  std::size_t pos_ = 0;
};

// Bracket depth of a value fragment, ignoring strings and comments.
int bracket_balance(const std::string& s) {
  int depth = 0;
  bool in_str = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (in_str) {
      if (c == '\\') ++i;
      else if (c == '"') in_str = false;
      continue;
    }
    if (c == '#') break;
    if (c == '"') in_str = true;
    if (c == '[') ++depth;
    if (c == ']') --depth;
  }
  return depth;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// ---- schema -------------------------------------------------------------

const json& require(const json& doc, const std::string& section, const std::string& key) {
  const std::string field = section + "." + key;
  if (!doc.contains(section) || !doc[section].is_object()) {
    throw ConfigError(0, section, "missing section [" + section + "]");
  }
  const json& sec = doc[section];
  if (!sec.contains(key)) throw ConfigError(0, field, "missing key");
  return sec[key];
}

int array_depth(const json& v) {
  int d = 0;
  const json* p = &v;
  while (p->is_array()) {
    ++d;
    if (p->empty()) break;
    p = &(*p)[0];
  }
  return d;
}

double as_number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError(0, field, "expected a number");
  return v.get<double>();
}

Eigen::MatrixXd as_matrix(const json& v, const std::string& field) {
  if (v.is_number()) return Eigen::MatrixXd::Constant(1, 1, v.get<double>());
  if (!v.is_array() || v.empty() || !v[0].is_array() || v[0].empty()) {
    throw ConfigError(0, field, "expected a row-major nested array");
  }
  const auto rows = static_cast<Eigen::Index>(v.size());
  const auto cols = static_cast<Eigen::Index>(v[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (!v[i].is_array() || static_cast<Eigen::Index>(v[i].size()) != cols) {
      throw ConfigError(0, field, "row " + std::to_string(i + 1) + " has the wrong length");
    }
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = as_number(v[i][j], field);
  }
  return m;
}

MatrixFunction as_matrix_function(const json& v, const std::string& field) {
  if (array_depth(v) == 3) {
    std::vector<Eigen::MatrixXd> coeffs;
    for (const json& c : v) coeffs.push_back(as_matrix(c, field));
    try {
      return MatrixFunction(std::move(coeffs));
    } catch (const std::exception& e) {
      throw ConfigError(0, field, e.what());
    }
  }
  return MatrixFunction(as_matrix(v, field));
}

Eigen::VectorXd as_vector(const json& v, const std::string& field) {
  if (v.is_number()) return Eigen::VectorXd::Constant(1, v.get<double>());
  if (!v.is_array()) throw ConfigError(0, field, "expected a flat numeric array");
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) x(static_cast<Eigen::Index>(i)) = as_number(v[i], field);
  return x;
}

Eigen::Index as_dim(const json& v, const std::string& field) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(0, field, "expected a non-negative integer");
  }
  return static_cast<Eigen::Index>(v.get<long long>());
}

}  // namespace

nlohmann::json parse_toml_subset(const std::string& text) {
  json doc = json::object();
  json* table = &doc;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line[0] == '[') {
      const auto close = line.find(']');
      if (close == std::string::npos) throw ConfigError(line_no, "", "unterminated section header");
      const std::string rest = trim(line.substr(close + 1));
      if (!rest.empty() && rest[0] != '#') {
        throw ConfigError(line_no, "", "unexpected text after section header");
      }
      const std::string name = trim(line.substr(1, close - 1));
      if (name.empty()) throw ConfigError(line_no, "", "empty section name");
      if (doc.contains(name)) throw ConfigError(line_no, name, "duplicate section");
      doc[name] = json::object();
      table = &doc[name];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "", "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(line_no, "", "missing key before '='");
    std::string value = line.substr(eq + 1);
    const int start_line = line_no;
    while (bracket_balance(value) > 0) {
      if (!std::getline(in, raw)) throw ConfigError(start_line, key, "unterminated array");
      ++line_no;
      value += "\n" + raw;
    }
    if (table->contains(key)) throw ConfigError(start_line, key, "duplicate key");
    (*table)[key] = ValueParser(value, start_line).parse_document_value(key);
  }
  return doc;
}

LoadedSpec spec_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError(0, "", "top level must be a table");
  LoadedSpec out;
  GameSpec& s = out.spec;
  s.n = as_dim(require(doc, "dimensions", "n"), "dimensions.n");
  s.m = as_dim(require(doc, "dimensions", "m"), "dimensions.m");
  s.l = as_dim(require(doc, "dimensions", "l"), "dimensions.l");
  s.m1 = as_dim(require(doc, "dimensions", "m1"), "dimensions.m1");
  s.t_f = as_number(require(doc, "dimensions", "t_f"), "dimensions.t_f");

  const json& eps = require(doc, "dimensions", "epsilon");
  if (eps.is_array()) {
    if (eps.empty()) throw ConfigError(0, "dimensions.epsilon", "empty list");
    for (const json& e : eps) out.eps_list.push_back(as_number(e, "dimensions.epsilon"));
  } else {
    out.eps_list.push_back(as_number(eps, "dimensions.epsilon"));
  }
  s.epsilon = out.eps_list.front();

  for (const char* key : {"A1", "A2", "A3", "A4", "C1", "C2"}) {
    const std::string field = std::string("dynamics.") + key;
    MatrixFunction f = as_matrix_function(require(doc, "dynamics", key), field);
    const std::string k = key;
    if (k == "A1") s.A1 = std::move(f);
    else if (k == "A2") s.A2 = std::move(f);
    else if (k == "A3") s.A3 = std::move(f);
    else if (k == "A4") s.A4 = std::move(f);
    else if (k == "C1") s.C1 = std::move(f);
    else s.C2 = std::move(f);
  }
  s.D1 = as_matrix_function(require(doc, "cost", "D1"), "cost.D1");
  s.G = as_matrix_function(require(doc, "cost", "G"), "cost.G");
  s.F1 = as_matrix(require(doc, "cost", "F1"), "cost.F1");

  const json& lam = require(doc, "cost", "lambda");
  if (!lam.is_array()) throw ConfigError(0, "cost.lambda", "expected an array");
  for (std::size_t k = 0; k < lam.size(); ++k) {
    const std::string field = "cost.lambda[" + std::to_string(k + 1) + "]";
    if (lam[k].is_number()) {
      s.lambda.emplace_back(lam[k].get<double>());
    } else {
      const Eigen::VectorXd c = as_vector(lam[k], field);
      if (c.size() == 0) throw ConfigError(0, field, "empty coefficient list");
      s.lambda.emplace_back(std::vector<double>(c.data(), c.data() + c.size()));
    }
  }
  s.x0 = as_vector(require(doc, "initial", "x0"), "initial.x0");
  s.y0 = as_vector(require(doc, "initial", "y0"), "initial.y0");

  check_dimensions(s);
  return out;
}

LoadedSpec load_spec(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(0, path, "cannot open file");
  std::stringstream buf;
  buf << f.rdbuf();
  const std::string text = buf.str();
  const bool is_json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  if (is_json) {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(0, path, e.what());
    }
    return spec_from_json(doc);
  }
  return spec_from_json(parse_toml_subset(text));
}

}  // namespace ccgame
