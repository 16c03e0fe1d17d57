#include "ccgame/config.hpp"
#include "ccgame/pursuit_evasion.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

namespace ccgame {
namespace {

void expect_same(const GameSpec& a, const GameSpec& b) {
  EXPECT_EQ(a.n, b.n);
  EXPECT_EQ(a.m, b.m);
  EXPECT_EQ(a.l, b.l);
  EXPECT_EQ(a.m1, b.m1);
  EXPECT_EQ(a.t_f, b.t_f);
  for (double t : {0.0, 0.7}) {
    EXPECT_EQ(a.A1(t), b.A1(t));
    EXPECT_EQ(a.A2(t), b.A2(t));
    EXPECT_EQ(a.A3(t), b.A3(t));
    EXPECT_EQ(a.A4(t), b.A4(t));
    EXPECT_EQ(a.C1(t), b.C1(t));
    EXPECT_EQ(a.C2(t), b.C2(t));
    EXPECT_EQ(a.D1(t), b.D1(t));
    EXPECT_EQ(a.G(t), b.G(t));
    for (Eigen::Index k = 0; k < a.m; ++k) EXPECT_EQ(a.lambda[k](t), b.lambda[k](t));
  }
  EXPECT_EQ(a.F1, b.F1);
  EXPECT_EQ(a.x0, b.x0);
  EXPECT_EQ(a.y0, b.y0);
}

TEST(Config, ShippedFileMatchesBuiltInGame) {
  const LoadedSpec loaded = load_spec(std::string(CCGAME_SOURCE_DIR) + "/configs/pursuit_evasion.toml");
  expect_same(loaded.spec, pursuit_evasion::spec(0.2));
  EXPECT_EQ(loaded.eps_list, (std::vector<double>{0.2, 0.1, 0.05}));
  EXPECT_EQ(loaded.spec.epsilon, 0.2);
}

TEST(Config, TomlSubsetSyntax) {
  const auto doc = parse_toml_subset(R"(# comment
[a]
x = 1          # trailing comment
y = -2.5e-1
s = "text"
b = true
m = [[1, 2],
     [3, 4],]   # multi-line with trailing comma
e = []
)");
  EXPECT_EQ(doc["a"]["x"], 1);
  EXPECT_DOUBLE_EQ(doc["a"]["y"].get<double>(), -0.25);
  EXPECT_EQ(doc["a"]["s"], "text");
  EXPECT_EQ(doc["a"]["b"], true);
  EXPECT_EQ(doc["a"]["m"].dump(), "[[1,2],[3,4]]");
  EXPECT_TRUE(doc["a"]["e"].empty());
}

TEST(Config, PolynomialEntries) {
  auto doc = parse_toml_subset(R"(
[dimensions]
n = 1
m = 2
l = 1
m1 = 1
t_f = 1.0
epsilon = 0.1
[dynamics]
A1 = [[[0.0]], [[1.0]]]
A2 = [[1.0, 0.0]]
A3 = [[0.0], [0.0]]
A4 = [[0.0, 1.0], [0.0, 0.0]]
C1 = 1.0
C2 = [[0.0], [1.0]]
[cost]
D1 = 1.0
lambda = [[2.0, 0.5], 0.0]
G = 3.0
F1 = 0.0
[initial]
x0 = 1.0
y0 = [0.0, 0.0]
)");
  const LoadedSpec s = spec_from_json(doc);
  EXPECT_DOUBLE_EQ(s.spec.A1(0.5)(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(s.spec.lambda[0](2.0), 3.0);
  EXPECT_EQ(s.eps_list, std::vector<double>{0.1});
  EXPECT_EQ(s.spec.G(0.0)(0, 0), 3.0);
}

void expect_error(const std::string& text, int line, const std::string& field) {
  try {
    spec_from_json(parse_toml_subset(text));
    FAIL() << "expected ConfigError for:\n" << text;
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), line) << e.what();
    EXPECT_EQ(e.field(), field) << e.what();
  }
}

TEST(Config, DiagnosticsCarryLineAndField) {
  expect_error("[dimensions]\nn = 1\nm = [1,\n", 3, "m");
  expect_error("[dimensions]\nn = 1.2.3\n", 2, "n");
  expect_error("[dimensions\n", 1, "");
  expect_error("[dimensions]\nn 1\n", 2, "");
  expect_error("[dimensions]\nn = 1\nn = 2\n", 3, "n");
  expect_error("[dimensions]\nn = 1\n", 0, "dimensions.m");
  expect_error("[dimensions]\nn = -1\n", 0, "dimensions.n");
}

TEST(Config, ShapeErrorsNameTheField) {
  nlohmann::json doc = parse_toml_subset(R"(
[dimensions]
n = 1
m = 2
l = 1
m1 = 1
t_f = 1.0
epsilon = 0.1
[dynamics]
A1 = 0.0
A2 = [[1.0, 0.0], [1.0]]
)");
  try {
    spec_from_json(doc);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "dynamics.A2");
  }
}

TEST(Config, JsonInputIsEquivalent) {
  const std::string toml_path = std::string(CCGAME_SOURCE_DIR) + "/configs/pursuit_evasion.toml";
  std::ifstream in(toml_path);
  std::stringstream buf;
  buf << in.rdbuf();
  const auto doc = parse_toml_subset(buf.str());
  const auto path = std::filesystem::temp_directory_path() / "ccgame_config_test.json";
  {
    std::ofstream out(path);
    out << doc.dump(2);
  }
  const LoadedSpec s = load_spec(path.string());
  expect_same(s.spec, pursuit_evasion::spec(0.2));
  std::filesystem::remove(path);
  EXPECT_THROW(load_spec("/nonexistent/game.toml"), ConfigError);
}

TEST(Config, DimensionMismatchIsReported) {
  auto doc = parse_toml_subset(R"(
[dimensions]
n = 1
m = 2
l = 2
m1 = 1
t_f = 1.0
epsilon = 0.1
[dynamics]
A1 = 0.0
A2 = [[1.0, 0.0]]
A3 = [[0.0], [0.0]]
A4 = [[0.0, 1.0], [0.0, 0.0]]
C1 = [[1.0, 0.0]]
C2 = [[0.0], [1.0]]
[cost]
D1 = 1.0
lambda = [2.0, 0.0]
G = [[1.0, 0.0], [0.0, 1.0]]
F1 = 0.0
[initial]
x0 = 1.0
y0 = [0.0, 0.0]
)");
  try {
    spec_from_json(doc);
    FAIL();
  } catch (const DimensionError& e) {
    EXPECT_NE(std::string(e.what()).find("C2"), std::string::npos) << e.what();
  }
}

}  // namespace
}  // namespace ccgame
