#include "ccgame/game_model.hpp"
#include "ccgame/pursuit_evasion.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace ccgame {
namespace {

const InvariantCheck* find(const ValidationReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

TEST(Validation, InterceptionGamePasses) {
  const ValidationReport r = validate_spec(pursuit_evasion::spec(0.1));
  EXPECT_TRUE(r.ok);
  EXPECT_TRUE(r.a2_satisfied);
  EXPECT_EQ(r.summary(), "A2 satisfied; all invariants pass");
  EXPECT_TRUE(r.warnings.empty());
  EXPECT_EQ(r.first_failure(), nullptr);
}

TEST(Validation, RejectsNonPositiveEpsilon) {
  const ValidationReport r = validate_spec(pursuit_evasion::spec(0.0));
  EXPECT_FALSE(r.ok);
  ASSERT_NE(r.first_failure(), nullptr);
  EXPECT_EQ(r.first_failure()->message, "epsilon must be positive");
}

TEST(Validation, LambdaMustStayPositiveOnHorizon) {
  GameSpec s = pursuit_evasion::spec(0.1);
  s.lambda[0] = Polynomial(std::vector<double>{1.0, -1.0});  // 1 - t, negative after t = 1
  const ValidationReport r = validate_spec(s);
  EXPECT_FALSE(r.ok);
  const InvariantCheck* c = find(r, "lambda_1 positive");
  ASSERT_NE(c, nullptr);
  EXPECT_FALSE(c->passed);
  EXPECT_EQ(c->message, "lambda_1 not positive on [0,t_f]");
  EXPECT_DOUBLE_EQ(c->worst_t, 1.5);
  EXPECT_DOUBLE_EQ(c->worst_value, -0.5);
}

TEST(Validation, UnpenalizedFastStateMustHaveZeroWeight) {
  GameSpec s = pursuit_evasion::spec(0.1);
  s.lambda[1] = Polynomial(0.3);
  const ValidationReport r = validate_spec(s);
  EXPECT_FALSE(r.ok);
  EXPECT_FALSE(find(r, "lambda_2 zero")->passed);
}

TEST(Validation, IndefiniteDataFails) {
  GameSpec s = pursuit_evasion::spec(0.1);
  s.F1(0, 0) = -0.1;
  EXPECT_FALSE(find(validate_spec(s), "F1")->passed);

  s = pursuit_evasion::spec(0.1);
  s.D1 = MatrixFunction(std::vector<Eigen::MatrixXd>{Eigen::MatrixXd::Constant(1, 1, 1.0),
                                                     Eigen::MatrixXd::Constant(1, 1, -1.0)});
  EXPECT_FALSE(find(validate_spec(s), "D1")->passed);

  s = pursuit_evasion::spec(0.1);
  Eigen::MatrixXd g(2, 2);
  g << 5, 0, 0, 0;
  s.G = MatrixFunction(g);
  EXPECT_FALSE(find(validate_spec(s), "G")->passed);
}

TEST(Validation, DegreeAboveFourIsRejected) {
  GameSpec s = pursuit_evasion::spec(0.1);
  s.lambda[0] = Polynomial(std::vector<double>{10, 0, 0, 0, 0, 1e-3});
  EXPECT_FALSE(find(validate_spec(s), "polynomial degree")->passed);
}

TEST(Validation, CoupledUnpenalizedStateViolatesA2WithWarning) {
  GameSpec s = pursuit_evasion::spec(0.1);
  Eigen::MatrixXd a2(1, 2);
  a2 << 1.0, 0.25;
  s.A2 = MatrixFunction(a2);
  const ValidationReport r = validate_spec(s);
  EXPECT_TRUE(r.ok);
  EXPECT_FALSE(r.a2_satisfied);
  EXPECT_NEAR(r.max_abar3_norm, 0.25, 1e-15);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.summary().find("A2 violated"), std::string::npos);
}

TEST(Dimensions, MismatchNamesTheField) {
  GameSpec s = pursuit_evasion::spec(0.1);
  s.C2 = MatrixFunction(Eigen::MatrixXd::Zero(2, 3));
  try {
    check_dimensions(s);
    FAIL() << "expected DimensionError";
  } catch (const DimensionError& e) {
    EXPECT_NE(std::string(e.what()).find("C2"), std::string::npos) << e.what();
  }
  s = pursuit_evasion::spec(0.1);
  s.y0 = Eigen::VectorXd::Zero(3);
  EXPECT_THROW(check_dimensions(s), DimensionError);
}

TEST(GameSpec, StackedInitialStateAndEpsilonCopy) {
  const GameSpec s = pursuit_evasion::spec(0.2);
  Eigen::VectorXd z0(3);
  z0 << 0, 2, 1;
  EXPECT_EQ(s.z0(), z0);
  EXPECT_EQ(s.dim(), 3);
  const GameSpec t = s.with_epsilon(0.05);
  EXPECT_DOUBLE_EQ(t.epsilon, 0.05);
  EXPECT_DOUBLE_EQ(s.epsilon, 0.2);
}

TEST(BlockPartition, InterceptionBlocks) {
  const BlockPartition p(pursuit_evasion::spec(0.1));
  // Hand substitution of the example data into the (1, 1, 1) split.
  EXPECT_DOUBLE_EQ(p.abar(1)(0.3)(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(p.abar(2)(0.3)(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(p.abar(3)(0.3)(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(p.abar(5)(0.3)(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(p.abar(6)(0.3)(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(p.abar(9)(0.3)(0, 0), -1.0);
  EXPECT_NEAR(p.sv(1, 0.3)(0, 0), 0.2, 1e-15);   // 1/5
  EXPECT_NEAR(p.sv(4, 0.3)(0, 0), 0.25, 1e-15);  // 1/4
  EXPECT_NEAR(p.sv(2, 0.3)(0, 0), 0.0, 1e-15);
  EXPECT_TRUE(p.a2_satisfied());
  EXPECT_DOUBLE_EQ(p.lambda_positive(1.0)(0), 10.0);

  Eigen::MatrixXd B(3, 2);
  B << 0, 0, 1, 0, 0, 1;
  EXPECT_EQ(p.B(), B);
  EXPECT_EQ(p.su_scaled(), B * B.transpose());
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(3, 3);
  F(0, 0) = 0.5;
  EXPECT_EQ(p.F(), F);
  const Eigen::MatrixXd D = p.D(0.4);
  EXPECT_DOUBLE_EQ(D(0, 0), 6.4);
  EXPECT_DOUBLE_EQ(D(1, 1), 10.0);
  EXPECT_DOUBLE_EQ(D(2, 2), 0.0);
  const Eigen::MatrixXd Sv = p.Sv(0.4);
  EXPECT_EQ(Sv, Sv.transpose());
  EXPECT_TRUE(p.G_inv_Ct(0.4).isApprox(p.G(0.4).inverse() * p.C(0.4).transpose(), 1e-15));
}

TEST(BlockPartition, RequiresProperSplit) {
  GameSpec s = pursuit_evasion::spec(0.1);
  s.m1 = 2;
  s.lambda[1] = Polynomial(1.0);
  EXPECT_THROW(BlockPartition{s}, DimensionError);
}

}  // namespace
}  // namespace ccgame
