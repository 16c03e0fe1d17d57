#include "ccgame/polynomial.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

namespace ccgame {
namespace {

TEST(Polynomial, EvaluatesAndDifferentiates) {
  const Polynomial p(std::vector<double>{1.0, -3.0, 0.0, 2.0});  // 1 - 3t + 2t^3
  EXPECT_DOUBLE_EQ(p(0.0), 1.0);
  EXPECT_DOUBLE_EQ(p(2.0), 1.0 - 6.0 + 16.0);
  const Polynomial d = p.derivative();  // -3 + 6t^2
  EXPECT_DOUBLE_EQ(d(1.5), -3.0 + 6.0 * 2.25);
  EXPECT_EQ(p.degree(), 3);
  EXPECT_EQ(d.degree(), 2);
}

TEST(Polynomial, TrailingZerosDoNotRaiseDegree) {
  const Polynomial p(std::vector<double>{2.0, 0.0, 0.0});
  EXPECT_EQ(p.degree(), 0);
  EXPECT_FALSE(p.is_zero());
  EXPECT_TRUE(Polynomial(0.0).is_zero());
  EXPECT_TRUE(Polynomial(1e-14).is_zero(1e-12));
}

TEST(Polynomial, RealRootsOfFactoredCubic) {
  // (t - 1)(t - 2)(t + 3) = t^3 - 7t + 6
  const Polynomial p(std::vector<double>{6.0, -7.0, 0.0, 1.0});
  auto roots = p.real_roots();
  std::sort(roots.begin(), roots.end());
  ASSERT_EQ(roots.size(), 3u);
  EXPECT_NEAR(roots[0], -3.0, 1e-12);
  EXPECT_NEAR(roots[1], 1.0, 1e-12);
  EXPECT_NEAR(roots[2], 2.0, 1e-12);
}

TEST(Polynomial, ComplexRootsAreDropped) {
  const Polynomial p(std::vector<double>{1.0, 0.0, 1.0});  // t^2 + 1
  EXPECT_TRUE(p.real_roots().empty());
}

TEST(Polynomial, MinimumUsesCriticalPointsAndEndpoints) {
  const Polynomial p(std::vector<double>{0.0, -2.0, 1.0});  // t^2 - 2t, min -1 at t = 1
  const auto [t, v] = p.minimum_on(0.0, 3.0);
  EXPECT_NEAR(t, 1.0, 1e-12);
  EXPECT_NEAR(v, -1.0, 1e-12);
  const auto [t2, v2] = p.minimum_on(2.0, 3.0);  // increasing there
  EXPECT_DOUBLE_EQ(t2, 2.0);
  EXPECT_DOUBLE_EQ(v2, 0.0);
  const auto [t3, v3] = Polynomial(std::vector<double>{1.0, -1.0}).minimum_on(0.0, 1.5);
  EXPECT_DOUBLE_EQ(t3, 1.5);
  EXPECT_DOUBLE_EQ(v3, -0.5);
}

TEST(MatrixFunction, HornerMatchesDirectSum) {
  Eigen::MatrixXd c0(2, 2), c1(2, 2), c2(2, 2);
  c0 << 1, 2, 3, 4;
  c1 << 0, -1, 1, 0;
  c2 << 0.5, 0, 0, -0.5;
  const MatrixFunction f(std::vector<Eigen::MatrixXd>{c0, c1, c2});
  const double t = 0.7;
  EXPECT_TRUE(f(t).isApprox(c0 + t * c1 + t * t * c2, 1e-15));
  EXPECT_TRUE(f.derivative(t).isApprox(c1 + 2 * t * c2, 1e-15));
  EXPECT_EQ(f.degree(), 2);
  EXPECT_FALSE(f.is_constant());
  EXPECT_TRUE(f.transpose()(t).isApprox(f(t).transpose()));
  EXPECT_TRUE(f.block(0, 1, 2, 1)(t).isApprox(f(t).col(1)));
  EXPECT_DOUBLE_EQ(f.max_abs_coefficient(), 4.0);
}

TEST(MatrixFunction, ConstantHasZeroDerivative) {
  const MatrixFunction f(Eigen::MatrixXd::Constant(2, 3, 1.5));
  EXPECT_TRUE(f.is_constant());
  EXPECT_EQ(f.rows(), 2);
  EXPECT_EQ(f.cols(), 3);
  EXPECT_TRUE(f.derivative(0.3).isZero(0.0));
}

TEST(MatrixFunction, RejectsInconsistentCoefficients) {
  EXPECT_THROW(MatrixFunction(std::vector<Eigen::MatrixXd>{}), std::invalid_argument);
  EXPECT_THROW(MatrixFunction(std::vector<Eigen::MatrixXd>{Eigen::MatrixXd::Zero(2, 2),
                                                           Eigen::MatrixXd::Zero(2, 3)}),
               std::invalid_argument);
}

}  // namespace
}  // namespace ccgame
