#include "ccgame/pursuit_evasion.hpp"
#include "ccgame/riccati_exact.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace ccgame {
namespace {

// Independent fixed-step RK4 on the full game Riccati equation, written
// directly from the problem data.
Eigen::MatrixXd reference_K0(double eps, int steps) {
  Eigen::MatrixXd A(3, 3), B(3, 2), C(3, 2), D = Eigen::MatrixXd::Zero(3, 3), F = D;
  A << 0, 1, 0, 0, 0, 1, 0, 0, -1;
  B << 0, 0, 1, 0, 0, 1;
  C << 1, 0, 0, 1, 0, 0;
  D(0, 0) = 6.4;
  D(1, 1) = 10.0;
  F(0, 0) = 0.5;
  const Eigen::MatrixXd S = B * B.transpose() / (eps * eps) - C * Eigen::Vector2d(0.2, 0.25).asDiagonal() * C.transpose();
  auto f = [&](const Eigen::MatrixXd& K) -> Eigen::MatrixXd {
    return -K * A - A.transpose() * K + K * S * K - D;
  };
  Eigen::MatrixXd K = F;
  const double h = -1.5 / steps;
  for (int i = 0; i < steps; ++i) {
    const Eigen::MatrixXd k1 = f(K), k2 = f(K + 0.5 * h * k1), k3 = f(K + 0.5 * h * k2),
                          k4 = f(K + h * k3);
    K += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return K;
}

TEST(ExactRiccati, MatchesIndependentFixedStepSolution) {
  for (double eps : {0.2, 0.1}) {
    const ExactSolution sol = solve_exact(pursuit_evasion::spec(eps));
    const Eigen::MatrixXd ref = reference_K0(eps, 30000);
    EXPECT_LT((sol.K.eval(0.0) - ref).norm(), 1e-6 * ref.norm()) << "eps = " << eps;
    Eigen::Vector3d z0(0, 2, 1);
    EXPECT_NEAR(sol.value, z0.dot(ref * z0), 1e-6) << "eps = " << eps;
  }
}

TEST(ExactRiccati, TerminalValueSymmetryAndResidual) {
  // The midpoint residual of the Hermite interpolant is about local error / h,
  // so the 1e-6 bound needs tighter than default tolerances.
  Config cfg;
  cfg.rtol = 1e-10;
  cfg.atol = 1e-13;
  const GameSpec spec = pursuit_evasion::spec(0.1);
  const ExactSolution sol = solve_exact(spec, cfg);
  const BlockPartition part(spec);
  EXPECT_EQ(sol.K.eval(spec.t_f), part.F());
  for (const auto& K : sol.K.values()) EXPECT_EQ(K, K.transpose());
  const auto& g = sol.K.grid();
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < g.size(); i += 7) {
    const double t = 0.5 * (g[i] + g[i + 1]);
    worst = std::max(worst, riccati_residual(sol, part, t).norm());
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(ExactRiccati, ScaledResidualAtDefaultTolerances) {
  for (double eps : {0.2, 0.1, 0.05}) {
    const GameSpec spec = pursuit_evasion::spec(eps);
    const ExactSolution sol = solve_exact(spec);
    const BlockPartition part(spec);
    const auto& g = sol.K.grid();
    const double su_norm = 1.0 / (eps * eps);  // ||eps^-2 B B'||
    const std::size_t stride = std::max<std::size_t>(1, g.size() / 50);
    for (std::size_t i = 0; i + 1 < g.size(); i += stride) {
      const double t = 0.5 * (g[i] + g[i + 1]);
      const double k = sol.K.eval(t).norm();
      EXPECT_LE(riccati_residual(sol, part, t).norm(), 1e-6 * (1.0 + k * k * su_norm))
          << "eps = " << eps << ", t = " << t;
    }
  }
}

TEST(ExactRiccati, BlocksCarryEpsilonScaling) {
  const double eps = 0.1;
  const ExactSolution sol = solve_exact(pursuit_evasion::spec(eps));
  const double t = 0.77;
  const Eigen::MatrixXd K = sol.K.eval(t);
  EXPECT_NEAR(sol.blocks[0].eval(t)(0, 0), K(0, 0), 1e-14);
  EXPECT_NEAR(sol.blocks[1].eval(t)(0, 0), K(0, 1) / eps, 1e-12);
  EXPECT_NEAR(sol.blocks[2].eval(t)(0, 0), K(0, 2) / eps, 1e-12);
  EXPECT_NEAR(sol.blocks[3].eval(t)(0, 0), K(1, 1) / eps, 1e-12);
  EXPECT_NEAR(sol.blocks[4].eval(t)(0, 0), K(1, 2) / (eps * eps), 1e-10);
  EXPECT_NEAR(sol.blocks[5].eval(t)(0, 0), K(2, 2) / (eps * eps), 1e-10);
}

TEST(ExactRiccati, FeedbackGains) {
  const GameSpec spec = pursuit_evasion::spec(0.2);
  const ExactSolution sol = solve_exact(spec);
  const FeedbackLaw law = exact_feedback(sol, spec);
  EXPECT_EQ(law.label, "exact");
  const Eigen::MatrixXd K = sol.K.eval(0.4);
  EXPECT_TRUE(law.minimizer_gain(0.4).isApprox(-K.bottomRows(2) / 0.04, 1e-14));
  Eigen::MatrixXd Gi_Ct(2, 3);
  Gi_Ct << 0.2, 0, 0, 0, 0.25, 0;
  EXPECT_TRUE(law.maximizer_gain(0.4).isApprox(Gi_Ct * K, 1e-14));
}

TEST(ExactRiccati, RejectsNonPositiveEpsilon) {
  try {
    solve_exact(pursuit_evasion::spec(0.0));
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "epsilon must be positive");
  }
}

TEST(ExactRiccati, StrongMaximizerBreaksA1) {
  GameSpec spec = pursuit_evasion::spec(0.1);
  spec.G = MatrixFunction(Eigen::MatrixXd(0.01 * Eigen::MatrixXd::Identity(2, 2)));
  spec.t_f = 3.0;
  try {
    solve_exact(spec);
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    EXPECT_EQ(e.assumption(), "A1");
    EXPECT_GT(e.escape_time(), 0.0);
    EXPECT_LT(e.escape_time(), 3.0);
  }
}

}  // namespace
}  // namespace ccgame
