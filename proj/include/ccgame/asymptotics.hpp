#pragma once

#include "ccgame/feedback.hpp"
#include "ccgame/game_model.hpp"
#include "ccgame/ode.hpp"

#include <array>
#include <memory>
#include <stdexcept>

namespace ccgame {

/// The asymptotic construction needs Abar3 == 0 (assumption A2).
class AssumptionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Boundary-layer corrections in the stretched time tau = (t - t_f)/eps <= 0,
/// built from data frozen at t_f. With s = Lambda^{1/2}(t_f),
/// H1 = exp(s tau) and H2 = (I + H1^2)^-1, all diagonal:
///   K2b = -2 F1 Abar2 s^-1 H1^2 H2,  K4b = -2 s H1^2 H2,  K5b = -2 H1 H2 Abar6.
/// K1b = K3b = K6b = 0.
class BoundaryCorrections {
 public:
  BoundaryCorrections() = default;
  BoundaryCorrections(const BlockPartition& part);

  Eigen::MatrixXd K2(double tau) const;  // n x m1
  Eigen::MatrixXd K4(double tau) const;  // m1 x m1
  Eigen::MatrixXd K5(double tau) const;  // m1 x (m - m1)

  /// beta = min_p sqrt(lambda_p(t_f)).
  double beta() const { return beta_; }
  /// Below this tau every correction is returned as exact zero.
  double tau_cut() const { return -600.0 / (2.0 * beta_); }

  const Eigen::MatrixXd& F1A2L() const { return f1a2l_; }
  const Eigen::VectorXd& lambda_half_tf() const { return sqrt_lambda_; }
  const Eigen::MatrixXd& A6_tf() const { return a6_; }

 private:
  Eigen::VectorXd sqrt_lambda_;
  Eigen::MatrixXd f1a2l_;
  Eigen::MatrixXd a6_;
  double beta_ = 0.0;
  Eigen::Index n_ = 0, m1_ = 0, m2_ = 0;
};

/// Fitted decay constants: max over tau of ||K2b|| e^{-2 beta tau},
/// ||K4b|| e^{-2 beta tau}, ||K5b|| e^{-beta tau}.
struct DecayFit {
  double a2 = 0.0, a4 = 0.0, a5 = 0.0;
};
DecayFit fit_decay_constants(const BoundaryCorrections& bc, double tau_min, int points = 2001);

/// Outer terms at a single time.
struct OuterTerms {
  Eigen::MatrixXd K1, K2, K3, K4, K5, K6;
};

/// The six K_{alpha,0}(t, eps) blocks (outer + boundary).
using ZeroOrderBlocks = std::array<Eigen::MatrixXd, 6>;

struct AsymptoticSolution {
  std::shared_ptr<const BlockPartition> partition;
  Trajectory K1o;  // n x n, K1o(t_f) = F1
  Trajectory K6o;  // (m-m1) x (m-m1), K6o(t_f) = 0
  Trajectory K2o, K4o, K5o;  // sampled on the K1o grid
  BoundaryCorrections boundary;
  double beta = 0.0;
  double beta_bar = 0.0;

  /// K2o = K1o Abar2 Lambda^{-1/2}, K4o = Lambda^{1/2}, K5o = Abar6, K3o = 0,
  /// evaluated from the exact coefficient functions at t.
  OuterTerms outer(double t) const;
  ZeroOrderBlocks blocks(double t, double eps) const;
};

/// dK/dt = -K Ab1 - Ab1' K + K [Ab2 Lambda^-1 Ab2' - Sv1] K - D1,  K(t_f) = F1.
/// Throws SolverError("A4") on escape.
Trajectory solve_outer_K1(const BlockPartition& part, const Config& cfg = {});

/// dK/dt = -K Ab9 - Ab9' K + K^2 - Ab6' Ab6,  K(t_f) = 0.
Trajectory solve_outer_K6(const BlockPartition& part, const Config& cfg = {});

struct OuterAlgebraic {
  Trajectory K2o, K4o, K5o;
};
/// K3o is identically zero and is not represented.
OuterAlgebraic build_outer_algebraic(const Trajectory& K1o, const BlockPartition& part);

BoundaryCorrections boundary_corrections(const BlockPartition& part);

/// Full zero-order construction. Throws AssumptionError if A2 fails.
AsymptoticSolution solve_asymptotic(const GameSpec& spec, const Config& cfg = {});

/// K0(t, eps) with the eps / eps^2 block scaling; symmetric by construction.
Eigen::MatrixXd assemble_K0(const AsymptoticSolution& asym, double eps, double t);

/// u = -eps^-2 B' K0 z, v = G^-1 C' K0 z.
FeedbackLaw approximate_feedback(const AsymptoticSolution& asym, double eps);

/// Saddle point of the eps = 0 game in which y_{r,1} plays the minimizer.
struct ReducedGame {
  Trajectory K1o;
  double value = 0.0;  // x0' K1o(0) x0
  std::function<Eigen::MatrixXd(double)> y_gain;  // m1 x n: -Lambda^-1 Ab2' K1o
  std::function<Eigen::MatrixXd(double)> v_gain;  // l x n:  G^-1 C1' K1o
};
ReducedGame solve_reduced_game(const BlockPartition& part, const Config& cfg = {});

}  // namespace ccgame
