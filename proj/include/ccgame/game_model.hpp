#pragma once

#include "ccgame/polynomial.hpp"

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccgame {

/// Raised when a coefficient's shape disagrees with (n, m, l). The message
/// names the offending field.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Problem data of the cheap control game
///
///   dx/dt = A1 x + A2 y + C1 v,           x(0) = x0,
///   dy/dt = A3 x + A4 y + u + C2 v,       y(0) = y0,
///   J = x(tf)' F1 x(tf) + int_0^tf [x' D1 x + y' D2 y + eps^2 u'u - v' G v] dt,
///
/// with D2 = diag(lambda_1, ..., lambda_m), lambda_p > 0 for p <= m1 and
/// lambda_r == 0 for r > m1.
struct GameSpec {
  Eigen::Index n = 0;   // slow state
  Eigen::Index m = 0;   // fast state (and minimizer control)
  Eigen::Index l = 0;   // maximizer control
  Eigen::Index m1 = 0;  // positive part of D2
  double t_f = 0.0;
  double epsilon = 0.0;

  MatrixFunction A1, A2, A3, A4;
  MatrixFunction C1, C2;
  MatrixFunction D1;
  std::vector<Polynomial> lambda;
  MatrixFunction G;
  Eigen::MatrixXd F1;
  Eigen::VectorXd x0, y0;

  Eigen::VectorXd z0() const;
  Eigen::Index dim() const { return n + m; }
  GameSpec with_epsilon(double eps) const;
};

struct Tolerances {
  double psd_rel = 1e-10;  // eigenvalues >= -psd_rel * (1 + ||M||)
  double pd_rel = 1e-12;   // eigenvalues >= pd_rel * (1 + ||M||)
  double zero = 1e-12;
  int grid_points = 201;
  int max_degree = 4;
};

struct InvariantCheck {
  std::string name;
  bool passed = true;
  double worst_t = 0.0;      // grid point of the worst violation (or margin)
  double worst_value = 0.0;  // eigenvalue / function value there
  std::string message;
};

struct ValidationReport {
  std::vector<InvariantCheck> checks;
  std::vector<std::string> warnings;
  bool ok = true;
  bool a2_satisfied = false;
  double max_abar3_norm = 0.0;

  const InvariantCheck* first_failure() const;
  std::string summary() const;
};

/// Checks the standing hypotheses on the data. Shape mismatches throw
/// DimensionError; everything else is reported.
ValidationReport validate_spec(const GameSpec& spec, const Tolerances& tol = {});

/// Throws DimensionError naming the first inconsistent field.
void check_dimensions(const GameSpec& spec);

/// Block structure of the game with the fast state split as (m1, m - m1).
///
///   A = [Ab1 Ab2 Ab3; Ab4 Ab5 Ab6; Ab7 Ab8 Ab9],
///   Sv = C G^-1 C' = [Sv1 Sv2 Sv3; Sv2' Sv4 Sv5; Sv3' Sv5' Sv6].
///
/// The A-blocks are polynomial and stored exactly. Sv involves G^-1 and is
/// evaluated on demand. Only B B' is exposed, never eps^-2 B B'.
class BlockPartition {
 public:
  explicit BlockPartition(GameSpec spec, const Tolerances& tol = {});

  const GameSpec& spec() const { return spec_; }
  Eigen::Index n() const { return spec_.n; }
  Eigen::Index m() const { return spec_.m; }
  Eigen::Index m1() const { return spec_.m1; }
  Eigen::Index m2() const { return spec_.m - spec_.m1; }
  Eigen::Index l() const { return spec_.l; }
  Eigen::Index dim() const { return spec_.n + spec_.m; }

  /// Abar_k, k = 1..9.
  const MatrixFunction& abar(int k) const { return abar_.at(k - 1); }
  /// Sv_k(t), k = 1..6 (upper-triangular blocks).
  Eigen::MatrixXd sv(int k, double t) const;

  Eigen::MatrixXd A(double t) const;
  Eigen::MatrixXd C(double t) const;
  Eigen::MatrixXd D(double t) const;
  Eigen::MatrixXd G(double t) const { return spec_.G(t); }
  Eigen::MatrixXd G_inv_Ct(double t) const;
  Eigen::MatrixXd Sv(double t) const;
  Eigen::VectorXd lambda_positive(double t) const;  // diagonal of Lambda(t)
  Eigen::MatrixXd Lambda(double t) const;

  const Eigen::MatrixXd& B() const { return B_; }
  const Eigen::MatrixXd& F() const { return F_; }
  const Eigen::MatrixXd& su_scaled() const { return BBt_; }

  bool a2_satisfied() const { return a2_satisfied_; }
  double max_abar3_norm() const { return max_abar3_norm_; }

 private:
  GameSpec spec_;
  std::array<MatrixFunction, 9> abar_;
  Eigen::MatrixXd B_, F_, BBt_;
  bool a2_satisfied_ = false;
  double max_abar3_norm_ = 0.0;
};

BlockPartition partition(const GameSpec& spec, const Tolerances& tol = {});

}  // namespace ccgame
