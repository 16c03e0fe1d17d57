#pragma once

#include "ccgame/asymptotics.hpp"
#include "ccgame/game_model.hpp"
#include "ccgame/ode.hpp"
#include "ccgame/riccati_exact.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ccgame {

using MatrixOfTime = std::function<Eigen::MatrixXd(double)>;

/// Value of the pair (u_eps0, v_eps0) built from an approximation K0:
///   dL/dt = -L Ac - Ac' L - Dc,  L(t_f) = F,
/// with Ac = A - (Su - Sv) K0 and Dc = D + K0 (Su - Sv) K0.
Trajectory solve_L(const GameSpec& spec, const MatrixOfTime& K0, const Config& cfg = {});
Trajectory solve_L(const GameSpec& spec, const AsymptoticSolution& asym, const Config& cfg = {});

/// Guaranteed result of u_eps0:
///   dM/dt = -M Au - Au' M - M Sv M - Du,  M(t_f) = F,
/// Au = A - Su K0, Du = D + K0 Su K0.
Trajectory solve_M(const GameSpec& spec, const MatrixOfTime& K0, const Config& cfg = {});
Trajectory solve_M(const GameSpec& spec, const AsymptoticSolution& asym, const Config& cfg = {});

/// Guaranteed result of v_eps0:
///   dN/dt = -N Av - Av' N + N Su N - Dv,  N(t_f) = F,
/// Av = A + Sv K0, Dv = D - K0 Sv K0.
Trajectory solve_N(const GameSpec& spec, const MatrixOfTime& K0, const Config& cfg = {});
Trajectory solve_N(const GameSpec& spec, const AsymptoticSolution& asym, const Config& cfg = {});

/// Bound weights for z0 = (z01, z02, z03) in E^n x E^m1 x E^(m-m1).
struct PsiWeights {
  double psi = 0.0;
  double psi_u = 0.0;
  double psi_v = 0.0;
};
PsiWeights psi_weights(const Eigen::VectorXd& z0, Eigen::Index n, Eigen::Index m1, double eps);

struct ApproxError {
  double value = 0.0;
  double abs_err = 0.0;
  std::optional<double> rel_err;  // abs_err / |J_star|; empty when J_star ~ 0
  std::optional<double> C_fit;    // abs_err / (eps^2 psi); empty when psi == 0
};

struct ValueReport {
  double epsilon = 0.0;
  double J_star = 0.0;
  ApproxError eps0;  // J_eps0 = z0' L(0) z0
  ApproxError u;     // J_u,eps0 = z0' M(0) z0
  ApproxError v;     // J_v,eps0 = z0' N(0) z0
  PsiWeights psi;
  bool lower_bracket = true;  // J_v <= J_star + tol
  bool upper_bracket = true;  // J_star <= J_u + tol
  double tol_order = 0.0;
};

ValueReport value_report(const GameSpec& spec, const ExactSolution& exact, const Trajectory& L,
                         const Trajectory& M, const Trajectory& N);

/// max over alpha and the exact solution's grid of ||K_alpha(t) - K_alpha0(t)||.
double block_error(const ExactSolution& exact, const AsymptoticSolution& asym);

struct SweepFailure {
  double epsilon;
  std::string message;
};

struct SweepReport {
  std::vector<ValueReport> reports;  // descending eps
  std::vector<double> block_error;   // E(eps), aligned with reports
  std::vector<SweepFailure> failures;
  std::vector<std::string> warnings;
  /// Sweep maxima of the fitted constants.
  double C_max = 0.0, C_u_max = 0.0, C_v_max = 0.0;
  bool eps0_error_monotone = true;
  bool block_error_monotone = true;
};

/// Runs the exact and approximate solvers for each eps. Solver errors are
/// recorded per eps and the sweep continues.
SweepReport convergence_sweep(const GameSpec& spec, std::vector<double> eps_list,
                              const Config& cfg = {});

enum class Approximation { kEps0, kU, kV };

/// Columns epsilon, J_star, J_approx, abs_err, rel_err_percent.
void write_error_table_csv(std::ostream& os, const std::vector<ValueReport>& reports,
                           Approximation which);

const ApproxError& select(const ValueReport& r, Approximation which);

}  // namespace ccgame
