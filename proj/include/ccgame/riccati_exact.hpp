#pragma once

#include "ccgame/feedback.hpp"
#include "ccgame/game_model.hpp"
#include "ccgame/ode.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace ccgame {

/// A Riccati-type terminal-value problem escaped to infinity inside [0, t_f].
/// `assumption` names the hypothesis that failed (A1, A4, ...).
class SolverError : public std::runtime_error {
 public:
  SolverError(std::string assumption, double escape_time, const std::string& what)
      : std::runtime_error(what), assumption_(std::move(assumption)), escape_time_(escape_time) {}
  const std::string& assumption() const { return assumption_; }
  double escape_time() const { return escape_time_; }

 private:
  std::string assumption_;
  double escape_time_;
};

struct ExactSolution {
  Trajectory K;  // (n+m) x (n+m), symmetric
  double epsilon = 0.0;
  double value = 0.0;  // z0' K(0) z0
  Eigen::Index n = 0;
  Eigen::Index m1 = 0;
  /// K1..K6 with the eps / eps^2 factors divided out.
  std::array<Trajectory, 6> blocks;
};

/// Backward integration of
///   dK/dt = -K A - A' K + K [eps^-2 B B' - Sv] K - D,  K(t_f) = F.
ExactSolution solve_exact(const GameSpec& spec, const Config& cfg = {});

/// K1 = K11, K2 = K12/eps, K3 = K13/eps, K4 = K22/eps, K5 = K23/eps^2,
/// K6 = K33/eps^2 for the (n, m1, m - m1) split.
std::array<Trajectory, 6> extract_blocks(const ExactSolution& sol, Eigen::Index m1);

/// u* = -eps^-2 B' K z, v* = G^-1 C' K z.
FeedbackLaw exact_feedback(const ExactSolution& sol, const GameSpec& spec);

/// dK/dt + K A + A' K - K [Su - Sv] K + D at t, with dK/dt from the dense
/// output.
Eigen::MatrixXd riccati_residual(const ExactSolution& sol, const BlockPartition& part, double t);

/// Runs `solve` (a backward integration down to a given lower time) and, on
/// escape, bisects that lower time to locate the escape time to `resolution`.
/// Rethrows as SolverError naming `assumption`.
template <typename Solve>
auto with_escape_diagnostics(Solve&& solve, double t_f, const std::string& assumption,
                             const std::string& problem, double resolution = 1e-4) {
  try {
    return solve(0.0);
  } catch (const IntegrationError& e) {
    if (e.kind() != IntegrationError::Kind::kBlowup &&
        e.kind() != IntegrationError::Kind::kStepTooSmall) {
      throw;
    }
    // Integration down to `lo` fails, down to `hi` succeeds.
    double lo = 0.0, hi = t_f;
    while (hi - lo > resolution) {
      const double mid = 0.5 * (lo + hi);
      try {
        solve(mid);
        hi = mid;
      } catch (const IntegrationError&) {
        lo = mid;
      }
    }
    throw SolverError(assumption, 0.5 * (lo + hi),
                      "assumption " + assumption + " fails: " + problem +
                          " escapes to infinity near t = " + std::to_string(0.5 * (lo + hi)));
  }
}

}  // namespace ccgame
