#pragma once

#include "ccgame/asymptotics.hpp"

#include <algorithm>
#include <functional>

namespace ccgame::testing {

/// Sixth-order central difference of a matrix function of tau.
inline Eigen::MatrixXd central_difference(const std::function<Eigen::MatrixXd(double)>& f,
                                          double tau, double h = 1e-3) {
  return (-f(tau - 3 * h) + 9 * f(tau - 2 * h) - 45 * f(tau - h) + 45 * f(tau + h) -
          9 * f(tau + 2 * h) + f(tau + 3 * h)) /
         (60 * h);
}

struct BoundaryResiduals {
  double k2 = 0.0, k4 = 0.0, k5 = 0.0;
  double max() const { return std::max({k2, k4, k5}); }
};

/// Residuals of the stretched-time correction equations
///   dK2b = K2b L + P K4b + K2b K4b,    P = F1 Abar2 L^-1,
///   dK4b = K4b L + L K4b + K4b^2,
///   dK5b = L K5b + K4b K5b,            L = Lambda^{1/2}(t_f),
/// with d/dtau from finite differences of the evaluators.
inline BoundaryResiduals boundary_residuals(const BoundaryCorrections& bc, double tau) {
  const Eigen::MatrixXd L = bc.lambda_half_tf().asDiagonal();
  const Eigen::MatrixXd& P = bc.F1A2L();
  const Eigen::MatrixXd K2 = bc.K2(tau), K4 = bc.K4(tau), K5 = bc.K5(tau);
  const Eigen::MatrixXd d2 = central_difference([&](double s) { return bc.K2(s); }, tau);
  const Eigen::MatrixXd d4 = central_difference([&](double s) { return bc.K4(s); }, tau);
  const Eigen::MatrixXd d5 = central_difference([&](double s) { return bc.K5(s); }, tau);
  BoundaryResiduals r;
  r.k2 = (d2 - (K2 * L + P * K4 + K2 * K4)).norm();
  r.k4 = (d4 - (K4 * L + L * K4 + K4 * K4)).norm();
  r.k5 = (d5 - (L * K5 + K4 * K5)).norm();
  return r;
}

}  // namespace ccgame::testing
