#pragma once

#include "ccgame/game_model.hpp"

#include <array>

namespace ccgame::pursuit_evasion {

/// Planar interception with one slow state (x, the miss distance), two fast
/// states and two evader controls:
///   dx/dt = y1 + v1,  dy1/dt = y2 + u1 + v2,  dy2/dt = -y2 + u2,
///   J = 0.5 x(1.5)^2 + int_0^1.5 [6.4 x^2 + 10 y1^2 + eps^2 |u|^2 - 5 v1^2 - 4 v2^2] dt,
/// from x(0) = 0, y(0) = (2, 1). The split is m1 = 1.
GameSpec spec(double eps);

/// Outer terms in closed form.
double K1o(double t);  // 8 tan(atan(1/16) + 1.2 - 0.8 t)
double K6o(double t);  // g tanh(g (t - 1.5)) / (g tanh(g (t - 1.5)) - 2), g = sqrt(2)

/// Reference error tables (eps, J_star, J_approx, abs_err, rel_err_percent)
/// for J_eps0, J_u,eps0 and J_v,eps0, as 4-digit rounded values.
struct TableRow {
  double epsilon, J_star, J_approx, abs_err, rel_err_percent;
};
using Table = std::array<TableRow, 3>;
const Table& table_eps0();
const Table& table_u();
const Table& table_v();

}  // namespace ccgame::pursuit_evasion
