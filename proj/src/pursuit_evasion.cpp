#include "ccgame/pursuit_evasion.hpp"

#include <cmath>

namespace ccgame::pursuit_evasion {

namespace {

Eigen::MatrixXd mat(Eigen::Index r, Eigen::Index c, std::initializer_list<double> v) {
  Eigen::MatrixXd m(r, c);
  auto it = v.begin();
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = *it++;
  return m;
}

}  // namespace

GameSpec spec(double eps) {
  GameSpec s;
  s.n = 1;
  s.m = 2;
  s.l = 2;
  s.m1 = 1;
  s.t_f = 1.5;
  s.epsilon = eps;
  s.A1 = MatrixFunction(mat(1, 1, {0.0}));
  s.A2 = MatrixFunction(mat(1, 2, {1.0, 0.0}));
  s.A3 = MatrixFunction(mat(2, 1, {0.0, 0.0}));
  s.A4 = MatrixFunction(mat(2, 2, {0.0, 1.0, 0.0, -1.0}));
  s.C1 = MatrixFunction(mat(1, 2, {1.0, 0.0}));
  s.C2 = MatrixFunction(mat(2, 2, {0.0, 1.0, 0.0, 0.0}));
  s.D1 = MatrixFunction(mat(1, 1, {6.4}));
  s.lambda = {Polynomial(10.0), Polynomial(0.0)};
  s.G = MatrixFunction(mat(2, 2, {5.0, 0.0, 0.0, 4.0}));
  s.F1 = mat(1, 1, {0.5});
  s.x0 = mat(1, 1, {0.0}).col(0);
  s.y0 = mat(2, 1, {2.0, 1.0}).col(0);
  return s;
}

double K1o(double t) { return 8.0 * std::tan(std::atan(1.0 / 16.0) + 1.2 - 0.8 * t); }

double K6o(double t) {
  const double g = std::sqrt(2.0);
  const double th = g * std::tanh(g * (t - 1.5));
  return th / (th - 2.0);
}

const Table& table_eps0() {
  static const Table t{{{0.2, 3.1892, 3.2247, 0.0355, 1.11},
                        {0.1, 1.4184, 1.4258, 0.0074, 0.52},
                        {0.05, 0.6696, 0.6733, 0.0037, 0.55}}};
  return t;
}

const Table& table_u() {
  static const Table t{{{0.2, 3.1892, 3.2401, 0.051, 1.6},
                        {0.1, 1.4184, 1.4234, 0.005, 0.35},
                        {0.05, 0.6696, 0.6702, 5.57e-4, 0.08}}};
  return t;
}

const Table& table_v() {
  static const Table t{{{0.2, 3.1892, 3.1755, 0.0137, 0.43},
                        {0.1, 1.4184, 1.4176, 7.89e-4, 0.06},
                        {0.05, 0.6696, 0.6696, 4.73e-5, 0.007}}};
  return t;
}

}  // namespace ccgame::pursuit_evasion
