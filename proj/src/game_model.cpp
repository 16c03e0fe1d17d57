#include "ccgame/game_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ccgame {

namespace {

void expect_shape(const std::string& field, Eigen::Index rows, Eigen::Index cols,
                  Eigen::Index want_rows, Eigen::Index want_cols) {
  if (rows != want_rows || cols != want_cols) {
    std::ostringstream os;
    os << "dimension mismatch in " << field << ": got " << rows << "x" << cols << ", expected "
       << want_rows << "x" << want_cols;
    throw DimensionError(os.str());
  }
}

double min_eigenvalue(const Eigen::MatrixXd& M) {
  if (M.size() == 0) return 0.0;
  const Eigen::MatrixXd sym = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double asymmetry(const Eigen::MatrixXd& M) {
  return M.size() == 0 ? 0.0 : (M - M.transpose()).norm();
}

std::vector<double> uniform_grid(double t_f, int points) {
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[i] = t_f * i / (points - 1);
  grid.back() = t_f;
  return grid;
}

// Sign-definiteness of a matrix function over the validation grid.
// `strict` selects the PD threshold, otherwise PSD.
InvariantCheck check_definite(const std::string& name, const MatrixFunction& f,
                              const std::vector<double>& grid, const Tolerances& tol,
                              bool strict) {
  InvariantCheck check{name, true, grid.front(), 0.0, ""};
  double worst_margin = std::numeric_limits<double>::infinity();
  for (double t : grid) {
    const Eigen::MatrixXd M = f(t);
    const double scale = 1.0 + M.norm();
    const double lo = min_eigenvalue(M);
    const double bound = strict ? tol.pd_rel * scale : -tol.psd_rel * scale;
    const bool symmetric = asymmetry(M) <= tol.psd_rel * scale;
    const double margin = symmetric ? lo - bound : -std::numeric_limits<double>::infinity();
    if (margin < worst_margin) {
      worst_margin = margin;
      check.worst_t = t;
      check.worst_value = lo;
    }
    if (!symmetric) {
      check.passed = false;
      check.message = name + " not symmetric";
      return check;
    }
  }
  if (worst_margin < 0.0) {
    check.passed = false;
    check.message = name + (strict ? " not positive definite" : " not positive semi-definite");
  }
  return check;
}

}  // namespace

Eigen::VectorXd GameSpec::z0() const {
  Eigen::VectorXd z(n + m);
  z << x0, y0;
  return z;
}

GameSpec GameSpec::with_epsilon(double eps) const {
  GameSpec copy = *this;
  copy.epsilon = eps;
  return copy;
}

void check_dimensions(const GameSpec& s) {
  if (s.n < 1 || s.m < 1 || s.l < 1) {
    throw DimensionError("dimensions n, m, l must all be at least 1");
  }
  expect_shape("A1", s.A1.rows(), s.A1.cols(), s.n, s.n);
  expect_shape("A2", s.A2.rows(), s.A2.cols(), s.n, s.m);
  expect_shape("A3", s.A3.rows(), s.A3.cols(), s.m, s.n);
  expect_shape("A4", s.A4.rows(), s.A4.cols(), s.m, s.m);
  expect_shape("C1", s.C1.rows(), s.C1.cols(), s.n, s.l);
  expect_shape("C2", s.C2.rows(), s.C2.cols(), s.m, s.l);
  expect_shape("D1", s.D1.rows(), s.D1.cols(), s.n, s.n);
  expect_shape("G", s.G.rows(), s.G.cols(), s.l, s.l);
  expect_shape("F1", s.F1.rows(), s.F1.cols(), s.n, s.n);
  expect_shape("lambda", static_cast<Eigen::Index>(s.lambda.size()), 1, s.m, 1);
  expect_shape("x0", s.x0.size(), 1, s.n, 1);
  expect_shape("y0", s.y0.size(), 1, s.m, 1);
}

const InvariantCheck* ValidationReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os << (a2_satisfied ? "A2 satisfied" : "A2 violated (asymptotics unavailable)");
  if (ok) {
    os << "; all invariants pass";
  } else {
    os << "; failed:";
    for (const auto& c : checks) {
      if (!c.passed) os << " [" << c.message << " at t=" << c.worst_t << ", value " << c.worst_value << "]";
    }
  }
  return os.str();
}

ValidationReport validate_spec(const GameSpec& spec, const Tolerances& tol) {
  check_dimensions(spec);
  ValidationReport report;
  auto add = [&report](InvariantCheck c) {
    report.ok = report.ok && c.passed;
    report.checks.push_back(std::move(c));
  };

  add({"horizon", spec.t_f > 0.0, 0.0, spec.t_f, spec.t_f > 0.0 ? "" : "t_f must be positive"});
  add({"epsilon", spec.epsilon > 0.0, 0.0, spec.epsilon,
       spec.epsilon > 0.0 ? "" : "epsilon must be positive"});
  {
    const bool good = spec.m > 1 && spec.m1 >= 1 && spec.m1 < spec.m;
    add({"fast split", good, 0.0, static_cast<double>(spec.m1),
         good ? "" : "need m > 1 and 1 <= m1 < m"});
  }
  {
    InvariantCheck deg{"polynomial degree", true, 0.0, 0.0, ""};
    auto look = [&](const std::string& field, int d) {
      if (d > tol.max_degree && deg.passed) {
        deg.passed = false;
        deg.worst_value = d;
        deg.message = field + " has degree " + std::to_string(d) + " > " +
                      std::to_string(tol.max_degree);
      }
    };
    look("A1", spec.A1.degree());
    look("A2", spec.A2.degree());
    look("A3", spec.A3.degree());
    look("A4", spec.A4.degree());
    look("C1", spec.C1.degree());
    look("C2", spec.C2.degree());
    look("D1", spec.D1.degree());
    look("G", spec.G.degree());
    for (std::size_t k = 0; k < spec.lambda.size(); ++k) {
      look("lambda_" + std::to_string(k + 1), spec.lambda[k].degree());
    }
    add(deg);
  }
  if (!(spec.t_f > 0.0)) {
    report.ok = false;
    return report;
  }

  const auto grid = uniform_grid(spec.t_f, std::max(tol.grid_points, 2));
  add(check_definite("F1", MatrixFunction(spec.F1), {0.0}, tol, false));
  add(check_definite("D1", spec.D1, grid, tol, false));
  add(check_definite("G", spec.G, grid, tol, true));

  // lambda_p > 0 for p <= m1 (exact minimum over [0, t_f]) and
  // lambda_r == 0 for r > m1.
  for (Eigen::Index k = 0; k < spec.m; ++k) {
    const Polynomial& lam = spec.lambda[k];
    const std::string label = "lambda_" + std::to_string(k + 1);
    if (k < spec.m1) {
      auto [t_min, v_min] = lam.minimum_on(0.0, spec.t_f);
      for (double t : grid) {
        if (lam(t) < v_min) {
          v_min = lam(t);
          t_min = t;
        }
      }
      const bool good = v_min > 0.0;
      add({label + " positive", good, t_min, v_min,
           good ? "" : label + " not positive on [0,t_f]"});
    } else {
      const bool good = lam.is_zero(tol.zero);
      double worst = 0.0;
      double worst_t = 0.0;
      for (double t : grid) {
        if (std::abs(lam(t)) > std::abs(worst)) {
          worst = lam(t);
          worst_t = t;
        }
      }
      add({label + " zero", good, worst_t, worst, good ? "" : label + " must vanish identically"});
    }
  }

  if (spec.m1 >= 1 && spec.m1 < spec.m) {
    const MatrixFunction abar3 = spec.A2.block(0, spec.m1, spec.n, spec.m - spec.m1);
    double worst = 0.0;
    for (double t : grid) worst = std::max(worst, abar3(t).norm());
    report.max_abar3_norm = worst;
    report.a2_satisfied = worst <= tol.zero;
    if (!report.a2_satisfied) {
      report.warnings.push_back("assumption A2 violated: max ||Abar3|| = " + std::to_string(worst) +
                                "; asymptotic solution unavailable");
    }
  }
  return report;
}

BlockPartition::BlockPartition(GameSpec spec, const Tolerances& tol) : spec_(std::move(spec)) {
  check_dimensions(spec_);
  if (spec_.m1 < 1 || spec_.m1 >= spec_.m) {
    throw DimensionError("partition: need 1 <= m1 < m");
  }
  const Eigen::Index n = spec_.n, m1 = spec_.m1, m2 = spec_.m - spec_.m1;
  abar_[0] = spec_.A1;
  abar_[1] = spec_.A2.block(0, 0, n, m1);
  abar_[2] = spec_.A2.block(0, m1, n, m2);
  abar_[3] = spec_.A3.block(0, 0, m1, n);
  abar_[4] = spec_.A4.block(0, 0, m1, m1);
  abar_[5] = spec_.A4.block(0, m1, m1, m2);
  abar_[6] = spec_.A3.block(m1, 0, m2, n);
  abar_[7] = spec_.A4.block(m1, 0, m2, m1);
  abar_[8] = spec_.A4.block(m1, m1, m2, m2);

  const Eigen::Index dim = spec_.n + spec_.m;
  B_ = Eigen::MatrixXd::Zero(dim, spec_.m);
  B_.bottomRows(spec_.m).setIdentity();
  BBt_ = B_ * B_.transpose();
  F_ = Eigen::MatrixXd::Zero(dim, dim);
  F_.topLeftCorner(n, n) = spec_.F1;

  const int points = std::max(tol.grid_points, 2);
  for (int i = 0; i < points; ++i) {
    const double t = spec_.t_f * i / (points - 1);
    max_abar3_norm_ = std::max(max_abar3_norm_, abar_[2](t).norm());
  }
  a2_satisfied_ = max_abar3_norm_ <= tol.zero;
}

Eigen::MatrixXd BlockPartition::A(double t) const {
  Eigen::MatrixXd a(dim(), dim());
  a << spec_.A1(t), spec_.A2(t), spec_.A3(t), spec_.A4(t);
  return a;
}

Eigen::MatrixXd BlockPartition::C(double t) const {
  Eigen::MatrixXd c(dim(), l());
  c << spec_.C1(t), spec_.C2(t);
  return c;
}

Eigen::MatrixXd BlockPartition::D(double t) const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(dim(), dim());
  d.topLeftCorner(n(), n()) = spec_.D1(t);
  for (Eigen::Index k = 0; k < m(); ++k) d(n() + k, n() + k) = spec_.lambda[k](t);
  return d;
}

Eigen::MatrixXd BlockPartition::G_inv_Ct(double t) const {
  return spec_.G(t).llt().solve(C(t).transpose());
}

Eigen::MatrixXd BlockPartition::Sv(double t) const {
  const Eigen::MatrixXd c = C(t);
  const Eigen::MatrixXd s = c * spec_.G(t).llt().solve(c.transpose());
  return 0.5 * (s + s.transpose());
}

Eigen::MatrixXd BlockPartition::sv(int k, double t) const {
  const Eigen::MatrixXd s = Sv(t);
  const Eigen::Index o[3] = {0, n(), n() + m1()};
  const Eigen::Index w[3] = {n(), m1(), m2()};
  // (row block, col block) of the upper triangle, in reading order.
  static constexpr int rb[6] = {0, 0, 0, 1, 1, 2};
  static constexpr int cb[6] = {0, 1, 2, 1, 2, 2};
  if (k < 1 || k > 6) throw std::out_of_range("Sv block index must be 1..6");
  return s.block(o[rb[k - 1]], o[cb[k - 1]], w[rb[k - 1]], w[cb[k - 1]]);
}

Eigen::VectorXd BlockPartition::lambda_positive(double t) const {
  Eigen::VectorXd v(m1());
  for (Eigen::Index k = 0; k < m1(); ++k) v(k) = spec_.lambda[k](t);
  return v;
}

Eigen::MatrixXd BlockPartition::Lambda(double t) const {
  return lambda_positive(t).asDiagonal();
}

BlockPartition partition(const GameSpec& spec, const Tolerances& tol) {
  return BlockPartition(spec, tol);
}

}  // namespace ccgame
