#include "ccgame/asymptotics.hpp"

#include "ccgame/riccati_exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ccgame {

namespace {

void require_a2(const BlockPartition& part) {
  if (!part.a2_satisfied()) {
    throw AssumptionError("assumption A2 violated: max ||Abar3(t)|| = " +
                          std::to_string(part.max_abar3_norm()) + " (must vanish)");
  }
}

Eigen::VectorXd inv_sqrt(const Eigen::VectorXd& lam) { return lam.cwiseSqrt().cwiseInverse(); }

}  // namespace

BoundaryCorrections::BoundaryCorrections(const BlockPartition& part)
    : n_(part.n()), m1_(part.m1()), m2_(part.m2()) {
  const double t_f = part.spec().t_f;
  const Eigen::VectorXd lam = part.lambda_positive(t_f);
  if ((lam.array() <= 0.0).any()) {
    throw AssumptionError("Lambda(t_f) must be positive definite");
  }
  sqrt_lambda_ = lam.cwiseSqrt();
  beta_ = sqrt_lambda_.minCoeff();
  f1a2l_ = part.spec().F1 * part.abar(2)(t_f) * sqrt_lambda_.cwiseInverse().asDiagonal();
  a6_ = part.abar(6)(t_f);
}

Eigen::MatrixXd BoundaryCorrections::K2(double tau) const {
  if (tau < tau_cut()) return Eigen::MatrixXd::Zero(n_, m1_);
  const Eigen::ArrayXd q = (2.0 * tau * sqrt_lambda_.array()).exp();
  const Eigen::VectorXd w = (q / (1.0 + q)).matrix();
  return -2.0 * f1a2l_ * w.asDiagonal();
}

Eigen::MatrixXd BoundaryCorrections::K4(double tau) const {
  if (tau < tau_cut()) return Eigen::MatrixXd::Zero(m1_, m1_);
  const Eigen::ArrayXd q = (2.0 * tau * sqrt_lambda_.array()).exp();
  const Eigen::VectorXd d = (-2.0 * sqrt_lambda_.array() * q / (1.0 + q)).matrix();
  return d.asDiagonal();
}

Eigen::MatrixXd BoundaryCorrections::K5(double tau) const {
  if (tau < tau_cut()) return Eigen::MatrixXd::Zero(m1_, m2_);
  const Eigen::ArrayXd h = (tau * sqrt_lambda_.array()).exp();
  const Eigen::VectorXd w = (h / (1.0 + h * h)).matrix();
  return -2.0 * w.asDiagonal() * a6_;
}

DecayFit fit_decay_constants(const BoundaryCorrections& bc, double tau_min, int points) {
  DecayFit fit;
  const double beta = bc.beta();
  for (int i = 0; i < points; ++i) {
    const double tau = tau_min * (1.0 - static_cast<double>(i) / (points - 1));
    fit.a2 = std::max(fit.a2, bc.K2(tau).norm() * std::exp(-2.0 * beta * tau));
    fit.a4 = std::max(fit.a4, bc.K4(tau).norm() * std::exp(-2.0 * beta * tau));
    fit.a5 = std::max(fit.a5, bc.K5(tau).norm() * std::exp(-beta * tau));
  }
  return fit;
}

BoundaryCorrections boundary_corrections(const BlockPartition& part) {
  return BoundaryCorrections(part);
}

Trajectory solve_outer_K1(const BlockPartition& part, const Config& cfg) {
  require_a2(part);
  const BlockPartition* p = &part;
  Rhs rhs = [p](double t, const Eigen::MatrixXd& K) -> Eigen::MatrixXd {
    const Eigen::MatrixXd A1 = p->abar(1)(t);
    const Eigen::MatrixXd A2 = p->abar(2)(t);
    const Eigen::VectorXd lam = p->lambda_positive(t);
    const Eigen::MatrixXd S = A2 * lam.cwiseInverse().asDiagonal() * A2.transpose() - p->sv(1, t);
    const Eigen::MatrixXd KA = K * A1;
    return -KA - KA.transpose() + K * S * K - p->spec().D1(t);
  };
  Config run = cfg;
  run.symmetrize = true;
  const double t_f = part.spec().t_f;
  return with_escape_diagnostics(
      [&](double t_begin) {
        return integrate_terminal<double>(rhs, part.spec().F1, t_begin, t_f, run);
      },
      t_f, "A4", "the outer game Riccati equation for K1");
}

Trajectory solve_outer_K6(const BlockPartition& part, const Config& cfg) {
  const BlockPartition* p = &part;
  Rhs rhs = [p](double t, const Eigen::MatrixXd& K) -> Eigen::MatrixXd {
    const Eigen::MatrixXd A9 = p->abar(9)(t);
    const Eigen::MatrixXd A6 = p->abar(6)(t);
    const Eigen::MatrixXd KA = K * A9;
    return -KA - KA.transpose() + K * K - A6.transpose() * A6;
  };
  Config run = cfg;
  run.symmetrize = true;
  const double t_f = part.spec().t_f;
  return with_escape_diagnostics(
      [&](double t_begin) {
        return integrate_terminal<double>(rhs, Eigen::MatrixXd::Zero(part.m2(), part.m2()), t_begin,
                                          t_f, run);
      },
      t_f, "K6 existence", "the outer control Riccati equation for K6");
}

OuterAlgebraic build_outer_algebraic(const Trajectory& K1o, const BlockPartition& part) {
  const auto& grid = K1o.grid();
  std::vector<Eigen::MatrixXd> k2, dk2, k4, dk4, k5, dk5;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    const Eigen::MatrixXd& K1 = K1o.values()[i];
    const Eigen::MatrixXd& dK1 = K1o.derivs()[i];
    const Eigen::MatrixXd A2 = part.abar(2)(t);
    const Eigen::MatrixXd dA2 = part.abar(2).derivative(t);
    const Eigen::VectorXd lam = part.lambda_positive(t);
    Eigen::VectorXd dlam(part.m1());
    for (Eigen::Index p = 0; p < part.m1(); ++p) {
      dlam(p) = part.spec().lambda[p].derivative()(t);
    }
    const Eigen::VectorXd r = inv_sqrt(lam);
    // d/dt lambda^{-1/2} = -lambda' / (2 lambda^{3/2})
    const Eigen::VectorXd dr = (-0.5 * dlam.array() * r.array().cube()).matrix();

    k2.emplace_back(K1 * A2 * r.asDiagonal());
    dk2.emplace_back(dK1 * A2 * r.asDiagonal() + K1 * dA2 * r.asDiagonal() +
                     K1 * A2 * dr.asDiagonal());
    k4.emplace_back(lam.cwiseSqrt().asDiagonal());
    dk4.emplace_back((0.5 * dlam.array() * r.array()).matrix().asDiagonal());
    k5.emplace_back(part.abar(6)(t));
    dk5.emplace_back(part.abar(6).derivative(t));
  }
  return {Trajectory(grid, std::move(k2), std::move(dk2), false),
          Trajectory(grid, std::move(k4), std::move(dk4), true),
          Trajectory(grid, std::move(k5), std::move(dk5), false)};
}

OuterTerms AsymptoticSolution::outer(double t) const {
  const BlockPartition& p = *partition;
  OuterTerms o;
  o.K1 = K1o.eval(t);
  const Eigen::VectorXd lam = p.lambda_positive(t);
  o.K2 = o.K1 * p.abar(2)(t) * inv_sqrt(lam).asDiagonal();
  o.K3 = Eigen::MatrixXd::Zero(p.n(), p.m2());
  o.K4 = lam.cwiseSqrt().asDiagonal();
  o.K5 = p.abar(6)(t);
  o.K6 = K6o.eval(t);
  return o;
}

ZeroOrderBlocks AsymptoticSolution::blocks(double t, double eps) const {
  const double tau = (t - partition->spec().t_f) / eps;
  OuterTerms o = outer(t);
  return {std::move(o.K1), o.K2 + boundary.K2(tau), std::move(o.K3), o.K4 + boundary.K4(tau),
          o.K5 + boundary.K5(tau), std::move(o.K6)};
}

AsymptoticSolution solve_asymptotic(const GameSpec& spec, const Config& cfg) {
  auto part = std::make_shared<const BlockPartition>(spec);
  require_a2(*part);
  AsymptoticSolution sol;
  sol.partition = part;
  double beta_bar = std::numeric_limits<double>::infinity();
  for (Eigen::Index p = 0; p < part->m1(); ++p) {
    const double lo = spec.lambda[p].minimum_on(0.0, spec.t_f).second;
    if (!(lo > 0.0)) {
      throw AssumptionError("lambda_" + std::to_string(p + 1) + " not positive on [0,t_f]");
    }
    beta_bar = std::min(beta_bar, std::sqrt(lo));
  }
  sol.K1o = solve_outer_K1(*part, cfg);
  sol.K6o = solve_outer_K6(*part, cfg);
  auto alg = build_outer_algebraic(sol.K1o, *part);
  sol.K2o = std::move(alg.K2o);
  sol.K4o = std::move(alg.K4o);
  sol.K5o = std::move(alg.K5o);
  sol.boundary = BoundaryCorrections(*part);
  sol.beta = sol.boundary.beta();
  sol.beta_bar = beta_bar;
  return sol;
}

Eigen::MatrixXd assemble_K0(const AsymptoticSolution& asym, double eps, double t) {
  const BlockPartition& p = *asym.partition;
  const auto b = asym.blocks(t, eps);
  const Eigen::Index n = p.n(), m1 = p.m1(), m2 = p.m2();
  const Eigen::Index o2 = n, o3 = n + m1;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(p.dim(), p.dim());
  K.block(0, 0, n, n) = b[0];
  K.block(0, o2, n, m1) = eps * b[1];
  K.block(0, o3, n, m2) = eps * b[2];
  K.block(o2, o2, m1, m1) = eps * b[3];
  K.block(o2, o3, m1, m2) = (eps * eps) * b[4];
  K.block(o3, o3, m2, m2) = (eps * eps) * b[5];
  return K.selfadjointView<Eigen::Upper>();
}

FeedbackLaw approximate_feedback(const AsymptoticSolution& asym, double eps) {
  const auto shared = std::make_shared<const AsymptoticSolution>(asym);
  const Eigen::Index m = asym.partition->m();
  FeedbackLaw law;
  law.minimizer_gain = [shared, eps, m](double t) -> Eigen::MatrixXd {
    return -assemble_K0(*shared, eps, t).bottomRows(m) / (eps * eps);
  };
  law.maximizer_gain = [shared, eps](double t) -> Eigen::MatrixXd {
    return shared->partition->G_inv_Ct(t) * assemble_K0(*shared, eps, t);
  };
  law.label = "asymptotic";
  return law;
}

ReducedGame solve_reduced_game(const BlockPartition& part, const Config& cfg) {
  require_a2(part);
  ReducedGame game;
  game.K1o = solve_outer_K1(part, cfg);
  const Eigen::VectorXd x0 = part.spec().x0;
  game.value = x0.dot(game.K1o.eval(0.0) * x0);
  const auto K1o = std::make_shared<const Trajectory>(game.K1o);
  const auto p = std::make_shared<const BlockPartition>(part);
  // Abar2 enters transposed so the gain is m1 x n; likewise C1'.
  game.y_gain = [K1o, p](double t) -> Eigen::MatrixXd {
    return -(p->lambda_positive(t).cwiseInverse().asDiagonal() * p->abar(2)(t).transpose()) *
           K1o->eval(t);
  };
  game.v_gain = [K1o, p](double t) -> Eigen::MatrixXd {
    return p->spec().G(t).llt().solve(p->spec().C1(t).transpose()) * K1o->eval(t);
  };
  return game;
}

}  // namespace ccgame
