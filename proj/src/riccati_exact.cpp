#include "ccgame/riccati_exact.hpp"

#include <memory>

namespace ccgame {

ExactSolution solve_exact(const GameSpec& spec, const Config& cfg) {
  if (!(spec.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  check_dimensions(spec);
  const auto part = std::make_shared<const BlockPartition>(spec);
  const double eps = spec.epsilon;
  const Eigen::Index m = spec.m;

  // The eps^-2 coupling enters only through W = eps^-1 B'K, so K Su K = W'W.
  Rhs rhs = [part, eps, m](double t, const Eigen::MatrixXd& K) -> Eigen::MatrixXd {
    const Eigen::MatrixXd A = part->A(t);
    const Eigen::MatrixXd W = K.bottomRows(m) / eps;
    const Eigen::MatrixXd KA = K * A;
    return -KA - KA.transpose() + W.transpose() * W - K * part->Sv(t) * K - part->D(t);
  };

  Config run = with_terminal_layer(cfg, eps, spec.t_f);
  run.symmetrize = true;

  ExactSolution sol;
  sol.K = with_escape_diagnostics(
      [&](double t_begin) {
        Config c = run;
        if (c.clamp) c.clamp->begin = std::max(c.clamp->begin, t_begin);
        return integrate_terminal<double>(rhs, part->F(), t_begin, spec.t_f, c);
      },
      spec.t_f, "A1", "the game Riccati equation for eps = " + std::to_string(eps));
  sol.epsilon = eps;
  sol.n = spec.n;
  sol.m1 = spec.m1;
  const Eigen::VectorXd z0 = spec.z0();
  sol.value = z0.dot(sol.K.eval(0.0) * z0);
  if (spec.m1 >= 1 && spec.m1 < spec.m) sol.blocks = extract_blocks(sol, spec.m1);
  return sol;
}

std::array<Trajectory, 6> extract_blocks(const ExactSolution& sol, Eigen::Index m1) {
  const Eigen::Index n = sol.n;
  const Eigen::Index m = sol.K.rows() - n;
  const Eigen::Index m2 = m - m1;
  const double e = sol.epsilon, e2 = e * e;
  const Eigen::Index o2 = n, o3 = n + m1;
  auto pick = [&](Eigen::Index r, Eigen::Index c, Eigen::Index rows, Eigen::Index cols, double scale,
                  bool symmetric) {
    return sol.K.map_linear(
        [=](const Eigen::MatrixXd& M) -> Eigen::MatrixXd { return M.block(r, c, rows, cols) / scale; },
        symmetric);
  };
  return {pick(0, 0, n, n, 1.0, true),      pick(0, o2, n, m1, e, false),
          pick(0, o3, n, m2, e, false),     pick(o2, o2, m1, m1, e, true),
          pick(o2, o3, m1, m2, e2, false),  pick(o3, o3, m2, m2, e2, true)};
}

FeedbackLaw exact_feedback(const ExactSolution& sol, const GameSpec& spec) {
  const auto K = std::make_shared<const Trajectory>(sol.K);
  const auto part = std::make_shared<const BlockPartition>(spec);
  const double eps = sol.epsilon;
  const Eigen::Index m = spec.m;
  FeedbackLaw law;
  law.minimizer_gain = [K, eps, m](double t) -> Eigen::MatrixXd {
    return -K->eval(t).bottomRows(m) / (eps * eps);
  };
  law.maximizer_gain = [K, part](double t) -> Eigen::MatrixXd {
    return part->G_inv_Ct(t) * K->eval(t);
  };
  law.label = "exact";
  return law;
}

Eigen::MatrixXd riccati_residual(const ExactSolution& sol, const BlockPartition& part, double t) {
  const Eigen::MatrixXd K = sol.K.eval(t);
  const Eigen::MatrixXd dK = sol.K.derivative(t);
  const Eigen::MatrixXd A = part.A(t);
  const Eigen::MatrixXd W = K.bottomRows(part.m()) / sol.epsilon;
  return dK + K * A + A.transpose() * K - W.transpose() * W + K * part.Sv(t) * K + part.D(t);
}

}  // namespace ccgame
