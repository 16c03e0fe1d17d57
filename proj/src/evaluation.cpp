#include "ccgame/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <memory>
#include <ostream>

namespace ccgame {

namespace {

struct Coupling {
  std::shared_ptr<const BlockPartition> part;
  MatrixOfTime K0;
  double eps;
  Eigen::Index m;

  // W0 = eps^-1 B' K0, so Su K0 = eps^-1 B W0 and K0 Su K0 = W0' W0.
  Eigen::MatrixXd W0(const Eigen::MatrixXd& K0t) const { return K0t.bottomRows(m) / eps; }
  Eigen::MatrixXd SuK(const Eigen::MatrixXd& K0t) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(K0t.rows(), K0t.cols());
    out.bottomRows(m) = K0t.bottomRows(m) / (eps * eps);
    return out;
  }
};

Coupling make_coupling(const GameSpec& spec, MatrixOfTime K0) {
  if (!(spec.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!K0) throw std::invalid_argument("K0 must be callable");
  return {std::make_shared<const BlockPartition>(spec), std::move(K0), spec.epsilon, spec.m};
}

Config value_config(const GameSpec& spec, const Config& cfg) {
  Config run = with_terminal_layer(cfg, spec.epsilon, spec.t_f);
  run.symmetrize = true;
  return run;
}

MatrixOfTime k0_of(const AsymptoticSolution& asym, double eps) {
  auto shared = std::make_shared<const AsymptoticSolution>(asym);
  return [shared, eps](double t) { return assemble_K0(*shared, eps, t); };
}

// Like with_escape_diagnostics, but the message leads with the unbounded
// guaranteed result rather than an assumption.
template <typename Solve>
Trajectory unbounded_guard(Solve&& solve, double t_f, const std::string& who,
                           const std::string& lead) {
  try {
    return with_escape_diagnostics(solve, t_f, who, lead);
  } catch (const SolverError& e) {
    throw SolverError(e.assumption(), e.escape_time(),
                      lead + " the Riccati solution escapes near t = " +
                          std::to_string(e.escape_time()));
  }
}

double quad(const Eigen::VectorXd& z, const Eigen::MatrixXd& K) { return z.dot(K * z); }

ApproxError approx_error(double value, double J_star, double eps, double psi) {
  ApproxError e;
  e.value = value;
  e.abs_err = std::abs(J_star - value);
  if (std::abs(J_star) >= 1e-12) e.rel_err = e.abs_err / std::abs(J_star);
  if (psi > 0.0) e.C_fit = e.abs_err / (eps * eps * psi);
  return e;
}

}  // namespace

Trajectory solve_L(const GameSpec& spec, const MatrixOfTime& K0, const Config& cfg) {
  const Coupling c = make_coupling(spec, K0);
  Rhs rhs = [c](double t, const Eigen::MatrixXd& L) -> Eigen::MatrixXd {
    const Eigen::MatrixXd K = c.K0(t);
    const Eigen::MatrixXd SvK = c.part->Sv(t) * K;
    const Eigen::MatrixXd Ac = c.part->A(t) - c.SuK(K) + SvK;
    const Eigen::MatrixXd W = c.W0(K);
    const Eigen::MatrixXd Dc = c.part->D(t) + W.transpose() * W - K * SvK;
    const Eigen::MatrixXd LA = L * Ac;
    return -LA - LA.transpose() - Dc;
  };
  return integrate_terminal<double>(rhs, c.part->F(), spec.t_f, value_config(spec, cfg));
}

Trajectory solve_M(const GameSpec& spec, const MatrixOfTime& K0, const Config& cfg) {
  const Coupling c = make_coupling(spec, K0);
  Rhs rhs = [c](double t, const Eigen::MatrixXd& M) -> Eigen::MatrixXd {
    const Eigen::MatrixXd K = c.K0(t);
    const Eigen::MatrixXd Au = c.part->A(t) - c.SuK(K);
    const Eigen::MatrixXd W = c.W0(K);
    const Eigen::MatrixXd Du = c.part->D(t) + W.transpose() * W;
    const Eigen::MatrixXd MA = M * Au;
    return -MA - MA.transpose() - M * c.part->Sv(t) * M - Du;
  };
  const Config run = value_config(spec, cfg);
  return unbounded_guard(
      [&](double t_begin) {
        Config r = run;
        if (r.clamp) r.clamp->begin = std::max(r.clamp->begin, t_begin);
        return integrate_terminal<double>(rhs, c.part->F(), t_begin, spec.t_f, r);
      },
      spec.t_f, "u_eps0", "guaranteed result of u_eps0 is unbounded:");
}

Trajectory solve_N(const GameSpec& spec, const MatrixOfTime& K0, const Config& cfg) {
  const Coupling c = make_coupling(spec, K0);
  Rhs rhs = [c](double t, const Eigen::MatrixXd& N) -> Eigen::MatrixXd {
    const Eigen::MatrixXd K = c.K0(t);
    const Eigen::MatrixXd SvK = c.part->Sv(t) * K;
    const Eigen::MatrixXd Av = c.part->A(t) + SvK;
    const Eigen::MatrixXd Dv = c.part->D(t) - K * SvK;
    const Eigen::MatrixXd WN = c.W0(N);
    const Eigen::MatrixXd NA = N * Av;
    return -NA - NA.transpose() + WN.transpose() * WN - Dv;
  };
  const Config run = value_config(spec, cfg);
  return unbounded_guard(
      [&](double t_begin) {
        Config r = run;
        if (r.clamp) r.clamp->begin = std::max(r.clamp->begin, t_begin);
        return integrate_terminal<double>(rhs, c.part->F(), t_begin, spec.t_f, r);
      },
      spec.t_f, "v_eps0", "guaranteed result of v_eps0 is unbounded:");
}

Trajectory solve_L(const GameSpec& spec, const AsymptoticSolution& asym, const Config& cfg) {
  return solve_L(spec, k0_of(asym, spec.epsilon), cfg);
}
Trajectory solve_M(const GameSpec& spec, const AsymptoticSolution& asym, const Config& cfg) {
  return solve_M(spec, k0_of(asym, spec.epsilon), cfg);
}
Trajectory solve_N(const GameSpec& spec, const AsymptoticSolution& asym, const Config& cfg) {
  return solve_N(spec, k0_of(asym, spec.epsilon), cfg);
}

PsiWeights psi_weights(const Eigen::VectorXd& z0, Eigen::Index n, Eigen::Index m1, double eps) {
  const double a = z0.head(n).norm();
  const double b = z0.segment(n, m1).norm();
  const double c = z0.tail(z0.size() - n - m1).norm();
  PsiWeights w;
  w.psi = a * a + eps * (2 * a * b + b * b + 2 * a * c) + eps * eps * (2 * b * c + c * c);
  // psi_u coincides with psi.
  w.psi_u = w.psi;
  w.psi_v = a * a + eps * (2 * a * b + 2 * a * c) + eps * eps * (b + c) * (b + c);
  return w;
}

ValueReport value_report(const GameSpec& spec, const ExactSolution& exact, const Trajectory& L,
                         const Trajectory& M, const Trajectory& N) {
  const Eigen::VectorXd z0 = spec.z0();
  const double eps = spec.epsilon;
  ValueReport r;
  r.epsilon = eps;
  r.J_star = exact.value;
  r.psi = psi_weights(z0, spec.n, spec.m1, eps);
  r.eps0 = approx_error(quad(z0, L.eval(0.0)), r.J_star, eps, r.psi.psi);
  r.u = approx_error(quad(z0, M.eval(0.0)), r.J_star, eps, r.psi.psi_u);
  r.v = approx_error(quad(z0, N.eval(0.0)), r.J_star, eps, r.psi.psi_v);
  r.tol_order = 1e-6 * (1.0 + std::abs(r.J_star));
  r.lower_bracket = r.v.value <= r.J_star + r.tol_order;
  r.upper_bracket = r.J_star <= r.u.value + r.tol_order;
  return r;
}

double block_error(const ExactSolution& exact, const AsymptoticSolution& asym) {
  double worst = 0.0;
  const auto& grid = exact.K.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto approx = asym.blocks(grid[i], exact.epsilon);
    for (std::size_t a = 0; a < 6; ++a) {
      worst = std::max(worst, (exact.blocks[a].values()[i] - approx[a]).norm());
    }
  }
  return worst;
}

SweepReport convergence_sweep(const GameSpec& spec, std::vector<double> eps_list,
                              const Config& cfg) {
  SweepReport rep;
  std::sort(eps_list.begin(), eps_list.end(), std::greater<double>());
  const auto last = std::unique(eps_list.begin(), eps_list.end());
  if (last != eps_list.end()) {
    rep.warnings.push_back("duplicate epsilon values removed from the sweep");
    eps_list.erase(last, eps_list.end());
  }

  std::optional<AsymptoticSolution> asym;
  try {
    asym = solve_asymptotic(spec, cfg);
  } catch (const std::exception& e) {
    for (double eps : eps_list) rep.failures.push_back({eps, e.what()});
    return rep;
  }

  for (double eps : eps_list) {
    try {
      const GameSpec s = spec.with_epsilon(eps);
      const ExactSolution exact = solve_exact(s, cfg);
      const Trajectory L = solve_L(s, *asym, cfg);
      const Trajectory M = solve_M(s, *asym, cfg);
      const Trajectory N = solve_N(s, *asym, cfg);
      rep.reports.push_back(value_report(s, exact, L, M, N));
      rep.block_error.push_back(block_error(exact, *asym));
    } catch (const std::exception& e) {
      rep.failures.push_back({eps, e.what()});
    }
  }

  for (std::size_t i = 0; i < rep.reports.size(); ++i) {
    const ValueReport& r = rep.reports[i];
    rep.C_max = std::max(rep.C_max, r.eps0.C_fit.value_or(0.0));
    rep.C_u_max = std::max(rep.C_u_max, r.u.C_fit.value_or(0.0));
    rep.C_v_max = std::max(rep.C_v_max, r.v.C_fit.value_or(0.0));
    if (i > 0) {
      if (!(r.eps0.abs_err < rep.reports[i - 1].eps0.abs_err)) rep.eps0_error_monotone = false;
      if (!(rep.block_error[i] < rep.block_error[i - 1])) rep.block_error_monotone = false;
    }
  }
  if (!rep.eps0_error_monotone) rep.warnings.push_back("|J* - J_eps0| does not decrease with eps");
  if (!rep.block_error_monotone) rep.warnings.push_back("E(eps) does not decrease with eps");
  return rep;
}

const ApproxError& select(const ValueReport& r, Approximation which) {
  switch (which) {
    case Approximation::kU:
      return r.u;
    case Approximation::kV:
      return r.v;
    default:
      return r.eps0;
  }
}

void write_error_table_csv(std::ostream& os, const std::vector<ValueReport>& reports,
                           Approximation which) {
  os << "epsilon,J_star,J_approx,abs_err,rel_err_percent\n";
  const auto old = os.precision(10);
  for (const ValueReport& r : reports) {
    const ApproxError& e = select(r, which);
    os << r.epsilon << ',' << r.J_star << ',' << e.value << ',' << e.abs_err << ',';
    if (e.rel_err) {
      os << 100.0 * *e.rel_err;
    } else {
      os << "n/a";
    }
    os << '\n';
  }
  os.precision(old);
}

}  // namespace ccgame
