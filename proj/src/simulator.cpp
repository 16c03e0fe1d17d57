#include "ccgame/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <ostream>
#include <stdexcept>

namespace ccgame {

namespace {

void check_gains(const BlockPartition& part, const FeedbackLaw& law) {
  if (!law.minimizer_gain || !law.maximizer_gain) {
    throw std::invalid_argument("feedback law '" + law.label + "' is missing a gain");
  }
  const double t_f = part.spec().t_f;
  for (double t : {0.0, t_f}) {
    const Eigen::MatrixXd ku = law.minimizer_gain(t);
    const Eigen::MatrixXd kv = law.maximizer_gain(t);
    if (ku.rows() != part.m() || ku.cols() != part.dim()) {
      throw DimensionError("minimizer gain must be " + std::to_string(part.m()) + " x " +
                           std::to_string(part.dim()));
    }
    if (kv.rows() != part.l() || kv.cols() != part.dim()) {
      throw DimensionError("maximizer gain must be " + std::to_string(part.l()) + " x " +
                           std::to_string(part.dim()));
    }
  }
}

}  // namespace

double running_cost_rate(const BlockPartition& part, double t, const Eigen::VectorXd& z,
                         const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  const double eps = part.spec().epsilon;
  return z.dot(part.D(t) * z) + eps * eps * u.squaredNorm() - v.dot(part.G(t) * v);
}

TrajectoryRecord simulate(const GameSpec& spec, const FeedbackLaw& law, const Config& cfg) {
  if (!(spec.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const auto part = std::make_shared<const BlockPartition>(spec);
  check_gains(*part, law);
  const Eigen::Index dim = part->dim();
  const double eps = spec.epsilon;
  const double t_f = spec.t_f;

  Rhs rhs = [part, law, dim](double t, const Eigen::MatrixXd& w) -> Eigen::MatrixXd {
    const Eigen::VectorXd z = w.col(0).head(dim);
    const Eigen::VectorXd u = law.minimizer_gain(t) * z;
    const Eigen::VectorXd v = law.maximizer_gain(t) * z;
    Eigen::MatrixXd dw(dim + 1, 1);
    dw.col(0).head(dim) = part->A(t) * z + part->B() * u + part->C(t) * v;
    dw(dim, 0) = running_cost_rate(*part, t, z, u, v);
    return dw;
  };

  Config run = with_terminal_layer(cfg, eps, t_f);
  run.symmetrize = false;
  for (double t = t_f - 10.0 * eps; t < t_f; t += eps / 5.0) {
    if (t > 0.0) run.output_times.push_back(t);
  }
  Eigen::MatrixXd w0 = Eigen::MatrixXd::Zero(dim + 1, 1);
  w0.col(0).head(dim) = spec.z0();

  TrajectoryRecord rec;
  rec.label = law.label;
  rec.epsilon = eps;
  rec.path = integrate_initial<double>(rhs, w0, 0.0, t_f, run);
  const auto& grid = rec.path.grid();
  rec.grid = grid;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Eigen::VectorXd z = rec.path.values()[i].col(0).head(dim);
    rec.u.emplace_back(law.minimizer_gain(grid[i]) * z);
    rec.v.emplace_back(law.maximizer_gain(grid[i]) * z);
    rec.running_cost.push_back(rec.path.values()[i](dim, 0));
    rec.states.push_back(z);
  }
  const Eigen::VectorXd x_f = rec.states.back().head(spec.n);
  rec.terminal_cost = x_f.dot(spec.F1 * x_f);
  rec.total_cost = rec.running_cost.back() + rec.terminal_cost;
  return rec;
}

double trapezoid_cost(const GameSpec& spec, const FeedbackLaw& law, const TrajectoryRecord& rec,
                      int points) {
  if (points < 2) throw std::invalid_argument("trapezoid_cost: need at least two nodes");
  const BlockPartition part(spec);
  const Eigen::Index dim = part.dim();
  const double t_f = spec.t_f;
  const double h = t_f / (points - 1);
  double sum = 0.0;
  for (int i = 0; i < points; ++i) {
    const double t = i + 1 == points ? t_f : h * i;
    const Eigen::VectorXd z = rec.path.eval(t).col(0).head(dim);
    const double f = running_cost_rate(part, t, z, law.minimizer_gain(t) * z,
                                       law.maximizer_gain(t) * z);
    sum += (i == 0 || i + 1 == points) ? 0.5 * f : f;
  }
  return h * sum;
}

std::vector<ChannelHistory> control_histories(const TrajectoryRecord& rec) {
  std::vector<ChannelHistory> out;
  auto add = [&](const std::vector<Eigen::VectorXd>& series, const std::string& prefix) {
    if (series.empty()) return;
    for (Eigen::Index k = 0; k < series.front().size(); ++k) {
      ChannelHistory ch;
      ch.name = prefix + std::to_string(k + 1);
      ch.values.reserve(series.size());
      for (std::size_t i = 0; i < series.size(); ++i) {
        const double x = series[i](k);
        ch.values.push_back(x);
        if (std::abs(x) > ch.peak) {
          ch.peak = std::abs(x);
          ch.peak_time = rec.grid[i];
        }
      }
      out.push_back(std::move(ch));
    }
  };
  add(rec.u, "u");
  add(rec.v, "v");
  return out;
}

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec) {
  const Eigen::Index nz = rec.states.empty() ? 0 : rec.states.front().size();
  const Eigen::Index nu = rec.u.empty() ? 0 : rec.u.front().size();
  const Eigen::Index nv = rec.v.empty() ? 0 : rec.v.front().size();
  os << "t";
  for (Eigen::Index k = 0; k < nz; ++k) os << ",z_" << k + 1;
  for (Eigen::Index k = 0; k < nu; ++k) os << ",u_" << k + 1;
  for (Eigen::Index k = 0; k < nv; ++k) os << ",v_" << k + 1;
  os << ",running_cost\n";
  const auto old = os.precision(17);
  for (std::size_t i = 0; i < rec.grid.size(); ++i) {
    os << rec.grid[i];
    for (Eigen::Index k = 0; k < nz; ++k) os << ',' << rec.states[i](k);
    for (Eigen::Index k = 0; k < nu; ++k) os << ',' << rec.u[i](k);
    for (Eigen::Index k = 0; k < nv; ++k) os << ',' << rec.v[i](k);
    os << ',' << rec.running_cost[i] << '\n';
  }
  os.precision(old);
}

}  // namespace ccgame
