#pragma once

#include "ccgame/feedback.hpp"
#include "ccgame/game_model.hpp"
#include "ccgame/ode.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace ccgame {

/// Closed-loop run under a linear feedback pair. `path` holds the augmented
/// state (z, running cost) as an (n+m+1) x 1 trajectory.
struct TrajectoryRecord {
  std::string label;
  double epsilon = 0.0;
  std::vector<double> grid;
  std::vector<Eigen::VectorXd> states;
  std::vector<Eigen::VectorXd> u;
  std::vector<Eigen::VectorXd> v;
  std::vector<double> running_cost;
  double terminal_cost = 0.0;  // x(t_f)' F1 x(t_f)
  double total_cost = 0.0;
  Trajectory path;
};

/// Integrand of the cost functional: z' D z + eps^2 u'u - v' G v.
double running_cost_rate(const BlockPartition& part, double t, const Eigen::VectorXd& z,
                         const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Forward integration of dz/dt = A z + B u + C v with u = Ku(t) z,
/// v = Kv(t) z. The running cost is integrated as an extra state. The output
/// grid is refined to eps/5 on [t_f - 10 eps, t_f].
TrajectoryRecord simulate(const GameSpec& spec, const FeedbackLaw& law, const Config& cfg = {});

/// Composite trapezoid rule for the running cost on a uniform grid of
/// `points` nodes, states taken from the dense output of `rec.path`.
/// Independent of the cost state; used as a cross-check.
double trapezoid_cost(const GameSpec& spec, const FeedbackLaw& law, const TrajectoryRecord& rec,
                      int points = 200001);

struct ChannelHistory {
  std::string name;  // "u1", "v2", ...
  std::vector<double> values;
  double peak = 0.0;       // max |value|
  double peak_time = 0.0;  // first time the peak is attained
};

/// One series per control entry, u channels first.
std::vector<ChannelHistory> control_histories(const TrajectoryRecord& rec);

/// Columns t, z_1..z_{n+m}, u_1..u_m, v_1..v_l, running_cost.
void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec);

}  // namespace ccgame
