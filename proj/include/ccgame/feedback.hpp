#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>

namespace ccgame {

/// Time-varying linear state feedback for both players:
/// u(z, t) = minimizer_gain(t) z,  v(z, t) = maximizer_gain(t) z.
struct FeedbackLaw {
  std::function<Eigen::MatrixXd(double)> minimizer_gain;  // m x (n+m)
  std::function<Eigen::MatrixXd(double)> maximizer_gain;  // l x (n+m)
  std::string label = "custom";
};

}  // namespace ccgame
