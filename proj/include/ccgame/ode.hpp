#pragma once

// Matrix-valued ODE integration with dense (cubic Hermite) output.
//
// Terminal-value problems are integrated backward from t_f; the returned
// trajectory is always stored on an increasing grid.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ccgame {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

enum class Method { kRk4, kRk45 };

/// A sub-interval on which the step size is capped, used to resolve
/// boundary layers of width O(eps).
template <typename Scalar>
struct StepClamp {
  Scalar begin;
  Scalar end;
  Scalar h_max;
};

template <typename Scalar>
struct IntegratorConfig {
  Method method = Method::kRk45;
  Scalar rtol = Scalar(1e-8);
  Scalar atol = Scalar(1e-10);
  Scalar h_init = Scalar(1e-3);
  Scalar h_min = Scalar(1e-14);
  Scalar h_max = std::numeric_limits<Scalar>::infinity();
  bool symmetrize = false;
  long max_steps = 2'000'000;
  /// Uniform output points forced into the step sequence (0 disables).
  int output_points = 401;
  /// Additional times the step sequence must hit exactly.
  std::vector<Scalar> output_times;
  std::optional<StepClamp<Scalar>> clamp;
  /// Norm beyond which the solution is declared to escape.
  Scalar overflow_guard = Scalar(1e12);

  void validate() const {
    if (!(rtol > 0) || !(atol > 0)) throw std::invalid_argument("rtol and atol must be positive");
    if (!(h_min <= h_init && h_init <= h_max)) {
      throw std::invalid_argument("step bounds must satisfy h_min <= h_init <= h_max");
    }
    if (max_steps <= 0) throw std::invalid_argument("max_steps must be positive");
  }
};

class IntegrationError : public std::runtime_error {
 public:
  enum class Kind { kBlowup, kMaxSteps, kStepTooSmall };
  IntegrationError(Kind kind, double t, const std::string& what)
      : std::runtime_error(what), kind_(kind), t_(t) {}
  Kind kind() const { return kind_; }
  /// Time at which the integrator gave up.
  double t() const { return t_; }

 private:
  Kind kind_;
  double t_;
};

/// Time-gridded matrix function with derivative samples for Hermite
/// interpolation. Values at grid points are returned exactly.
template <typename Scalar>
class MatrixTrajectory {
 public:
  using Matrix = Mat<Scalar>;

  MatrixTrajectory() = default;
  MatrixTrajectory(std::vector<Scalar> grid, std::vector<Matrix> values,
                   std::vector<Matrix> derivs, bool symmetric)
      : grid_(std::move(grid)),
        values_(std::move(values)),
        derivs_(std::move(derivs)),
        symmetric_(symmetric) {
    if (grid_.empty() || grid_.size() != values_.size() || grid_.size() != derivs_.size()) {
      throw std::invalid_argument("MatrixTrajectory: inconsistent sample counts");
    }
    for (std::size_t i = 1; i < grid_.size(); ++i) {
      if (!(grid_[i] > grid_[i - 1])) {
        throw std::invalid_argument("MatrixTrajectory: grid must be strictly increasing");
      }
    }
  }

  const std::vector<Scalar>& grid() const { return grid_; }
  const std::vector<Matrix>& values() const { return values_; }
  const std::vector<Matrix>& derivs() const { return derivs_; }
  bool symmetric() const { return symmetric_; }
  std::size_t size() const { return grid_.size(); }
  Scalar t_begin() const { return grid_.front(); }
  Scalar t_end() const { return grid_.back(); }
  Eigen::Index rows() const { return values_.front().rows(); }
  Eigen::Index cols() const { return values_.front().cols(); }

  Matrix operator()(Scalar t) const { return eval(t); }

  Matrix eval(Scalar t) const {
    const auto [i, s, h] = locate(t);
    if (s == Scalar(0)) return values_[i];
    if (s == Scalar(1)) return values_[i + 1];
    const Scalar s2 = s * s, s3 = s2 * s;
    const Scalar h00 = 2 * s3 - 3 * s2 + 1;
    const Scalar h10 = s3 - 2 * s2 + s;
    const Scalar h01 = -2 * s3 + 3 * s2;
    const Scalar h11 = s3 - s2;
    return h00 * values_[i] + (h10 * h) * derivs_[i] + h01 * values_[i + 1] +
           (h11 * h) * derivs_[i + 1];
  }

  /// Derivative of the Hermite interpolant.
  Matrix derivative(Scalar t) const {
    const auto [i, s, h] = locate(t);
    if (s == Scalar(0)) return derivs_[i];
    if (s == Scalar(1)) return derivs_[i + 1];
    const Scalar s2 = s * s;
    const Scalar d00 = (6 * s2 - 6 * s) / h;
    const Scalar d10 = 3 * s2 - 4 * s + 1;
    const Scalar d01 = (-6 * s2 + 6 * s) / h;
    const Scalar d11 = 3 * s2 - 2 * s;
    return d00 * values_[i] + d10 * derivs_[i] + d01 * values_[i + 1] + d11 * derivs_[i + 1];
  }

  /// Elementwise map of values and derivatives by a linear operation.
  template <typename Fn>
  MatrixTrajectory map_linear(Fn&& fn, bool symmetric) const {
    std::vector<Matrix> v, d;
    v.reserve(size());
    d.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) {
      v.emplace_back(fn(values_[i]));
      d.emplace_back(fn(derivs_[i]));
    }
    return MatrixTrajectory(grid_, std::move(v), std::move(d), symmetric);
  }

 private:
  struct Location {
    std::size_t i;
    Scalar s;
    Scalar h;
  };

  Location locate(Scalar t) const {
    const Scalar span = grid_.back() - grid_.front();
    const Scalar slack = Scalar(1e-14) * (Scalar(1) + std::abs(grid_.back()));
    if (t < grid_.front() - slack || t > grid_.back() + slack || std::isnan(t)) {
      throw std::out_of_range("MatrixTrajectory: time " + std::to_string(static_cast<double>(t)) +
                              " outside [" + std::to_string(static_cast<double>(grid_.front())) +
                              ", " + std::to_string(static_cast<double>(grid_.back())) + "]");
    }
    if (grid_.size() == 1 || span == Scalar(0)) return {0, Scalar(0), Scalar(0)};
    t = std::clamp(t, grid_.front(), grid_.back());
    auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
    if (it == grid_.end()) return {grid_.size() - 2, Scalar(1), grid_.back() - grid_[grid_.size() - 2]};
    const std::size_t i = static_cast<std::size_t>(it - grid_.begin()) - 1;
    const Scalar h = grid_[i + 1] - grid_[i];
    return {i, (t - grid_[i]) / h, h};
  }

  std::vector<Scalar> grid_;
  std::vector<Matrix> values_;
  std::vector<Matrix> derivs_;
  bool symmetric_ = false;
};

template <typename Scalar>
using MatrixRhs = std::function<Mat<Scalar>(Scalar, const Mat<Scalar>&)>;

namespace detail {

// Dormand-Prince 5(4) tableau.
struct DormandPrince {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // Error coefficients b - b_hat.
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

template <typename Scalar>
std::vector<Scalar> forced_times(Scalar t_from, Scalar t_to, const IntegratorConfig<Scalar>& cfg) {
  const Scalar lo = std::min(t_from, t_to), hi = std::max(t_from, t_to);
  std::vector<Scalar> times;
  if (cfg.output_points > 1) {
    for (int i = 1; i + 1 < cfg.output_points; ++i) {
      times.push_back(lo + (hi - lo) * Scalar(i) / Scalar(cfg.output_points - 1));
    }
  }
  for (Scalar t : cfg.output_times) {
    if (t > lo && t < hi) times.push_back(t);
  }
  if (cfg.clamp) {
    for (Scalar t : {cfg.clamp->begin, cfg.clamp->end}) {
      if (t > lo && t < hi) times.push_back(t);
    }
  }
  times.push_back(t_to);
  // Order along the direction of integration.
  if (t_to > t_from) {
    std::sort(times.begin(), times.end());
  } else {
    std::sort(times.begin(), times.end(), std::greater<Scalar>());
  }
  const Scalar merge = Scalar(64) * std::numeric_limits<Scalar>::epsilon() * (Scalar(1) + hi - lo);
  std::vector<Scalar> unique;
  for (Scalar t : times) {
    if (std::abs(t - t_from) <= merge) continue;
    if (!unique.empty() && std::abs(t - unique.back()) <= merge) continue;
    unique.push_back(t);
  }
  if (unique.empty() || unique.back() != t_to) unique.push_back(t_to);
  return unique;
}

template <typename Scalar>
void check_finite(const Mat<Scalar>& v, Scalar t, const IntegratorConfig<Scalar>& cfg) {
  if (!v.allFinite() || v.norm() > cfg.overflow_guard) {
    throw IntegrationError(IntegrationError::Kind::kBlowup, static_cast<double>(t),
                           "solution norm exceeded " +
                               std::to_string(static_cast<double>(cfg.overflow_guard)) +
                               " near t = " + std::to_string(static_cast<double>(t)));
  }
}

template <typename Scalar>
void symmetrize(Mat<Scalar>& v) {
  if (v.rows() == v.cols()) v = Scalar(0.5) * (v + v.transpose()).eval();
}

// Integrates from t_from to t_to (either direction). Samples are returned in
// integration order.
template <typename Scalar>
void integrate(const MatrixRhs<Scalar>& rhs, const Mat<Scalar>& start, Scalar t_from, Scalar t_to,
               const IntegratorConfig<Scalar>& cfg, std::vector<Scalar>& ts,
               std::vector<Mat<Scalar>>& vs, std::vector<Mat<Scalar>>& ds) {
  cfg.validate();
  using M = Mat<Scalar>;
  const Scalar dir = t_to >= t_from ? Scalar(1) : Scalar(-1);
  const auto targets = forced_times(t_from, t_to, cfg);

  Scalar t = t_from;
  M y = start;
  if (cfg.symmetrize) symmetrize(y);
  M f = rhs(t, y);
  ts.push_back(t);
  vs.push_back(y);
  ds.push_back(f);

  long steps = 0;
  std::size_t next = 0;

  if (cfg.method == Method::kRk4) {
    const Scalar h_nom = std::min(cfg.h_init, cfg.h_max);
    while (next < targets.size()) {
      const Scalar target = targets[next];
      const Scalar span = std::abs(target - t);
      const long n = std::max<long>(1, static_cast<long>(std::ceil(span / h_nom - Scalar(1e-9))));
      const Scalar h = dir * span / Scalar(n);
      for (long k = 0; k < n; ++k) {
        if (++steps > cfg.max_steps) {
          throw IntegrationError(IntegrationError::Kind::kMaxSteps, static_cast<double>(t),
                                 "step budget exhausted");
        }
        const M k1 = f;
        const M k2 = rhs(t + h / 2, y + (h / 2) * k1);
        const M k3 = rhs(t + h / 2, y + (h / 2) * k2);
        const M k4 = rhs(t + h, y + h * k3);
        y += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
        t = (k + 1 == n) ? target : t + h;
        if (cfg.symmetrize) symmetrize(y);
        check_finite(y, t, cfg);
        f = rhs(t, y);
        ts.push_back(t);
        vs.push_back(y);
        ds.push_back(f);
      }
      ++next;
    }
    return;
  }

  using DP = DormandPrince;
  Scalar h = std::min(cfg.h_init, cfg.h_max);
  while (next < targets.size()) {
    const Scalar target = targets[next];
    Scalar h_cap = cfg.h_max;
    if (cfg.clamp) {
      const Scalar lo = cfg.clamp->begin, hi = cfg.clamp->end;
      const bool inside = dir > 0 ? (t >= lo && t < hi) : (t > lo && t <= hi);
      if (inside) h_cap = std::min(h_cap, cfg.clamp->h_max);
    }
    Scalar step = std::min({h, h_cap, std::abs(target - t)});
    bool hits_target = step >= std::abs(target - t);
    // Avoid leaving a sliver before the target.
    if (!hits_target && std::abs(target - t) - step < Scalar(1e-3) * step) {
      step = std::abs(target - t);
      hits_target = true;
    }
    if (step < cfg.h_min && !hits_target) {
      if (!y.allFinite() || y.norm() > Scalar(1e-3) * cfg.overflow_guard) {
        throw IntegrationError(IntegrationError::Kind::kBlowup, static_cast<double>(t),
                               "solution escapes near t = " +
                                   std::to_string(static_cast<double>(t)));
      }
      throw IntegrationError(IntegrationError::Kind::kStepTooSmall, static_cast<double>(t),
                             "step size fell below h_min near t = " +
                                 std::to_string(static_cast<double>(t)));
    }
    if (++steps > cfg.max_steps) {
      throw IntegrationError(IntegrationError::Kind::kMaxSteps, static_cast<double>(t),
                             "step budget exhausted near t = " +
                                 std::to_string(static_cast<double>(t)));
    }
    const Scalar hs = dir * step;
    const M k1 = f;
    const M k2 = rhs(t + Scalar(DP::c2) * hs, y + hs * (Scalar(DP::a21) * k1));
    const M k3 = rhs(t + Scalar(DP::c3) * hs, y + hs * (Scalar(DP::a31) * k1 + Scalar(DP::a32) * k2));
    const M k4 = rhs(t + Scalar(DP::c4) * hs,
                     y + hs * (Scalar(DP::a41) * k1 + Scalar(DP::a42) * k2 + Scalar(DP::a43) * k3));
    const M k5 = rhs(t + Scalar(DP::c5) * hs,
                     y + hs * (Scalar(DP::a51) * k1 + Scalar(DP::a52) * k2 + Scalar(DP::a53) * k3 +
                               Scalar(DP::a54) * k4));
    const M k6 = rhs(t + hs, y + hs * (Scalar(DP::a61) * k1 + Scalar(DP::a62) * k2 +
                                       Scalar(DP::a63) * k3 + Scalar(DP::a64) * k4 +
                                       Scalar(DP::a65) * k5));
    M y_new = y + hs * (Scalar(DP::b1) * k1 + Scalar(DP::b3) * k3 + Scalar(DP::b4) * k4 +
                        Scalar(DP::b5) * k5 + Scalar(DP::b6) * k6);
    const Scalar t_new = hits_target ? target : t + hs;
    M k7 = rhs(t_new, y_new);
    const M err = hs * (Scalar(DP::e1) * k1 + Scalar(DP::e3) * k3 + Scalar(DP::e4) * k4 +
                        Scalar(DP::e5) * k5 + Scalar(DP::e6) * k6 + Scalar(DP::e7) * k7);
    const M scale = (cfg.atol + cfg.rtol * y.cwiseAbs().cwiseMax(y_new.cwiseAbs()).array()).matrix();
    Scalar err_norm = (err.array() / scale.array()).abs().maxCoeff();
    if (!std::isfinite(err_norm)) err_norm = std::numeric_limits<Scalar>::infinity();

    if (err_norm <= Scalar(1)) {
      t = t_new;
      y = std::move(y_new);
      if (cfg.symmetrize) {
        symmetrize(y);
        f = rhs(t, y);
      } else {
        f = std::move(k7);
      }
      check_finite(y, t, cfg);
      ts.push_back(t);
      vs.push_back(y);
      ds.push_back(f);
      if (hits_target) ++next;
      const Scalar grow = err_norm == Scalar(0)
                              ? Scalar(5)
                              : std::clamp(Scalar(0.9) * std::pow(err_norm, Scalar(-0.2)),
                                           Scalar(0.2), Scalar(5));
      // A step shortened only to land on an output time keeps the nominal size.
      const bool clipped_by_target = hits_target && step < std::min(h, h_cap);
      h = clipped_by_target ? std::max(h, step * grow) : step * grow;
    } else {
      const Scalar shrink = std::isfinite(err_norm)
                                ? std::clamp(Scalar(0.9) * std::pow(err_norm, Scalar(-0.2)),
                                             Scalar(0.2), Scalar(1))
                                : Scalar(0.2);
      h = step * shrink;
    }
  }
}

template <typename Scalar>
MatrixTrajectory<Scalar> assemble(std::vector<Scalar> ts, std::vector<Mat<Scalar>> vs,
                                  std::vector<Mat<Scalar>> ds, bool reverse, bool symmetric) {
  if (reverse) {
    std::reverse(ts.begin(), ts.end());
    std::reverse(vs.begin(), vs.end());
    std::reverse(ds.begin(), ds.end());
  }
  return MatrixTrajectory<Scalar>(std::move(ts), std::move(vs), std::move(ds), symmetric);
}

}  // namespace detail

/// Solves dV/dt = rhs(t, V) on [t_begin, t_f] backward from V(t_f) = terminal.
/// The value at t_f is the terminal matrix exactly (after symmetrization).
template <typename Scalar>
MatrixTrajectory<Scalar> integrate_terminal(const MatrixRhs<Scalar>& rhs,
                                            const Mat<Scalar>& terminal, Scalar t_begin,
                                            Scalar t_f, const IntegratorConfig<Scalar>& cfg) {
  if (!(t_f > t_begin)) throw std::invalid_argument("integrate_terminal: need t_begin < t_f");
  std::vector<Scalar> ts;
  std::vector<Mat<Scalar>> vs, ds;
  detail::integrate(rhs, terminal, t_f, t_begin, cfg, ts, vs, ds);
  return detail::assemble(std::move(ts), std::move(vs), std::move(ds), true,
                          cfg.symmetrize && terminal.rows() == terminal.cols());
}

template <typename Scalar>
MatrixTrajectory<Scalar> integrate_terminal(const MatrixRhs<Scalar>& rhs,
                                            const Mat<Scalar>& terminal, Scalar t_f,
                                            const IntegratorConfig<Scalar>& cfg) {
  return integrate_terminal(rhs, terminal, Scalar(0), t_f, cfg);
}

/// Solves dV/dt = rhs(t, V) forward on [t0, t_f] from V(t0) = initial.
template <typename Scalar>
MatrixTrajectory<Scalar> integrate_initial(const MatrixRhs<Scalar>& rhs, const Mat<Scalar>& initial,
                                           Scalar t0, Scalar t_f,
                                           const IntegratorConfig<Scalar>& cfg) {
  if (!(t_f > t0)) throw std::invalid_argument("integrate_initial: need t0 < t_f");
  std::vector<Scalar> ts;
  std::vector<Mat<Scalar>> vs, ds;
  detail::integrate(rhs, initial, t0, t_f, cfg, ts, vs, ds);
  return detail::assemble(std::move(ts), std::move(vs), std::move(ds), false,
                          cfg.symmetrize && initial.rows() == initial.cols());
}

template <typename Scalar>
Mat<Scalar> eval(const MatrixTrajectory<Scalar>& traj, Scalar t) {
  return traj.eval(t);
}

using Trajectory = MatrixTrajectory<double>;
using Config = IntegratorConfig<double>;
using Rhs = MatrixRhs<double>;

/// Caps the step at eps/2 on [t_f - 10 eps ln(1/eps), t_f], where the
/// O(eps) terminal layer lives.
inline Config with_terminal_layer(Config cfg, double eps, double t_f, double t_begin = 0.0) {
  if (eps > 0.0 && eps < 1.0) {
    const double width = 10.0 * eps * std::log(1.0 / eps);
    cfg.clamp = StepClamp<double>{std::max(t_begin, t_f - width), t_f, eps / 2};
    cfg.h_init = std::min(cfg.h_init, eps / 2);
    cfg.h_min = std::min(cfg.h_min, cfg.h_init);
  }
  return cfg;
}

}  // namespace ccgame
