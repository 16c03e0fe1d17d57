#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace ccgame {

/// Scalar polynomial c0 + c1 t + ... + ck t^k, coefficients stored lowest
/// degree first.
class Polynomial {
 public:
  Polynomial() : coeffs_{0.0} {}
  Polynomial(double constant) : coeffs_{constant} {}  // NOLINT: implicit by intent
  explicit Polynomial(std::vector<double> coefficients);

  double operator()(double t) const;
  Polynomial derivative() const;

  /// Highest index with a nonzero coefficient (0 for constants, including 0).
  int degree() const;
  bool is_zero(double tol = 0.0) const;
  const std::vector<double>& coefficients() const { return coeffs_; }

  /// Real roots from the companion matrix. Imaginary parts below `tol`
  /// (relative to the root magnitude) are treated as real.
  std::vector<double> real_roots(double tol = 1e-9) const;

  /// Exact minimum on [a, b] via endpoints and critical points.
  /// Returns (argmin, min).
  std::pair<double, double> minimum_on(double a, double b) const;

 private:
  std::vector<double> coeffs_;
};

/// Matrix-valued polynomial in t. A constant matrix is the degree-0 case.
class MatrixFunction {
 public:
  MatrixFunction() = default;
  explicit MatrixFunction(Eigen::MatrixXd constant);
  explicit MatrixFunction(std::vector<Eigen::MatrixXd> coefficients);

  Eigen::MatrixXd operator()(double t) const;
  Eigen::MatrixXd derivative(double t) const;

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_constant() const { return coeffs_.size() <= 1; }
  const std::vector<Eigen::MatrixXd>& coefficients() const { return coeffs_; }

  /// Block of every coefficient; exact for the polynomial representation.
  MatrixFunction block(Eigen::Index row, Eigen::Index col, Eigen::Index rows,
                       Eigen::Index cols) const;
  MatrixFunction transpose() const;

  /// Largest absolute coefficient entry; zero iff the function vanishes.
  double max_abs_coefficient() const;

 private:
  std::vector<Eigen::MatrixXd> coeffs_;
  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;
};

}  // namespace ccgame
