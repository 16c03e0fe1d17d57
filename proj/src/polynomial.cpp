#include "ccgame/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ccgame {

Polynomial::Polynomial(std::vector<double> coefficients)
    : coeffs_(std::move(coefficients)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

double Polynomial::operator()(double t) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial(0.0);
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<double>(k);
  return Polynomial(std::move(d));
}

int Polynomial::degree() const {
  for (int k = static_cast<int>(coeffs_.size()) - 1; k > 0; --k) {
    if (coeffs_[k] != 0.0) return k;
  }
  return 0;
}

bool Polynomial::is_zero(double tol) const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [tol](double c) { return std::abs(c) <= tol; });
}

std::vector<double> Polynomial::real_roots(double tol) const {
  const int deg = degree();
  std::vector<double> roots;
  if (deg == 0) return roots;
  const double lead = coeffs_[deg];
  if (deg == 1) {
    roots.push_back(-coeffs_[0] / lead);
    return roots;
  }
  // Companion matrix of the monic polynomial.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -coeffs_[i] / lead;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  const Eigen::VectorXcd ev = solver.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i).imag()) <= tol * (1.0 + std::abs(ev(i)))) {
      roots.push_back(ev(i).real());
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::pair<double, double> Polynomial::minimum_on(double a, double b) const {
  std::vector<double> candidates{a, b};
  for (double r : derivative().real_roots()) {
    if (r > a && r < b) candidates.push_back(r);
  }
  std::pair<double, double> best{a, (*this)(a)};
  for (double t : candidates) {
    const double v = (*this)(t);
    if (v < best.second) best = {t, v};
  }
  return best;
}

MatrixFunction::MatrixFunction(Eigen::MatrixXd constant)
    : rows_(constant.rows()), cols_(constant.cols()) {
  coeffs_.push_back(std::move(constant));
}

MatrixFunction::MatrixFunction(std::vector<Eigen::MatrixXd> coefficients)
    : coeffs_(std::move(coefficients)) {
  if (coeffs_.empty()) throw std::invalid_argument("MatrixFunction: no coefficients");
  rows_ = coeffs_.front().rows();
  cols_ = coeffs_.front().cols();
  for (const auto& c : coeffs_) {
    if (c.rows() != rows_ || c.cols() != cols_) {
      throw std::invalid_argument("MatrixFunction: coefficient dimensions differ");
    }
  }
}

Eigen::MatrixXd MatrixFunction::operator()(double t) const {
  if (coeffs_.empty()) return Eigen::MatrixXd(rows_, cols_);
  Eigen::MatrixXd acc = coeffs_.back();
  for (int k = degree() - 1; k >= 0; --k) acc = acc * t + coeffs_[k];
  return acc;
}

Eigen::MatrixXd MatrixFunction::derivative(double t) const {
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(rows_, cols_);
  for (int k = degree(); k >= 1; --k) acc = acc * t + coeffs_[k] * static_cast<double>(k);
  return acc;
}

MatrixFunction MatrixFunction::block(Eigen::Index row, Eigen::Index col, Eigen::Index rows,
                                     Eigen::Index cols) const {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.emplace_back(c.block(row, col, rows, cols));
  if (out.empty()) out.emplace_back(Eigen::MatrixXd::Zero(rows, cols));
  return MatrixFunction(std::move(out));
}

MatrixFunction MatrixFunction::transpose() const {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.emplace_back(c.transpose());
  if (out.empty()) out.emplace_back(Eigen::MatrixXd::Zero(cols_, rows_));
  return MatrixFunction(std::move(out));
}

double MatrixFunction::max_abs_coefficient() const {
  double worst = 0.0;
  for (const auto& c : coeffs_) {
    if (c.size() > 0) worst = std::max(worst, c.cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace ccgame
