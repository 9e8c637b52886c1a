#pragma once

#include "irisac/numerics.hpp"

#include <utility>
#include <vector>

namespace irisac::conic {

// Affine real scalar: constant + sum_i coef_i * x_i. Repeated indices add up.
struct LinExpr {
  double constant = 0.0;
  std::vector<std::pair<int, double>> terms;

  LinExpr() = default;
  LinExpr(double c) : constant(c) {}  // NOLINT(google-explicit-constructor)
  static LinExpr variable(int index, double coef = 1.0);

  LinExpr& operator+=(const LinExpr& o);
  LinExpr& operator-=(const LinExpr& o);
  LinExpr& operator*=(double a);
};

LinExpr operator+(LinExpr a, const LinExpr& b);
LinExpr operator-(LinExpr a, const LinExpr& b);
LinExpr operator*(double a, LinExpr e);
LinExpr operator-(LinExpr e);

// Affine complex matrix F0 + sum_i x_i F_i over the real decision vector x.
struct AffineMatrix {
  ComplexMatrix constant;
  std::vector<std::pair<int, ComplexMatrix>> terms;

  AffineMatrix() = default;
  explicit AffineMatrix(const ComplexMatrix& c) : constant(c) {}
  static AffineMatrix zero(Eigen::Index rows, Eigen::Index cols);

  Eigen::Index rows() const { return constant.rows(); }
  Eigen::Index cols() const { return constant.cols(); }

  AffineMatrix& operator+=(const AffineMatrix& o);
  AffineMatrix& operator-=(const AffineMatrix& o);
  AffineMatrix& operator*=(cplx a);
  bool is_real() const;
  ComplexMatrix evaluate(const RealVector& x) const;
};

AffineMatrix operator+(AffineMatrix a, const AffineMatrix& b);
AffineMatrix operator-(AffineMatrix a, const AffineMatrix& b);
AffineMatrix operator*(cplx a, AffineMatrix e);

// L * X * R for constant L, R.
AffineMatrix multiply(const ComplexMatrix& left, const AffineMatrix& x, const ComplexMatrix& right);
// A * X * A^H
AffineMatrix congruence(const ComplexMatrix& a, const AffineMatrix& x);
AffineMatrix adjoint(const AffineMatrix& x);
// [[a, b], [b^H, c]]
AffineMatrix hermitian_block(const AffineMatrix& a, const AffineMatrix& b, const AffineMatrix& c);
// Re tr(A X)
LinExpr trace_product(const ComplexMatrix& a, const AffineMatrix& x);
LinExpr real_entry(const AffineMatrix& x, Eigen::Index i, Eigen::Index j);
LinExpr imag_entry(const AffineMatrix& x, Eigen::Index i, Eigen::Index j);

double evaluate(const LinExpr& e, const RealVector& x);

}  // namespace irisac::conic
