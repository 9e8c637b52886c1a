#include "irisac/conic/expression.hpp"

namespace irisac::conic {

LinExpr LinExpr::variable(int index, double coef) {
  LinExpr e;
  e.terms.emplace_back(index, coef);
  return e;
}

LinExpr& LinExpr::operator+=(const LinExpr& o) {
  constant += o.constant;
  terms.insert(terms.end(), o.terms.begin(), o.terms.end());
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& o) {
  constant -= o.constant;
  for (const auto& [i, c] : o.terms) terms.emplace_back(i, -c);
  return *this;
}

LinExpr& LinExpr::operator*=(double a) {
  constant *= a;
  for (auto& t : terms) t.second *= a;
  return *this;
}

LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
LinExpr operator*(double a, LinExpr e) { return e *= a; }
LinExpr operator-(LinExpr e) { return e *= -1.0; }

double evaluate(const LinExpr& e, const RealVector& x) {
  double v = e.constant;
  for (const auto& [i, c] : e.terms) v += c * x(i);
  return v;
}

AffineMatrix AffineMatrix::zero(Eigen::Index rows, Eigen::Index cols) {
  return AffineMatrix(ComplexMatrix::Zero(rows, cols));
}

AffineMatrix& AffineMatrix::operator+=(const AffineMatrix& o) {
  if (o.rows() != rows() || o.cols() != cols()) {
    throw DimensionError("AffineMatrix: size mismatch in sum");
  }
  constant += o.constant;
  terms.insert(terms.end(), o.terms.begin(), o.terms.end());
  return *this;
}

AffineMatrix& AffineMatrix::operator-=(const AffineMatrix& o) {
  if (o.rows() != rows() || o.cols() != cols()) {
    throw DimensionError("AffineMatrix: size mismatch in difference");
  }
  constant -= o.constant;
  for (const auto& [i, f] : o.terms) terms.emplace_back(i, -f);
  return *this;
}

AffineMatrix& AffineMatrix::operator*=(cplx a) {
  constant *= a;
  for (auto& t : terms) t.second *= a;
  return *this;
}

bool AffineMatrix::is_real() const {
  if (constant.imag().cwiseAbs().maxCoeff() > 0.0) return false;
  for (const auto& t : terms) {
    if (t.second.imag().cwiseAbs().maxCoeff() > 0.0) return false;
  }
  return true;
}

ComplexMatrix AffineMatrix::evaluate(const RealVector& x) const {
  ComplexMatrix v = constant;
  for (const auto& [i, f] : terms) v += x(i) * f;
  return v;
}

AffineMatrix operator+(AffineMatrix a, const AffineMatrix& b) { return a += b; }
AffineMatrix operator-(AffineMatrix a, const AffineMatrix& b) { return a -= b; }
AffineMatrix operator*(cplx a, AffineMatrix e) { return e *= a; }

AffineMatrix multiply(const ComplexMatrix& left, const AffineMatrix& x, const ComplexMatrix& right) {
  if (left.cols() != x.rows() || x.cols() != right.rows()) {
    throw DimensionError("multiply: inner dimensions differ");
  }
  AffineMatrix out(left * x.constant * right);
  out.terms.reserve(x.terms.size());
  for (const auto& [i, f] : x.terms) out.terms.emplace_back(i, left * f * right);
  return out;
}

AffineMatrix congruence(const ComplexMatrix& a, const AffineMatrix& x) {
  return multiply(a, x, a.adjoint());
}

AffineMatrix adjoint(const AffineMatrix& x) {
  AffineMatrix out(x.constant.adjoint());
  out.terms.reserve(x.terms.size());
  for (const auto& [i, f] : x.terms) out.terms.emplace_back(i, f.adjoint());
  return out;
}

AffineMatrix hermitian_block(const AffineMatrix& a, const AffineMatrix& b, const AffineMatrix& c) {
  const Eigen::Index n1 = a.rows();
  const Eigen::Index n2 = c.rows();
  if (a.cols() != n1 || c.cols() != n2 || b.rows() != n1 || b.cols() != n2) {
    throw DimensionError("hermitian_block: inconsistent block sizes");
  }
  const Eigen::Index n = n1 + n2;
  AffineMatrix out(ComplexMatrix::Zero(n, n));
  out.constant.topLeftCorner(n1, n1) = a.constant;
  out.constant.topRightCorner(n1, n2) = b.constant;
  out.constant.bottomLeftCorner(n2, n1) = b.constant.adjoint();
  out.constant.bottomRightCorner(n2, n2) = c.constant;
  for (const auto& [i, f] : a.terms) {
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    m.topLeftCorner(n1, n1) = f;
    out.terms.emplace_back(i, std::move(m));
  }
  for (const auto& [i, f] : b.terms) {
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    m.topRightCorner(n1, n2) = f;
    m.bottomLeftCorner(n2, n1) = f.adjoint();
    out.terms.emplace_back(i, std::move(m));
  }
  for (const auto& [i, f] : c.terms) {
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    m.bottomRightCorner(n2, n2) = f;
    out.terms.emplace_back(i, std::move(m));
  }
  return out;
}

LinExpr trace_product(const ComplexMatrix& a, const AffineMatrix& x) {
  if (a.cols() != x.rows() || a.rows() != x.cols()) {
    throw DimensionError("trace_product: size mismatch");
  }
  // Re tr(A F) = Re sum_ij A_ij F_ji
  auto tr = [&](const ComplexMatrix& f) { return a.cwiseProduct(f.transpose()).sum().real(); };
  LinExpr e(tr(x.constant));
  e.terms.reserve(x.terms.size());
  for (const auto& [i, f] : x.terms) e.terms.emplace_back(i, tr(f));
  return e;
}

LinExpr real_entry(const AffineMatrix& x, Eigen::Index i, Eigen::Index j) {
  LinExpr e(x.constant(i, j).real());
  for (const auto& [k, f] : x.terms) {
    if (f(i, j).real() != 0.0) e.terms.emplace_back(k, f(i, j).real());
  }
  return e;
}

LinExpr imag_entry(const AffineMatrix& x, Eigen::Index i, Eigen::Index j) {
  LinExpr e(x.constant(i, j).imag());
  for (const auto& [k, f] : x.terms) {
    if (f(i, j).imag() != 0.0) e.terms.emplace_back(k, f(i, j).imag());
  }
  return e;
}

}  // namespace irisac::conic
