#include "irisac/power_model.hpp"

#include <cmath>
#include <limits>

namespace irisac {

IrsPowerModel::IrsPowerModel(const ChannelSet& ch, const ComplexMatrix& rx, const ComplexVector& phi,
                             double sigma_r2)
    : e_(ch.E), sigma_r2_(sigma_r2) {
  const ComplexMatrix c = ch.G * rx * ch.G.adjoint();
  c_hat_ = phi.asDiagonal() * c * phi.conjugate().asDiagonal();
  e_abs2_ = ch.E.cwiseAbs2();
  lin_ = c.diagonal().real().array() + 2.0 * sigma_r2;
}

double IrsPowerModel::echo(const RealVector& q) const {
  const RealVector s = q.cwiseSqrt();
  const ComplexMatrix m = e_ * s.asDiagonal();
  const ComplexMatrix k = m * c_hat_ * m.adjoint();
  return q.dot(k.diagonal().real());
}

double IrsPowerModel::echo_noise(const RealVector& q) const { return sigma_r2_ * q.dot(e_abs2_ * q); }

double IrsPowerModel::linear(const RealVector& q) const { return lin_.dot(q); }

RealVector IrsPowerModel::d2(const RealVector& q) const {
  const RealVector s = q.cwiseSqrt();
  const ComplexMatrix es = e_ * s.asDiagonal();
  const RealVector first = (es * c_hat_ * es.adjoint()).diagonal().real();
  const ComplexMatrix second = c_hat_ * s.asDiagonal() * e_.adjoint() * q.asDiagonal() * e_;
  RealVector g(q.size());
  for (Eigen::Index j = 0; j < q.size(); ++j) {
    g(j) = first(j) + (s(j) > 0.0 ? second(j, j).real() / s(j) : 0.0);
  }
  return g;
}

RealVector IrsPowerModel::d3(const RealVector& q) const {
  return e_abs2_ * q + e_abs2_.transpose() * q;
}

RealVector IrsPowerModel::gradient(const RealVector& q) const { return d2(q) + sigma_r2_ * d3(q) + lin_; }

double IrsPowerModel::max_scale(const RealVector& q, double budget) const {
  return positive_root(quadratic(q), linear(q), budget);
}

double positive_root(double a, double b, double c) {
  if (a <= 0.0) return b > 0.0 ? c / b : std::numeric_limits<double>::infinity();
  // Stable form of (-b + sqrt(b^2 + 4ac)) / (2a).
  return 2.0 * c / (b + std::sqrt(b * b + 4.0 * a * c));
}

double crb_product(const RealVector& t1, const RealVector& t2, const RealVector& q) {
  return t1.cwiseQuotient(q).sum() * t2.cwiseQuotient(q).sum();
}

RealVector crb_product_gradient(const RealVector& t1, const RealVector& t2, const RealVector& q) {
  const double a = t1.cwiseQuotient(q).sum();
  const double b = t2.cwiseQuotient(q).sum();
  const RealVector q2 = q.cwiseAbs2();
  return -(b * t1.cwiseQuotient(q2) + a * t2.cwiseQuotient(q2));
}

}  // namespace irisac
