#pragma once

#include "irisac/metrics.hpp"

namespace irisac {

// IRS power as a function of the squared amplitudes q = p^2 for fixed Rx and
// phases: quadratic(q) + linear(q), both nonnegative, homogeneous of degree
// two and one.
class IrsPowerModel {
 public:
  IrsPowerModel(const ChannelSet& ch, const ComplexMatrix& rx, const ComplexVector& phi, double sigma_r2);

  double echo(const RealVector& q) const;        // tr(Q E S C^ S E^H), S = Q^{1/2}
  double echo_noise(const RealVector& q) const;  // sigma_r^2 tr(Q E Q E^H)
  double quadratic(const RealVector& q) const { return echo(q) + echo_noise(q); }
  double linear(const RealVector& q) const;      // tr(Q G Rx G^H) + 2 sigma_r^2 tr(Q)
  double total(const RealVector& q) const { return quadratic(q) + linear(q); }

  RealVector d2(const RealVector& q) const;  // gradient of echo
  RealVector d3(const RealVector& q) const;  // gradient of tr(Q E Q E^H)
  RealVector gradient(const RealVector& q) const;
  const RealVector& linear_coefficients() const { return lin_; }

  // Largest tau in (0, inf) with total(tau q) <= budget.
  double max_scale(const RealVector& q, double budget) const;

 private:
  ComplexMatrix e_;
  ComplexMatrix c_hat_;  // Phi G Rx G^H Phi^H
  RealMatrix e_abs2_;
  RealVector lin_;
  double sigma_r2_;
};

// Positive root of a x^2 + b x = c for a, b >= 0, c > 0.
double positive_root(double a, double b, double c);

// J(q) = (sum t1/q)(sum t2/q) and its gradient.
double crb_product(const RealVector& t1, const RealVector& t2, const RealVector& q);
RealVector crb_product_gradient(const RealVector& t1, const RealVector& t2, const RealVector& q);

}  // namespace irisac
