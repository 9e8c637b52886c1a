#pragma once

#include "irisac/metrics.hpp"

#include <string>
#include <vector>

namespace irisac {

// Coefficients of the scaled design Rx = delta_r Rx_hat, p = sqrt(delta_p) p_hat.
// IRS power:  b1 dr dp^2 + b2 dp^2 + b3 dr dp + b4 dp <= P_s
// caps:       dr <= b5, dp <= b6
// user k:     b7[k] dr dp + b8[k] dp + sigma_u^2 <= 0
struct ScalingBetas {
  double b1 = 0.0, b2 = 0.0, b3 = 0.0, b4 = 0.0, b5 = 0.0, b6 = 0.0;
  std::vector<double> b7, b8;

  void validate() const;
};

struct ScalingGiven {
  enum class Kind { fixed_delta_r, fixed_delta_p, joint };
  Kind kind = Kind::joint;
  double value = 0.0;

  static ScalingGiven joint() { return {}; }
  static ScalingGiven fixed_r(double v) { return {Kind::fixed_delta_r, v}; }
  static ScalingGiven fixed_p(double v) { return {Kind::fixed_delta_p, v}; }
};

struct ScalingResult {
  double delta_r = 0.0;
  double delta_p = 0.0;
  bool feasible = false;
  // Active constraints, any of "power", "delta_r_cap", "delta_p_cap", "sinr".
  std::vector<std::string> binding;
  // Approximate problem without b1, b2.
  double approx_delta_r = 0.0;
  double approx_delta_p = 0.0;

  double objective() const { return delta_r * delta_p * delta_p; }
};

ScalingBetas compute_betas(const ChannelSet& ch, const TransmitDesign& base_tx, const ReflectDesign& base_rf,
                           const SystemConfig& config, Mode mode);

double scaled_irs_power(const ScalingBetas& b, double dr, double dp);
// Largest SINR row value max_k (b7 dr dp + b8 dp + sigma_u^2); feasible when <= 0.
double scaled_sinr_row(const ScalingBetas& b, double dr, double dp, double sigma_u2);

ScalingResult scaling_sensing(const ScalingBetas& b, const SystemConfig& config, const ScalingGiven& given);
// Throws std::domain_error when some b7[k] >= 0.
ScalingResult scaling_isac(const ScalingBetas& b, const SystemConfig& config, const ScalingGiven& given);

// Exhaustive search over the grid {0, h, 2h, ..} x {0, h, 2h, ..} of [0, b5] x [0, b6]
// (caps included as grid points).
ScalingResult grid_oracle(const ScalingBetas& b, const SystemConfig& config, Mode mode, double resolution);

}  // namespace irisac
