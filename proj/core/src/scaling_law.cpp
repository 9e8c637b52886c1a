#include "irisac/scaling_law.hpp"

#include "irisac/isac.hpp"
#include "irisac/power_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace irisac {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// delta_p on the power curve for a given delta_r.
double dp_on_power(const ScalingBetas& b, double dr, double ps) {
  const double quad = b.b1 * dr + b.b2;
  const double lin = b.b3 * dr + b.b4;
  return quad + lin > 0.0 ? positive_root(quad, lin, ps) : kInf;
}

// delta_r on the power curve for a given delta_p; may be negative.
double dr_on_power(const ScalingBetas& b, double dp, double ps) {
  return (ps - b.b2 * dp * dp - b.b4 * dp) / (b.b1 * dp * dp + b.b3 * dp);
}

// Root of the strictly decreasing cubic -2 b1 b2 x^3 - (b1 b4 + 3 b2 b3) x^2 - 2 b3 b4 x + P_s b3
// whose sign change marks the maximum of dr(x) x^2 along the power curve.
double power_curve_peak(const ScalingBetas& b, double ps) {
  auto f = [&](double x) {
    return ((-2.0 * b.b1 * b.b2 * x - (b.b1 * b.b4 + 3.0 * b.b2 * b.b3)) * x - 2.0 * b.b3 * b.b4) * x + ps * b.b3;
  };
  if (b.b3 <= 0.0) return 0.0;
  double hi = 1.0;
  while (f(hi) > 0.0) {
    hi *= 2.0;
    if (!std::isfinite(hi) || hi > 1e300) return kInf;
  }
  double lo = 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-16 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Point of the upper frontier of {power <= P_s, dr <= b5, dp <= b6} at delta_p = x.
double frontier_dr(const ScalingBetas& b, double x, double ps) { return std::min(b.b5, dr_on_power(b, x, ps)); }

void fill_binding(ScalingResult& r, const ScalingBetas& b, const SystemConfig& config, bool isac) {
  r.binding.clear();
  const double tol = 1e-9;
  if (std::abs(scaled_irs_power(b, r.delta_r, r.delta_p) - config.P_s) <= tol * config.P_s) r.binding.push_back("power");
  if (std::abs(r.delta_r - b.b5) <= tol * b.b5) r.binding.push_back("delta_r_cap");
  if (std::abs(r.delta_p - b.b6) <= tol * b.b6) r.binding.push_back("delta_p_cap");
  if (isac && std::abs(scaled_sinr_row(b, r.delta_r, r.delta_p, config.sigma_u2)) <= tol * config.sigma_u2) {
    r.binding.push_back("sinr");
  }
}

void fill_approximation(ScalingResult& r, const ScalingBetas& b, const SystemConfig& config) {
  const double half = b.b4 > 0.0 ? config.P_s / (2.0 * b.b4) : kInf;
  r.approx_delta_p = half >= b.b6 ? b.b6 : half;
  r.approx_delta_r = std::min(b.b5, (config.P_s - b.b4 * r.approx_delta_p) / (b.b3 * r.approx_delta_p));
}

bool corner_feasible(const ScalingBetas& b, const SystemConfig& config) {
  return scaled_irs_power(b, b.b5, b.b6) <= config.P_s;
}

ScalingResult joint_sensing(const ScalingBetas& b, const SystemConfig& config) {
  ScalingResult r;
  if (corner_feasible(b, config)) {
    r.delta_r = b.b5;
    r.delta_p = b.b6;
  } else {
    // Along the frontier the objective grows up to the cubic's root and falls after it.
    const double x_lo = dp_on_power(b, b.b5, config.P_s);
    const double x_hi = std::min(b.b6, dp_on_power(b, 0.0, config.P_s));
    const double x = std::clamp(power_curve_peak(b, config.P_s), x_lo, std::max(x_lo, x_hi));
    r.delta_p = x;
    r.delta_r = frontier_dr(b, x, config.P_s);
  }
  r.feasible = true;
  return r;
}

}  // namespace

void ScalingBetas::validate() const {
  for (double v : {b1, b2, b3, b4}) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("scaling: b1..b4 must be finite and nonnegative");
  }
  if (!(b5 > 0.0) || !(b6 > 0.0) || !std::isfinite(b5) || !std::isfinite(b6)) {
    throw std::invalid_argument("scaling: b5 and b6 must be positive and finite");
  }
  if (b1 == 0.0 && b3 == 0.0) throw std::invalid_argument("scaling: no signal path (b1 = b3 = 0)");
  if (b7.size() != b8.size()) throw std::invalid_argument("scaling: b7 and b8 sizes differ");
}

ScalingBetas compute_betas(const ChannelSet& ch, const TransmitDesign& base_tx, const ReflectDesign& base_rf,
                           const SystemConfig& config, Mode mode) {
  const double pmax2 = base_rf.p.cwiseAbs2().maxCoeff();
  if (!(pmax2 > 0.0)) throw std::invalid_argument("compute_betas: base amplitudes are all zero");
  const ComplexMatrix rx = base_tx.Rx();
  const IrsPowerModel pm(ch, rx, base_rf.phi, config.sigma_r2);
  const RealVector q = base_rf.p.cwiseAbs2();
  ScalingBetas b;
  b.b1 = pm.echo(q);
  b.b2 = pm.echo_noise(q);
  b.b4 = 2.0 * config.sigma_r2 * q.sum();
  b.b3 = pm.linear(q) - b.b4;
  b.b5 = config.P_t / rx.trace().real();
  b.b6 = config.a_max * config.a_max / pmax2;
  if (mode == Mode::isac) {
    for (int k = 0; k < static_cast<int>(base_tx.w.size()); ++k) {
      const ComplexVector& w = base_tx.w[static_cast<std::size_t>(k)];
      const ComplexMatrix wk = w * w.adjoint();
      const RealMatrix l = sinr_gain_form(ch, base_rf.phi, k, rx - wk) -
                           sinr_gain_form(ch, base_rf.phi, k, wk) / config.gamma[static_cast<std::size_t>(k)];
      b.b7.push_back(base_rf.p.dot(l * base_rf.p));
      b.b8.push_back(config.sigma_r2 * ch.h[static_cast<std::size_t>(k)].cwiseAbs2().dot(q));
    }
  }
  return b;
}

double scaled_irs_power(const ScalingBetas& b, double dr, double dp) {
  return b.b1 * dr * dp * dp + b.b2 * dp * dp + b.b3 * dr * dp + b.b4 * dp;
}

double scaled_sinr_row(const ScalingBetas& b, double dr, double dp, double sigma_u2) {
  double worst = -kInf;
  for (std::size_t k = 0; k < b.b7.size(); ++k) worst = std::max(worst, b.b7[k] * dr * dp + b.b8[k] * dp + sigma_u2);
  return worst;
}

ScalingResult scaling_sensing(const ScalingBetas& b, const SystemConfig& config, const ScalingGiven& given) {
  b.validate();
  ScalingResult r;
  switch (given.kind) {
    case ScalingGiven::Kind::fixed_delta_r:
      if (!(given.value > 0.0) || given.value > b.b5) throw std::invalid_argument("scaling: delta_r outside (0, b5]");
      r.delta_r = given.value;
      r.delta_p = std::min(b.b6, dp_on_power(b, given.value, config.P_s));
      r.feasible = true;
      break;
    case ScalingGiven::Kind::fixed_delta_p:
      if (!(given.value > 0.0) || given.value > b.b6) throw std::invalid_argument("scaling: delta_p outside (0, b6]");
      r.delta_p = given.value;
      r.delta_r = std::min(b.b5, dr_on_power(b, given.value, config.P_s));
      r.feasible = r.delta_r > 0.0;
      break;
    case ScalingGiven::Kind::joint:
      r = joint_sensing(b, config);
      break;
  }
  fill_approximation(r, b, config);
  fill_binding(r, b, config, false);
  return r;
}

ScalingResult scaling_isac(const ScalingBetas& b, const SystemConfig& config, const ScalingGiven& given) {
  b.validate();
  if (b.b7.empty()) throw std::invalid_argument("scaling_isac: no user coefficients");
  for (double v : b.b7) {
    if (!(v < 0.0)) throw std::domain_error("scaling_isac: b7 >= 0, the SINR target cannot be met by scaling");
  }
  const double su = config.sigma_u2;
  auto sinr_ok = [&](double dr, double dp) { return scaled_sinr_row(b, dr, dp, su) <= 0.0; };
  // Smallest dr meeting every SINR row at dp, and smallest dp at dr.
  auto dr_min = [&](double dp) {
    double v = 0.0;
    for (std::size_t k = 0; k < b.b7.size(); ++k) v = std::max(v, (su / dp + b.b8[k]) / -b.b7[k]);
    return v;
  };
  auto dp_min = [&](double dr) {
    double v = 0.0;
    for (std::size_t k = 0; k < b.b7.size(); ++k) {
      const double slope = b.b7[k] * dr + b.b8[k];
      if (!(slope < 0.0)) return kInf;
      v = std::max(v, su / -slope);
    }
    return v;
  };

  ScalingResult r;
  switch (given.kind) {
    case ScalingGiven::Kind::fixed_delta_r: {
      if (!(given.value > 0.0) || given.value > b.b5) throw std::invalid_argument("scaling: delta_r outside (0, b5]");
      r.delta_r = given.value;
      r.delta_p = std::min(b.b6, dp_on_power(b, given.value, config.P_s));
      r.feasible = r.delta_p >= dp_min(given.value);
      break;
    }
    case ScalingGiven::Kind::fixed_delta_p: {
      if (!(given.value > 0.0) || given.value > b.b6) throw std::invalid_argument("scaling: delta_p outside (0, b6]");
      r.delta_p = given.value;
      r.delta_r = std::min(b.b5, dr_on_power(b, given.value, config.P_s));
      r.feasible = r.delta_r > 0.0 && r.delta_r >= dr_min(given.value);
      break;
    }
    case ScalingGiven::Kind::joint: {
      // The SINR region is an upper set, so the optimum lies on the frontier
      // of the power and cap constraints. Sensing optimum first, otherwise the
      // feasible frontier point closest to it.
      const ScalingResult s = joint_sensing(b, config);
      if (sinr_ok(s.delta_r, s.delta_p)) {
        r = s;
        break;
      }
      const double x_top = std::min(b.b6, dp_on_power(b, 0.0, config.P_s));
      auto row = [&](double x) { return scaled_sinr_row(b, frontier_dr(b, x, config.P_s), x, su); };
      constexpr int kScan = 4000;
      std::vector<double> cands;
      double prev_x = 0.0;
      double prev_v = kInf;
      for (int i = 1; i <= kScan; ++i) {
        const double x = x_top * i / kScan;
        const double v = row(x);
        if ((v <= 0.0) != (prev_v <= 0.0) && i > 1) {
          double lo = prev_x, hi = x;
          const bool lo_ok = prev_v <= 0.0;
          for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            ((row(mid) <= 0.0) == lo_ok ? lo : hi) = mid;
          }
          cands.push_back(lo_ok ? lo : hi);
        }
        if (v <= 0.0 && (i == kScan)) cands.push_back(x);
        prev_x = x;
        prev_v = v;
      }
      r.feasible = false;
      double best = -1.0;
      for (double x : cands) {
        const double dr = frontier_dr(b, x, config.P_s);
        if (dr <= 0.0 || !sinr_ok(dr, x)) continue;
        if (dr * x * x > best) {
          best = dr * x * x;
          r.delta_r = dr;
          r.delta_p = x;
          r.feasible = true;
        }
      }
      break;
    }
  }
  fill_approximation(r, b, config);
  fill_binding(r, b, config, true);
  return r;
}

ScalingResult grid_oracle(const ScalingBetas& b, const SystemConfig& config, Mode mode, double resolution) {
  b.validate();
  if (!(resolution > 0.0)) throw std::invalid_argument("grid_oracle: resolution must be positive");
  auto axis = [&](double cap) {
    std::vector<double> v;
    const auto n = static_cast<long>(std::floor(cap / resolution));
    for (long i = 0; i <= n; ++i) v.push_back(static_cast<double>(i) * resolution);
    if (v.back() < cap) v.push_back(cap);
    return v;
  };
  const std::vector<double> rs = axis(b.b5);
  const std::vector<double> ps = axis(b.b6);
  const bool isac = mode == Mode::isac;
  ScalingResult best;
  double best_obj = -1.0;
  for (double dr : rs) {
    for (auto it = ps.rbegin(); it != ps.rend(); ++it) {
      const double dp = *it;
      if (scaled_irs_power(b, dr, dp) > config.P_s) continue;
      if (isac && scaled_sinr_row(b, dr, dp, config.sigma_u2) > 0.0) break;
      if (dr * dp * dp > best_obj) {
        best_obj = dr * dp * dp;
        best.delta_r = dr;
        best.delta_p = dp;
        best.feasible = true;
      }
      break;
    }
  }
  fill_approximation(best, b, config);
  if (best.feasible) fill_binding(best, b, config, isac);
  return best;
}

}  // namespace irisac
