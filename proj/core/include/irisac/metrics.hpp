#pragma once

#include "irisac/scenario.hpp"

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <vector>

namespace irisac {

struct TransmitDesign {
  std::vector<ComplexVector> w;  // communication beams
  ComplexMatrix R0;              // dedicated sensing covariance

  ComplexMatrix Rx() const;
  static TransmitDesign sensing_only(const ComplexMatrix& rx);
};

struct ReflectDesign {
  RealVector p;       // amplitudes, >= 0
  ComplexVector phi;  // unit-modulus phases

  ComplexMatrix Psi() const;
  ComplexMatrix P() const;
  ComplexMatrix Phi() const;
  int size() const { return static_cast<int>(p.size()); }
  static ReflectDesign uniform(int n, double amplitude, const ComplexVector& phi);
};

struct IrsPowerTerms {
  double echo = 0.0;        // tr(Psi E Psi G Rx G^H Psi^H E^H Psi^H)
  double forward = 0.0;     // tr(Psi G Rx G^H Psi^H)
  double echo_noise = 0.0;  // sigma_r^2 tr(Psi E Psi Psi^H E^H Psi^H)
  double self_noise = 0.0;  // 2 sigma_r^2 tr(Psi Psi^H)
  double total() const { return echo + forward + echo_noise + self_noise; }
};

IrsPowerTerms irs_power_terms(const ChannelSet& ch, const ComplexMatrix& rx, const ReflectDesign& rf, double sigma_r2);
double irs_power_usage(const ChannelSet& ch, const TransmitDesign& tx, const ReflectDesign& rf,
                       const SystemConfig& config);

// h_bar_k = G^H Psi^H h_k, so that h_bar_k^H x = h_k^H Psi G x.
ComplexVector effective_channel(const ChannelSet& ch, const ReflectDesign& rf, int k);

double sinr(int k, const ChannelSet& ch, const TransmitDesign& tx, const ReflectDesign& rf,
            const SystemConfig& config);

// X = sqrt(T) Rx^{1/2} F, F the first M rows of the unitary T-point DFT; X X^H / T = Rx. Needs T >= M.
ComplexMatrix dft_waveform(const ComplexMatrix& rx, int t);

// Real 2N^2 x 2N^2 Fisher information for (Re vec E, Im vec E).
RealMatrix fim(const ChannelSet& ch, const ComplexMatrix& x, const ReflectDesign& rf, const SystemConfig& config);

// Closed form (1/T) tr((G Rx G^H)^{-1} P^{-2}) tr((G Rw~^{-1} G^H)^{-1} P^{-2}) with
// Rw~ = sigma_r^2 G^H P^2 G + sigma_b^2 I. Empty when unbounded (a zero
// amplitude or a singular G Rx G^H).
std::optional<double> crb_closed_form(const ChannelSet& ch, const ComplexMatrix& rx, const ReflectDesign& rf,
                                      const SystemConfig& config);

// The two trace factors for given amplitudes: t1 = diag((G Rx G^H)^{-1}), t2 = diag(T2)
// with T2 = (G Rw~^{-1} G^H)^{-1}. The CRB is (sum t1/q)(sum t2/q)/T with q = p^2.
struct CrbFactors {
  RealVector t1;
  RealVector t2;
};
std::optional<CrbFactors> crb_factors(const ChannelSet& ch, const ComplexMatrix& rx, const RealVector& p,
                                      const SystemConfig& config);

struct ConstraintSet {
  bool sinr = true;
  bool irs_power = true;
  bool amplitude = true;
};

struct MetricsReport {
  std::vector<double> sinr;  // linear
  double min_sinr_db = 0.0;
  double irs_power = 0.0;
  double bs_power = 0.0;
  std::optional<double> crb;
  bool sinr_ok = true;
  bool irs_power_ok = true;
  bool bs_power_ok = true;
  bool amplitude_ok = true;
  bool psd_ok = true;

  bool feasible() const { return sinr_ok && irs_power_ok && bs_power_ok && amplitude_ok && psd_ok; }
};

MetricsReport check_feasibility(const ChannelSet& ch, const TransmitDesign& tx, const ReflectDesign& rf,
                                const SystemConfig& config, const ConstraintSet& active = {},
                                double tol = 1e-6);

nlohmann::json report_to_json(const MetricsReport& r);

}  // namespace irisac
