#pragma once

#include "irisac/conic/solver.hpp"
#include "irisac/metrics.hpp"
#include "irisac/power_model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace irisac {

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AoOptions {
  int max_outer = 20;
  double rel_tol = 1e-3;
  int n_randomizations = 100;
  int sca_max_iter = 30;
  double sca_tol = 1e-4;
  int sca_refresh_rounds = 5;
  int max_halvings = 10;
  int isac_sca_max_iter = 10;
  double bisection_rel_eps = 1e-3;
  conic::SolverOptions solver{};
};

// Outcome of an alternating optimization run. The ISAC traces stay empty in
// sensing mode.
struct AoReport {
  std::vector<double> crb_trace;
  TransmitDesign tx;
  ReflectDesign rf;
  int iterations = 0;
  std::string reason;  // converged | max-iter | stalled
  int closed_form_steps = 0;
  std::vector<double> min_sinr_db_trace;
  std::vector<double> irs_power_trace;

  double final_crb() const { return crb_trace.empty() ? 0.0 : crb_trace.back(); }
};

using IsacAoReport = AoReport;

// Random phases and amplitude a_max, scaled down only when the
// transmit-independent IRS noise alone would use more than half of P_s.
ReflectDesign initial_reflect(const ChannelSet& ch, const SystemConfig& config, Rng& rng,
                              std::optional<double> amplitude = std::nullopt);

// Transmit step.
struct Lemma1Report {
  ComplexMatrix A;
  double pbar_s = 0.0;
  bool psd_condition = false;
  bool trace_condition = false;
  bool holds() const { return psd_condition || trace_condition; }
};

Lemma1Report check_lemma1(const ChannelSet& ch, const ReflectDesign& rf, const SystemConfig& config);
// G^H Psi^H (E^H P^2 E + I) Psi G: tr(A_irs Rx) is the Rx-dependent IRS power.
ComplexMatrix irs_power_matrix(const ChannelSet& ch, const ReflectDesign& rf);
double transmit_independent_irs_power(const ChannelSet& ch, const ReflectDesign& rf, double sigma_r2);

// P^{-1} scaled so that tr(U) is of order one at the isotropic design with unit trace.
ComplexMatrix trace_inverse_weight(const ComplexMatrix& g, const RealVector& p, int m);

ComplexMatrix solve_p3_closed_form(const ChannelSet& ch, const ReflectDesign& rf, const SystemConfig& config);
ComplexMatrix solve_p3_numeric(const ChannelSet& ch, const ReflectDesign& rf, const SystemConfig& config,
                               const conic::SolverOptions& opts = {}, bool irs_constraint = true);
// Closed form when it is optimal (Lemma 1 or IRS constraint inactive at the
// closed form), numeric otherwise.
ComplexMatrix solve_p3(const ChannelSet& ch, const ReflectDesign& rf, const SystemConfig& config,
                       const conic::SolverOptions& opts = {}, bool irs_constraint = true,
                       bool* used_closed_form = nullptr);

// Phase step. The IRS echo power equals phi^H M phi with M = (P E^H P^2 E P) o (G Rx G^H)^T.
ComplexMatrix phase_power_matrix(const ChannelSet& ch, const ComplexMatrix& rx, const RealVector& p);

struct PhaseSdr {
  ComplexMatrix theta;
  double value = 0.0;
};
// min tr(M Theta) s.t. diag(Theta) = 1, Theta >= 0.
PhaseSdr solve_phase_sdr(const ComplexMatrix& m, const conic::SolverOptions& opts = {});
// Same problem in the N^2-dimensional lifted variable V ~ vec(Phi) vec(Phi)^H
// with objective tr((C^T kron B) V).
PhaseSdr solve_phase_sdr_lifted(const ComplexMatrix& b, const ComplexMatrix& c,
                                const conic::SolverOptions& opts = {});

// Gaussian randomization: candidates exp(j arg(Theta^{1/2} r)); lowest score wins,
// earlier candidates win ties, the incumbent is candidate zero.
template <class Score>
ComplexVector randomize_phases(const ComplexMatrix& theta, const ComplexVector& incumbent, int n, Rng& rng,
                               Score score);

ComplexVector optimize_phi_sdr(const ChannelSet& ch, const ComplexMatrix& rx, const ReflectDesign& rf,
                               const SystemConfig& config, int n_randomizations, Rng& rng,
                               const conic::SolverOptions& opts = {});

// Gain step.
struct GainStepResult {
  RealVector p;
  int iterations = 0;
  bool shortcut = false;  // a_max on every element is feasible
  bool stalled = false;
  std::vector<double> objective_trace;
};

GainStepResult optimize_gain_sca(const ChannelSet& ch, const ComplexMatrix& rx, const ReflectDesign& rf,
                                 const SystemConfig& config, const AoOptions& opts = {});

AoReport ao_sensing(const ChannelSet& ch, const SystemConfig& config, std::uint64_t seed,
                    const AoOptions& opts = {});

// Transmit-only and reflect-only variants used by the benchmark schemes.
AoReport sensing_transmit_only(const ChannelSet& ch, const SystemConfig& config, const ReflectDesign& rf,
                               const AoOptions& opts = {}, bool irs_constraint = true);
AoReport sensing_reflect_only(const ChannelSet& ch, const SystemConfig& config, std::uint64_t seed,
                              const AoOptions& opts = {});

template <class Score>
ComplexVector randomize_phases(const ComplexMatrix& theta, const ComplexVector& incumbent, int n, Rng& rng,
                               Score score) {
  const ComplexMatrix root = psd_sqrt(theta);
  ComplexVector best = incumbent;
  double best_score = score(incumbent);
  for (int i = 0; i < n; ++i) {
    const ComplexVector cand = unit_phases(root * complex_gaussian_vector(theta.rows(), rng));
    const double s = score(cand);
    if (s < best_score) {
      best_score = s;
      best = cand;
    }
  }
  return best;
}

}  // namespace irisac
