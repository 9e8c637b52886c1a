#pragma once

#include "irisac/sensing.hpp"

#include <functional>
#include <vector>

namespace irisac {

// Quadratic forms of the received power h_bar_k^H X h_bar_k.
// In the phases: phi^H K phi with K = diag(h o p) (G X G^H)^T diag(conj(h) o p).
ComplexMatrix sinr_phase_form(const ChannelSet& ch, const RealVector& p, int k, const ComplexMatrix& x);
// In the amplitudes: p^T L p with L = Re(diag(conj(h) o phi) G X G^H diag(h o conj(phi))).
RealMatrix sinr_gain_form(const ChannelSet& ch, const ComplexVector& phi, int k, const ComplexMatrix& x);

// sigma_r^2 sum_n |h_kn|^2 p_n^2 + sigma_u^2
double user_noise(const ChannelSet& ch, const RealVector& p, int k, const SystemConfig& config);

// Transmit step.
struct P5Options {
  bool irs_constraint = true;
  // When non-empty, W_k = s_k u_k u_k^H with these unit directions and only
  // the powers s_k >= 0 are optimized.
  std::vector<ComplexVector> fixed_directions;
};

struct P5Result {
  TransmitDesign tx;                 // rank-one reconstruction
  std::vector<ComplexMatrix> W;      // relaxed solution
  ComplexMatrix R0;                  // relaxed solution
  double objective = 0.0;            // tr((G Rx G^H)^{-1} P^{-2})
};

// Throws InfeasibleError naming the user whose SINR constraint carries the
// largest infeasibility certificate weight.
P5Result solve_p5_full(const ChannelSet& ch, const ReflectDesign& rf, const SystemConfig& config,
                       const conic::SolverOptions& opts = {}, const P5Options& p5 = {});
TransmitDesign solve_p5(const ChannelSet& ch, const ReflectDesign& rf, const SystemConfig& config,
                        const conic::SolverOptions& opts = {}, const P5Options& p5 = {});

// w_k = (h^H W_k h)^{-1/2} W_k h and R0 + sum W_k - sum w_k w_k^H.
TransmitDesign reconstruct_rank_one(const ChannelSet& ch, const ReflectDesign& rf, const std::vector<ComplexMatrix>& w,
                                    const ComplexMatrix& r0);

// Phase step.
struct BisectionConfig {
  double kappa_min = 0.0;
  double kappa_max = 1.0;
  double eps = 1e-3;
  void validate() const;
};

struct BisectionResult {
  double lo = 0.0;  // largest value found feasible (or kappa_min)
  double hi = 0.0;
  int probes = 0;
  bool any_feasible = false;
  std::vector<std::pair<double, bool>> history;
};

// Bisection on a monotone feasibility oracle.
BisectionResult bisect(const BisectionConfig& cfg, const std::function<bool(double)>& feasible);

// Bracket used by the AO: [0, max_k (sum_n |h_kn| p_n |(G w_k)_n|)^2 / noise_k], eps = rel_eps * kappa_max.
BisectionConfig default_bisection(const ChannelSet& ch, const TransmitDesign& tx, const ReflectDesign& rf,
                                  const SystemConfig& config, double rel_eps);

struct PhaseStepResult {
  ComplexVector phi;
  BisectionResult bisection;
  double min_sinr_before = 0.0;  // linear
  double min_sinr_after = 0.0;
  bool degraded = false;  // no probe was feasible, incumbent kept
};

PhaseStepResult maxmin_phase_bisection(const ChannelSet& ch, const TransmitDesign& tx, const ReflectDesign& rf,
                                       const SystemConfig& config, const BisectionConfig& bis,
                                       int n_randomizations, Rng& rng, const conic::SolverOptions& opts = {},
                                       bool irs_constraint = true);

// Gain step.
struct LiftedGainResult {
  RealMatrix P_bar;
  int iterations = 0;
  bool shortcut = false;  // a_max on every element is feasible
  bool stalled = false;
  std::vector<double> objective_trace;
};

LiftedGainResult optimize_gain_isac_sca(const ChannelSet& ch, const TransmitDesign& tx, const ReflectDesign& rf,
                                        const SystemConfig& config, const AoOptions& opts = {});

// Coefficients of the scaled candidate p = sqrt(tau) p_dot: IRS power
// (b1 + b2) tau^2 + (b3 + b4) tau and SINR rows lambda_k tau + sigma_u^2 <= 0.
struct GainScaleCoefficients {
  double b1 = 0.0, b2 = 0.0, b3 = 0.0, b4 = 0.0;
  std::vector<double> lambda;
};
GainScaleCoefficients gain_scale_coefficients(const ChannelSet& ch, const TransmitDesign& tx,
                                              const ComplexVector& phi, const RealVector& p_dot,
                                              const SystemConfig& config);

enum class ScaleBinding { irs_power, amplitude, none };

struct ScaleResult {
  RealVector p;
  double tau = 0.0;
  int candidate = -1;  // 0 is the incumbent, 1 is sqrt(diag P_bar)
  int feasible_candidates = 0;
  ScaleBinding binding = ScaleBinding::none;
  bool degraded = false;
};

// Largest feasible tau for one candidate, or a negative value when the SINR
// interval is empty.
double max_feasible_scale(const GainScaleCoefficients& c, double p_dot_max_sq, const SystemConfig& config,
                          ScaleBinding* binding = nullptr);

ScaleResult scale_randomized_gain(const RealMatrix& p_bar, const ChannelSet& ch, const TransmitDesign& tx,
                                  const ReflectDesign& rf, const SystemConfig& config, int n_randomizations,
                                  Rng& rng);

// Alternating optimization with optional steps switched off; the benchmark
// schemes are built on it.
struct IsacAoVariant {
  bool optimize_phase = true;
  bool optimize_gain = true;
  bool irs_constraint = true;
  // Fixed beam directions recomputed for the current reflection before every
  // transmit step (zero-forcing).
  std::function<std::vector<ComplexVector>(const ReflectDesign&)> directions;
};

// Throws InfeasibleError when the first transmit step is infeasible.
IsacAoReport run_isac_ao(const ChannelSet& ch, const SystemConfig& config, const ReflectDesign& initial, Rng& rng,
                         const AoOptions& opts = {}, const IsacAoVariant& variant = {});

IsacAoReport ao_isac(const ChannelSet& ch, const SystemConfig& config, std::uint64_t seed,
                     const AoOptions& opts = {});

}  // namespace irisac
