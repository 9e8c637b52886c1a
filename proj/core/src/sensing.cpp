#include "irisac/sensing.hpp"

#include "irisac/conic/epigraph.hpp"
#include "irisac/conic/sdp_problem.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace irisac {

using conic::AffineMatrix;
using conic::LinExpr;
using conic::SdpProblem;

namespace {

// Inward slack applied to normalized budget constraints in the SDP builders.
constexpr double kMargin = 1e-7;

double crb_or_throw(const ChannelSet& ch, const ComplexMatrix& rx, const ReflectDesign& rf,
                    const SystemConfig& config) {
  const auto v = crb_closed_form(ch, rx, rf, config);
  if (!v) throw NumericalError("CRB is unbounded for the current design");
  return *v;
}

std::optional<double> crb_of_q(const ChannelSet& ch, const ComplexMatrix& rx, const RealVector& q,
                               const SystemConfig& config) {
  const auto f = crb_factors(ch, rx, q.cwiseSqrt(), config);
  if (!f) return std::nullopt;
  return crb_product(f->t1, f->t2, q) / config.T;
}

// min d^T x s.t. g^T x <= budget, lo <= x <= hi, for d <= 0 and g > 0.
RealVector fractional_knapsack(const RealVector& d, const RealVector& g, double budget, double lo, double hi) {
  const Eigen::Index n = d.size();
  RealVector x = RealVector::Constant(n, lo);
  double rem = budget - g.sum() * lo;
  if (rem <= 0.0) return x;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  auto ratio = [&](Eigen::Index i) { return g(i) > 0.0 ? -d(i) / g(i) : std::numeric_limits<double>::infinity(); };
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return ratio(a) > ratio(b); });
  for (Eigen::Index i : order) {
    if (d(i) >= 0.0) continue;
    if (g(i) <= 0.0) {
      x(i) = hi;
      continue;
    }
    const double add = std::min(hi - lo, rem / g(i));
    x(i) += add;
    rem -= add * g(i);
    if (rem <= 0.0) break;
  }
  return x;
}

}  // namespace

ComplexMatrix trace_inverse_weight(const ComplexMatrix& g, const RealVector& p, int m) {
  const ComplexMatrix c = g * g.adjoint() / static_cast<double>(m);
  const RealVector iq = p.cwiseAbs2().cwiseInverse();
  const double u0 = (c.inverse() * iq.cast<cplx>().asDiagonal()).trace().real();
  return p.cwiseInverse().cast<cplx>().asDiagonal() * (1.0 / std::sqrt(u0));
}

ReflectDesign initial_reflect(const ChannelSet& ch, const SystemConfig& config, Rng& rng,
                              std::optional<double> amplitude) {
  const int n = static_cast<int>(ch.G.rows());
  ReflectDesign rf = ReflectDesign::uniform(n, amplitude.value_or(config.a_max),
                                            unit_phases(complex_gaussian_vector(n, rng)));
  const double fixed = transmit_independent_irs_power(ch, rf, config.sigma_r2);
  if (fixed > 0.5 * config.P_s) {
    const RealVector q = rf.p.cwiseAbs2();
    const double quad = config.sigma_r2 * q.dot(ch.E.cwiseAbs2() * q);
    const double lin = 2.0 * config.sigma_r2 * q.sum();
    rf.p *= std::sqrt(positive_root(quad, lin, 0.5 * config.P_s));
  }
  return rf;
}

ComplexMatrix irs_power_matrix(const ChannelSet& ch, const ReflectDesign& rf) {
  const ComplexMatrix psi = rf.Psi();
  const ComplexMatrix p2 = rf.p.cwiseAbs2().cast<cplx>().asDiagonal();
  const Eigen::Index n = ch.E.rows();
  const ComplexMatrix mid = ch.E.adjoint() * p2 * ch.E + ComplexMatrix::Identity(n, n);
  return hermitian_part(ch.G.adjoint() * psi.adjoint() * mid * psi * ch.G);
}

double transmit_independent_irs_power(const ChannelSet& ch, const ReflectDesign& rf, double sigma_r2) {
  const RealVector q = rf.p.cwiseAbs2();
  return sigma_r2 * q.dot(ch.E.cwiseAbs2() * q) + 2.0 * sigma_r2 * q.sum();
}

Lemma1Report check_lemma1(const ChannelSet& ch, const ReflectDesign& rf, const SystemConfig& config) {
  Eigen::JacobiSVD<ComplexMatrix> svd(rf.P() * ch.G, Eigen::ComputeFullV);
  const ComplexMatrix& u2 = svd.matrixV();
  Lemma1Report r;
  r.A = hermitian_part(u2.adjoint() * irs_power_matrix(ch, rf) * u2);
  r.pbar_s = config.P_s - transmit_independent_irs_power(ch, rf, config.sigma_r2);
  const double ratio = r.pbar_s / config.P_t;
  const Eigen::Index m = r.A.rows();
  r.psd_condition = min_eigenvalue(ComplexMatrix(ratio * ComplexMatrix::Identity(m, m) - r.A)) >= 0.0;
  r.trace_condition = ratio >= r.A.trace().real();
  return r;
}

ComplexMatrix solve_p3_closed_form(const ChannelSet& ch, const ReflectDesign& rf, const SystemConfig& config) {
  Eigen::JacobiSVD<ComplexMatrix> svd(rf.P() * ch.G, Eigen::ComputeThinV);
  const RealVector& sv = svd.singularValues();
  if (!(sv.minCoeff() > 0.0)) throw NumericalError("solve_p3_closed_form: P G is rank deficient");
  const RealVector inv = sv.cwiseInverse();
  const RealVector r = inv * (config.P_t / inv.sum());
  const ComplexMatrix& v = svd.matrixV();
  return hermitian_part(v * r.cast<cplx>().asDiagonal() * v.adjoint());
}

ComplexMatrix solve_p3_numeric(const ChannelSet& ch, const ReflectDesign& rf, const SystemConfig& config,
                               const conic::SolverOptions& opts, bool irs_constraint) {
  const int m = static_cast<int>(ch.G.cols());
  const double g_scale = ch.G.cwiseAbs().maxCoeff();
  const double a_scale = rf.p.maxCoeff();
  if (!(a_scale > 0.0)) throw NumericalError("solve_p3_numeric: zero amplitudes");
  const ComplexMatrix g_n = ch.G / g_scale;
  const RealVector p_n = rf.p / a_scale;

  const ComplexMatrix weight = trace_inverse_weight(g_n, p_n, m);

  // The variable is Rx / scale, where scale is the largest isotropic transmit
  // power both budgets allow. A tight IRS budget otherwise leaves the optimum
  // orders of magnitude below P_t and the program badly conditioned.
  double scale = config.P_t;
  double pbar = 0.0;
  ComplexMatrix a_irs;
  if (irs_constraint) {
    pbar = config.P_s - transmit_independent_irs_power(ch, rf, config.sigma_r2);
    if (!(pbar > 0.0)) throw InfeasibleError("solve_p3_numeric: IRS noise alone exceeds the IRS budget");
    a_irs = irs_power_matrix(ch, rf);
    const double iso = a_irs.trace().real() / m;
    if (iso > 0.0) scale = std::min(scale, pbar / iso);
  }

  SdpProblem prob;
  const auto rx = prob.add_hermitian(m, "Rx");
  const AffineMatrix rx_e = rx.expr();
  const auto ep = conic::build_trace_inverse_epigraph(prob, conic::congruence(g_n, rx_e), weight);
  prob.minimize(ep.trace);
  prob.add_leq(conic::trace_product(ComplexMatrix::Identity(m, m) * (scale / config.P_t), rx_e), 1.0 - kMargin,
               "bs_power");
  if (irs_constraint) {
    prob.add_leq(conic::trace_product(a_irs * (scale / pbar), rx_e), 1.0 - kMargin, "irs_power");
  }
  const auto sol = prob.solve(opts);
  if (!sol.ok()) throw NumericalError("solve_p3_numeric: solver returned " + conic::to_string(sol.status()));
  return hermitian_part(scale * sol.value(rx));
}

ComplexMatrix solve_p3(const ChannelSet& ch, const ReflectDesign& rf, const SystemConfig& config,
                       const conic::SolverOptions& opts, bool irs_constraint, bool* used_closed_form) {
  auto closed = [&](bool v) {
    if (used_closed_form) *used_closed_form = v;
  };
  const ComplexMatrix cf = solve_p3_closed_form(ch, rf, config);
  if (!irs_constraint) {
    closed(true);
    return cf;
  }
  const Lemma1Report lemma = check_lemma1(ch, rf, config);
  const double use = irs_power_terms(ch, cf, rf, config.sigma_r2).total();
  if (lemma.holds() || use <= config.P_s) {
    closed(true);
    return cf;
  }
  closed(false);
  return solve_p3_numeric(ch, rf, config, opts, true);
}

ComplexMatrix phase_power_matrix(const ChannelSet& ch, const ComplexMatrix& rx, const RealVector& p) {
  const ComplexMatrix pm = p.cast<cplx>().asDiagonal();
  const ComplexMatrix b = pm * ch.E.adjoint() * pm * pm * ch.E * pm;
  const ComplexMatrix c = ch.G * rx * ch.G.adjoint();
  return hermitian_part(kron_trace_reduce(b, c));
}

PhaseSdr solve_phase_sdr(const ComplexMatrix& m, const conic::SolverOptions& opts) {
  const int n = static_cast<int>(m.rows());
  const double scale = m.cwiseAbs().maxCoeff();
  PhaseSdr out;
  if (n == 1 || !(scale > 0.0)) {
    out.theta = ComplexMatrix::Identity(n, n);
    out.value = m.trace().real();
    if (n > 1) out.theta.setOnes();
    return out;
  }
  SdpProblem prob;
  const AffineMatrix theta = conic::unit_diagonal_hermitian(prob, n, "theta");
  prob.add_lmi(theta, "theta");
  prob.minimize(conic::trace_product(m / scale, theta));
  const auto sol = prob.solve(opts);
  if (!sol.ok()) throw NumericalError("solve_phase_sdr: solver returned " + conic::to_string(sol.status()));
  out.theta = hermitian_part(theta.evaluate(sol.raw.x));
  out.value = sol.objective * scale;
  return out;
}

PhaseSdr solve_phase_sdr_lifted(const ComplexMatrix& b, const ComplexMatrix& c, const conic::SolverOptions& opts) {
  const int n = static_cast<int>(b.rows());
  const int n2 = n * n;
  const ComplexMatrix k = kron(c.transpose(), b);
  const double scale = k.cwiseAbs().maxCoeff();
  SdpProblem prob;
  ComplexMatrix diag = ComplexMatrix::Zero(n2, n2);
  for (int i = 0; i < n; ++i) diag(i * n + i, i * n + i) = 1.0;
  AffineMatrix v(diag);
  for (int i = 0; i < n2; ++i) {
    for (int j = i + 1; j < n2; ++j) {
      const int re = prob.add_scalar("v.re");
      const int im = prob.add_scalar("v.im");
      ComplexMatrix fr = ComplexMatrix::Zero(n2, n2);
      fr(i, j) = fr(j, i) = 1.0;
      ComplexMatrix fi = ComplexMatrix::Zero(n2, n2);
      fi(i, j) = cplx(0.0, 1.0);
      fi(j, i) = cplx(0.0, -1.0);
      v.terms.emplace_back(re, std::move(fr));
      v.terms.emplace_back(im, std::move(fi));
    }
  }
  prob.add_lmi(v, "V");
  prob.minimize(conic::trace_product(k / (scale > 0.0 ? scale : 1.0), v));
  // The zero diagonal entries leave V without an interior point.
  conic::SolverOptions o = opts;
  o.unattained_dual = true;
  const auto sol = prob.solve(o);
  if (!sol.ok()) throw NumericalError("solve_phase_sdr_lifted: solver returned " + conic::to_string(sol.status()));
  PhaseSdr out;
  out.theta = hermitian_part(v.evaluate(sol.raw.x));
  out.value = sol.objective * (scale > 0.0 ? scale : 1.0);
  return out;
}

ComplexVector optimize_phi_sdr(const ChannelSet& ch, const ComplexMatrix& rx, const ReflectDesign& rf,
                               const SystemConfig& /*config*/, int n_randomizations, Rng& rng,
                               const conic::SolverOptions& opts) {
  const ComplexMatrix m = phase_power_matrix(ch, rx, rf.p);
  if (!(m.cwiseAbs().maxCoeff() > 0.0)) return rf.phi;
  const PhaseSdr sdr = solve_phase_sdr(m, opts);
  auto score = [&](const ComplexVector& phi) { return phi.dot(m * phi).real(); };
  return randomize_phases(sdr.theta, rf.phi, n_randomizations, rng, score);
}

GainStepResult optimize_gain_sca(const ChannelSet& ch, const ComplexMatrix& rx, const ReflectDesign& rf,
                                 const SystemConfig& config, const AoOptions& opts) {
  const IrsPowerModel pm(ch, rx, rf.phi, config.sigma_r2);
  const Eigen::Index n = rf.p.size();
  const double a2 = config.a_max * config.a_max;
  GainStepResult res;
  const RealVector q_full = RealVector::Constant(n, a2);
  if (pm.total(q_full) <= config.P_s) {
    res.p = RealVector::Constant(n, config.a_max);
    res.shortcut = true;
    return res;
  }
  auto project = [&](RealVector q) {
    q = q.cwiseMin(a2);
    if (pm.total(q) > config.P_s) q *= pm.max_scale(q, config.P_s) * (1.0 - 1e-12);
    return q;
  };
  RealVector q = project(rf.p.cwiseAbs2());
  auto cur = crb_of_q(ch, rx, q, config);
  if (!cur) {
    q = project(q_full);
    cur = crb_of_q(ch, rx, q, config);
    if (!cur) throw NumericalError("optimize_gain_sca: CRB unbounded at the starting point");
  }
  const double lo = 1e-6 * a2;
  for (int round = 0; round < opts.sca_refresh_rounds && !res.stalled; ++round) {
    const double round_start = *cur;
    const auto f = crb_factors(ch, rx, q.cwiseSqrt(), config);
    if (!f) break;
    for (int it = 0; it < opts.sca_max_iter; ++it) {
      const double j = crb_product(f->t1, f->t2, q);
      const RealVector d1 = crb_product_gradient(f->t1, f->t2, q);
      const RealVector gp = pm.gradient(q);
      const double budget = config.P_s - pm.total(q) + gp.dot(q);
      const RealVector q_lp = fractional_knapsack(d1, gp, budget, lo, a2);
      bool accepted = false;
      double step = 1.0;
      double j_new = j;
      for (int h = 0; h <= opts.max_halvings; ++h, step *= 0.5) {
        const RealVector cand = project(q + step * (q_lp - q));
        const double jc = crb_product(f->t1, f->t2, cand);
        const auto c = crb_of_q(ch, rx, cand, config);
        if (jc < j && c && *c <= *cur) {
          q = cand;
          cur = c;
          j_new = jc;
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        res.stalled = true;
        break;
      }
      ++res.iterations;
      res.objective_trace.push_back(j_new);
      if ((j - j_new) / j < opts.sca_tol) break;
    }
    if ((round_start - *cur) / round_start < opts.sca_tol) break;
  }
  res.p = q.cwiseSqrt();
  return res;
}

AoReport ao_sensing(const ChannelSet& ch, const SystemConfig& config, std::uint64_t seed, const AoOptions& opts) {
  config.validate(Mode::sensing);
  Rng rng(seed);
  AoReport rep;
  rep.rf = initial_reflect(ch, config, rng);
  bool cf = false;
  ComplexMatrix rx = solve_p3(ch, rep.rf, config, opts.solver, true, &cf);
  rep.closed_form_steps += cf ? 1 : 0;
  double crb = crb_or_throw(ch, rx, rep.rf, config);
  rep.crb_trace.push_back(crb);
  rep.reason = "max-iter";
  for (int it = 1; it <= opts.max_outer; ++it) {
    rep.iterations = it;
    rep.rf.phi = optimize_phi_sdr(ch, rx, rep.rf, config, opts.n_randomizations, rng, opts.solver);
    const GainStepResult g = optimize_gain_sca(ch, rx, rep.rf, config, opts);
    ReflectDesign cand_rf{g.p, rep.rf.phi};
    if (const auto c = crb_closed_form(ch, rx, cand_rf, config); c && *c <= crb &&
        irs_power_terms(ch, rx, cand_rf, config.sigma_r2).total() <= config.P_s) {
      rep.rf = cand_rf;
      crb = *c;
    }
    const ComplexMatrix rx_new = solve_p3(ch, rep.rf, config, opts.solver, true, &cf);
    if (const auto c = crb_closed_form(ch, rx_new, rep.rf, config); c && *c <= crb) {
      rx = rx_new;
      crb = *c;
      rep.closed_form_steps += cf ? 1 : 0;
    }
    const double prev = rep.crb_trace.back();
    rep.crb_trace.push_back(crb);
    if ((prev - crb) / prev < opts.rel_tol) {
      rep.reason = "converged";
      break;
    }
  }
  rep.tx = TransmitDesign::sensing_only(rx);
  return rep;
}

AoReport sensing_transmit_only(const ChannelSet& ch, const SystemConfig& config, const ReflectDesign& rf,
                               const AoOptions& opts, bool irs_constraint) {
  AoReport rep;
  rep.rf = rf;
  bool cf = false;
  const ComplexMatrix rx = solve_p3(ch, rf, config, opts.solver, irs_constraint, &cf);
  rep.closed_form_steps = cf ? 1 : 0;
  rep.tx = TransmitDesign::sensing_only(rx);
  rep.crb_trace.push_back(crb_or_throw(ch, rx, rf, config));
  rep.iterations = 1;
  rep.reason = "converged";
  return rep;
}

AoReport sensing_reflect_only(const ChannelSet& ch, const SystemConfig& config, std::uint64_t seed,
                              const AoOptions& opts) {
  config.validate(Mode::sensing);
  Rng rng(seed);
  AoReport rep;
  rep.rf = initial_reflect(ch, config, rng);
  const int m = static_cast<int>(ch.G.cols());
  const ComplexMatrix rx = ComplexMatrix::Identity(m, m) * (config.P_t / m);
  const IrsPowerModel pm(ch, rx, rep.rf.phi, config.sigma_r2);
  RealVector q = rep.rf.p.cwiseAbs2();
  if (pm.total(q) > config.P_s) {
    q *= pm.max_scale(q, config.P_s) * (1.0 - 1e-12);
    rep.rf.p = q.cwiseSqrt();
  }
  double crb = crb_or_throw(ch, rx, rep.rf, config);
  rep.crb_trace.push_back(crb);
  rep.reason = "max-iter";
  for (int it = 1; it <= opts.max_outer; ++it) {
    rep.iterations = it;
    rep.rf.phi = optimize_phi_sdr(ch, rx, rep.rf, config, opts.n_randomizations, rng, opts.solver);
    const GainStepResult g = optimize_gain_sca(ch, rx, rep.rf, config, opts);
    ReflectDesign cand_rf{g.p, rep.rf.phi};
    if (const auto c = crb_closed_form(ch, rx, cand_rf, config); c && *c <= crb &&
        irs_power_terms(ch, rx, cand_rf, config.sigma_r2).total() <= config.P_s) {
      rep.rf = cand_rf;
      crb = *c;
    }
    const double prev = rep.crb_trace.back();
    rep.crb_trace.push_back(crb);
    if ((prev - crb) / prev < opts.rel_tol) {
      rep.reason = "converged";
      break;
    }
  }
  rep.tx = TransmitDesign::sensing_only(rx);
  return rep;
}

}  // namespace irisac
