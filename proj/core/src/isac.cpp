#include "irisac/isac.hpp"

#include "irisac/conic/epigraph.hpp"
#include "irisac/conic/sdp_problem.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace irisac {

using conic::AffineMatrix;
using conic::LinExpr;
using conic::SdpProblem;

namespace {

constexpr double kMargin = 1e-7;
constexpr double kInf = std::numeric_limits<double>::infinity();

int num_users(const ChannelSet& ch, const SystemConfig& config) {
  const int k = static_cast<int>(ch.h.size());
  if (k < 1) throw DimensionError("ISAC mode needs at least one user");
  if (static_cast<int>(config.gamma.size()) < k) throw DimensionError("one SINR target per user is required");
  return k;
}

double gamma_of(const SystemConfig& config, int k) { return config.gamma[static_cast<std::size_t>(k)]; }

std::optional<double> crb_of_q(const ChannelSet& ch, const ComplexMatrix& rx, const RealVector& q,
                               const SystemConfig& config) {
  const auto f = crb_factors(ch, rx, q.cwiseSqrt(), config);
  if (!f) return std::nullopt;
  return crb_product(f->t1, f->t2, q) / config.T;
}

ComplexMatrix outer(const ComplexVector& w) { return w * w.adjoint(); }

bool design_feasible(const ChannelSet& ch, const TransmitDesign& tx, const ReflectDesign& rf,
                     const SystemConfig& config, bool irs_constraint) {
  return check_feasibility(ch, tx, rf, config, {true, irs_constraint, true}).feasible();
}

// SINR of every user for given amplitudes and phases.
std::vector<double> user_sinrs(const ChannelSet& ch, const TransmitDesign& tx, const ReflectDesign& rf,
                               const SystemConfig& config) {
  std::vector<double> out;
  for (int k = 0; k < static_cast<int>(tx.w.size()); ++k) out.push_back(sinr(k, ch, tx, rf, config));
  return out;
}

double min_of(const std::vector<double>& v) {
  return v.empty() ? kInf : *std::min_element(v.begin(), v.end());
}

}  // namespace

ComplexMatrix sinr_phase_form(const ChannelSet& ch, const RealVector& p, int k, const ComplexMatrix& x) {
  const ComplexVector a = ch.h[static_cast<std::size_t>(k)].cwiseProduct(p.cast<cplx>());
  const ComplexMatrix gxg = ch.G * x * ch.G.adjoint();
  return hermitian_part(a.asDiagonal() * gxg.transpose() * a.conjugate().asDiagonal());
}

RealMatrix sinr_gain_form(const ChannelSet& ch, const ComplexVector& phi, int k, const ComplexMatrix& x) {
  const ComplexVector b = ch.h[static_cast<std::size_t>(k)].conjugate().cwiseProduct(phi);
  const ComplexMatrix gxg = ch.G * x * ch.G.adjoint();
  const RealMatrix l = (b.asDiagonal() * gxg * b.conjugate().asDiagonal()).real();
  return 0.5 * (l + l.transpose());
}

double user_noise(const ChannelSet& ch, const RealVector& p, int k, const SystemConfig& config) {
  const RealVector h2 = ch.h[static_cast<std::size_t>(k)].cwiseAbs2();
  return config.sigma_r2 * h2.dot(p.cwiseAbs2()) + config.sigma_u2;
}

TransmitDesign reconstruct_rank_one(const ChannelSet& ch, const ReflectDesign& rf, const std::vector<ComplexMatrix>& w,
                                    const ComplexMatrix& r0) {
  TransmitDesign tx;
  ComplexMatrix rest = r0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const ComplexVector hb = effective_channel(ch, rf, static_cast<int>(k));
    const ComplexVector wh = w[k] * hb;
    const double s = hb.dot(wh).real();
    ComplexVector beam = ComplexVector::Zero(w[k].rows());
    if (s > 0.0) beam = wh / std::sqrt(s);
    rest += w[k] - outer(beam);
    tx.w.push_back(beam);
  }
  tx.R0 = hermitian_part(rest);
  return tx;
}

P5Result solve_p5_full(const ChannelSet& ch, const ReflectDesign& rf, const SystemConfig& config,
                       const conic::SolverOptions& opts, const P5Options& p5) {
  const int users = num_users(ch, config);
  const bool fixed = !p5.fixed_directions.empty();
  if (fixed && static_cast<int>(p5.fixed_directions.size()) != users) {
    throw DimensionError("solve_p5: one fixed direction per user is required");
  }
  const int m = static_cast<int>(ch.G.cols());
  const double g_scale = ch.G.cwiseAbs().maxCoeff();
  const double a_scale = rf.p.maxCoeff();
  if (!(a_scale > 0.0)) throw NumericalError("solve_p5: zero amplitudes");
  const ComplexMatrix g_n = ch.G / g_scale;
  const RealVector p_n = rf.p / a_scale;

  // Variables are the covariances divided by the largest isotropic transmit
  // power both budgets allow (see solve_p3_numeric).
  double scale = config.P_t;
  double pbar = 0.0;
  ComplexMatrix a_irs;
  if (p5.irs_constraint) {
    pbar = config.P_s - transmit_independent_irs_power(ch, rf, config.sigma_r2);
    if (!(pbar > 0.0)) throw InfeasibleError("solve_p5: IRS noise alone exceeds the IRS budget");
    a_irs = irs_power_matrix(ch, rf);
    const double iso = a_irs.trace().real() / m;
    if (iso > 0.0) scale = std::min(scale, pbar / iso);
  }

  SdpProblem prob;
  std::vector<AffineMatrix> w_e;
  std::vector<conic::HermVar> w_v;
  std::vector<int> s_idx;
  for (int k = 0; k < users; ++k) {
    if (fixed) {
      const ComplexVector& u = p5.fixed_directions[static_cast<std::size_t>(k)];
      const int s = prob.add_scalar("s" + std::to_string(k));
      prob.add_leq(-LinExpr::variable(s), 0.0, "s_nonneg");
      AffineMatrix e = AffineMatrix::zero(m, m);
      e.terms.emplace_back(s, outer(u / u.norm()));
      w_e.push_back(std::move(e));
      s_idx.push_back(s);
    } else {
      w_v.push_back(prob.add_hermitian(m, "W" + std::to_string(k)));
      w_e.push_back(w_v.back().expr());
    }
  }
  const auto r0 = prob.add_hermitian(m, "R0");
  AffineMatrix rx_e = r0.expr();
  for (const auto& e : w_e) rx_e += e;

  const auto ep = conic::build_trace_inverse_epigraph(prob, conic::congruence(g_n, rx_e),
                                                      trace_inverse_weight(g_n, p_n, m));
  prob.minimize(ep.trace);

  std::vector<std::size_t> sinr_rows;
  for (int k = 0; k < users; ++k) {
    const ComplexVector hb = effective_channel(ch, rf, k);
    const ComplexMatrix a = outer(hb) * (scale / user_noise(ch, rf.p, k, config));
    // h^H (Rx - W_k) h - h^H W_k h / Gamma <= -noise, divided by the noise.
    const LinExpr row = conic::trace_product(a, rx_e) -
                        (1.0 + 1.0 / gamma_of(config, k)) * conic::trace_product(a, w_e[static_cast<std::size_t>(k)]);
    sinr_rows.push_back(prob.add_leq(row, -1.0 - kMargin, "sinr" + std::to_string(k)));
  }
  prob.add_leq(conic::trace_product(ComplexMatrix::Identity(m, m) * (scale / config.P_t), rx_e), 1.0 - kMargin,
               "bs_power");
  if (p5.irs_constraint) {
    prob.add_leq(conic::trace_product(a_irs * (scale / pbar), rx_e), 1.0 - kMargin, "irs_power");
  }

  const auto sol = prob.solve(opts);
  if (sol.status() == conic::SolveStatus::primal_infeasible) {
    std::size_t worst = 0;
    for (std::size_t k = 1; k < sinr_rows.size(); ++k) {
      if (sol.inequality_dual(sinr_rows[k]) > sol.inequality_dual(sinr_rows[worst])) worst = k;
    }
    throw InfeasibleError("solve_p5: SINR targets unreachable, binding user " + std::to_string(worst));
  }
  if (!sol.ok()) throw NumericalError("solve_p5: solver returned " + conic::to_string(sol.status()));

  P5Result out;
  out.R0 = hermitian_part(scale * sol.value(r0));
  for (int k = 0; k < users; ++k) {
    out.W.push_back(hermitian_part(scale * w_e[static_cast<std::size_t>(k)].evaluate(sol.raw.x)));
  }
  if (fixed) {
    out.tx.R0 = out.R0;
    for (int k = 0; k < users; ++k) {
      const ComplexVector& u = p5.fixed_directions[static_cast<std::size_t>(k)];
      const double s = std::max(0.0, scale * sol.value(s_idx[static_cast<std::size_t>(k)]));
      out.tx.w.push_back(u / u.norm() * std::sqrt(s));
    }
  } else {
    out.tx = reconstruct_rank_one(ch, rf, out.W, out.R0);
  }
  const ComplexMatrix c = ch.G * out.tx.Rx() * ch.G.adjoint();
  const RealVector iq = rf.p.cwiseAbs2().cwiseInverse();
  out.objective = (c.inverse() * iq.cast<cplx>().asDiagonal()).trace().real();
  return out;
}

TransmitDesign solve_p5(const ChannelSet& ch, const ReflectDesign& rf, const SystemConfig& config,
                        const conic::SolverOptions& opts, const P5Options& p5) {
  return solve_p5_full(ch, rf, config, opts, p5).tx;
}

void BisectionConfig::validate() const {
  if (!(kappa_min < kappa_max)) throw std::invalid_argument("bisection: kappa_min must be below kappa_max");
  if (!(eps > 0.0)) throw std::invalid_argument("bisection: eps must be positive");
}

BisectionResult bisect(const BisectionConfig& cfg, const std::function<bool(double)>& feasible) {
  cfg.validate();
  BisectionResult r;
  r.lo = cfg.kappa_min;
  r.hi = cfg.kappa_max;
  while (r.hi - r.lo > cfg.eps) {
    const double mid = 0.5 * (r.lo + r.hi);
    const bool ok = feasible(mid);
    ++r.probes;
    r.history.emplace_back(mid, ok);
    if (ok) {
      r.lo = mid;
      r.any_feasible = true;
    } else {
      r.hi = mid;
    }
  }
  return r;
}

BisectionConfig default_bisection(const ChannelSet& ch, const TransmitDesign& tx, const ReflectDesign& rf,
                                  const SystemConfig& config, double rel_eps) {
  double top = 0.0;
  for (std::size_t k = 0; k < tx.w.size() && k < ch.h.size(); ++k) {
    const ComplexVector gw = ch.G * tx.w[k];
    const double amp = ch.h[k].cwiseAbs().cwiseProduct(rf.p).dot(gw.cwiseAbs());
    top = std::max(top, amp * amp / user_noise(ch, rf.p, static_cast<int>(k), config));
  }
  BisectionConfig b;
  b.kappa_min = 0.0;
  b.kappa_max = top > 0.0 ? top : 1.0;
  b.eps = rel_eps * b.kappa_max;
  return b;
}

PhaseStepResult maxmin_phase_bisection(const ChannelSet& ch, const TransmitDesign& tx, const ReflectDesign& rf,
                                       const SystemConfig& config, const BisectionConfig& bis,
                                       int n_randomizations, Rng& rng, const conic::SolverOptions& opts,
                                       bool irs_constraint) {
  const int users = static_cast<int>(tx.w.size());
  const int n = rf.size();
  const ComplexMatrix rx = tx.Rx();
  PhaseStepResult res;
  res.phi = rf.phi;
  res.min_sinr_before = min_of(user_sinrs(ch, tx, rf, config));
  res.min_sinr_after = res.min_sinr_before;
  if (n < 2 || users == 0) return res;

  std::vector<ComplexMatrix> sig, intf;
  std::vector<double> noise;
  for (int k = 0; k < users; ++k) {
    const ComplexMatrix wk = outer(tx.w[static_cast<std::size_t>(k)]);
    sig.push_back(sinr_phase_form(ch, rf.p, k, wk));
    intf.push_back(sinr_phase_form(ch, rf.p, k, rx - wk));
    noise.push_back(user_noise(ch, rf.p, k, config));
  }
  ComplexMatrix power;
  double budget = kInf;
  if (irs_constraint) {
    power = phase_power_matrix(ch, rx, rf.p);
    const IrsPowerTerms t = irs_power_terms(ch, rx, rf, config.sigma_r2);
    budget = config.P_s - (t.forward + t.echo_noise + t.self_noise);
    if (!(budget > 0.0)) {
      res.degraded = true;
      return res;
    }
  }
  const bool power_row = irs_constraint && power.cwiseAbs().maxCoeff() > 0.0;

  ComplexMatrix theta_best;
  auto probe = [&](double kappa) {
    SdpProblem prob;
    const AffineMatrix theta = conic::unit_diagonal_hermitian(prob, n, "theta");
    prob.add_lmi(theta, "theta");
    const int t = prob.add_scalar("t");
    prob.maximize(LinExpr::variable(t));
    for (int k = 0; k < users; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      const ComplexMatrix a = (sig[uk] - kappa * intf[uk]) / (noise[uk] * (1.0 + kappa));
      prob.add_leq(LinExpr::variable(t) - conic::trace_product(a, theta), -kappa / (1.0 + kappa), "sinr");
    }
    if (power_row) prob.add_leq(conic::trace_product(power / budget, theta), 1.0, "irs_power");
    const auto sol = prob.solve(opts);
    if (!sol.ok() || sol.value(t) < 0.0) return false;
    theta_best = hermitian_part(theta.evaluate(sol.raw.x));
    return true;
  };
  res.bisection = bisect(bis, probe);
  if (!res.bisection.any_feasible) {
    res.degraded = true;
    return res;
  }

  auto score = [&](const ComplexVector& phi) {
    if (power_row && phi.dot(power * phi).real() > budget) return kInf;
    double worst = kInf;
    for (int k = 0; k < users; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      const double s = phi.dot(sig[uk] * phi).real();
      const double i = phi.dot(intf[uk] * phi).real();
      worst = std::min(worst, s / (i + noise[uk]));
    }
    return -worst;
  };
  res.phi = randomize_phases(theta_best, rf.phi, n_randomizations, rng, score);
  res.min_sinr_after = min_of(user_sinrs(ch, tx, ReflectDesign{rf.p, res.phi}, config));
  return res;
}

LiftedGainResult optimize_gain_isac_sca(const ChannelSet& ch, const TransmitDesign& tx, const ReflectDesign& rf,
                                        const SystemConfig& config, const AoOptions& opts) {
  const int users = static_cast<int>(tx.w.size());
  const int n = rf.size();
  const double a2 = config.a_max * config.a_max;
  const ComplexMatrix rx = tx.Rx();
  const IrsPowerModel pm(ch, rx, rf.phi, config.sigma_r2);
  LiftedGainResult res;

  const RealVector full = RealVector::Constant(n, config.a_max);
  if (pm.total(full.cwiseAbs2()) <= config.P_s && design_feasible(ch, tx, ReflectDesign{full, rf.phi}, config, true)) {
    res.P_bar = full * full.transpose();
    res.shortcut = true;
    return res;
  }

  // SINR rows: tr(B_k P_bar) + sigma_r^2 h2_k^T diag(P_bar) + sigma_u^2 <= 0.
  std::vector<RealMatrix> rows;
  for (int k = 0; k < users; ++k) {
    const ComplexMatrix wk = outer(tx.w[static_cast<std::size_t>(k)]);
    RealMatrix b = sinr_gain_form(ch, rf.phi, k, rx - wk) - sinr_gain_form(ch, rf.phi, k, wk) / gamma_of(config, k);
    b.diagonal() += config.sigma_r2 * ch.h[static_cast<std::size_t>(k)].cwiseAbs2();
    rows.push_back(std::move(b));
  }

  RealMatrix pbar = rf.p * rf.p.transpose();
  auto diag_of = [](const RealMatrix& m) { return RealVector(m.diagonal()); };
  auto cur = crb_of_q(ch, rx, diag_of(pbar), config);
  if (!cur) throw NumericalError("optimize_gain_isac_sca: CRB unbounded at the starting point");

  for (int round = 0; round < opts.sca_refresh_rounds && !res.stalled; ++round) {
    const double round_start = *cur;
    const auto f = crb_factors(ch, rx, diag_of(pbar).cwiseSqrt(), config);
    if (!f) break;
    for (int it = 0; it < opts.isac_sca_max_iter; ++it) {
      const RealVector q = diag_of(pbar);
      const double j = crb_product(f->t1, f->t2, q);
      const RealVector d = crb_product_gradient(f->t1, f->t2, q);
      const RealVector gp = pm.gradient(q);
      const double rhs = config.P_s - pm.total(q) + gp.dot(q);

      // Variable X = P_bar / a_max^2.
      SdpProblem prob;
      const auto xv = prob.add_symmetric(n, "Pbar");
      const AffineMatrix x = xv.expr();
      LinExpr obj;
      LinExpr lin_power;
      const double d_scale = d.cwiseAbs().maxCoeff();
      for (int i = 0; i < n; ++i) {
        const LinExpr xi = conic::real_entry(x, i, i);
        obj += (d(i) / d_scale) * xi;
        lin_power += (gp(i) * a2 / config.P_s) * xi;
        prob.add_leq(xi, 1.0, "cap");
      }
      prob.minimize(obj);
      prob.add_leq(lin_power, rhs / config.P_s, "irs_power");
      for (int k = 0; k < users; ++k) {
        prob.add_leq(conic::trace_product((rows[static_cast<std::size_t>(k)] * (a2 / config.sigma_u2)).cast<cplx>(), x),
                     -1.0 - kMargin, "sinr");
      }
      const auto sol = prob.solve(opts.solver);
      if (!sol.ok()) {
        res.stalled = true;
        break;
      }
      RealMatrix target = a2 * sol.value(xv);
      target = 0.5 * (target + target.transpose());

      bool accepted = false;
      double step = 1.0;
      double j_new = j;
      for (int h = 0; h <= opts.max_halvings; ++h, step *= 0.5) {
        const RealMatrix cand = pbar + step * (target - pbar);
        const RealVector qc = diag_of(cand);
        if (qc.minCoeff() <= 0.0 || pm.total(qc) > config.P_s) continue;
        const double jc = crb_product(f->t1, f->t2, qc);
        const auto c = crb_of_q(ch, rx, qc, config);
        if (jc < j && c && *c <= *cur) {
          pbar = cand;
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
  res.P_bar = pbar;
  return res;
}

GainScaleCoefficients gain_scale_coefficients(const ChannelSet& ch, const TransmitDesign& tx,
                                              const ComplexVector& phi, const RealVector& p_dot,
                                              const SystemConfig& config) {
  const ComplexMatrix rx = tx.Rx();
  const IrsPowerModel pm(ch, rx, phi, config.sigma_r2);
  const RealVector q = p_dot.cwiseAbs2();
  GainScaleCoefficients c;
  c.b1 = pm.echo(q);
  c.b2 = pm.echo_noise(q);
  c.b4 = 2.0 * config.sigma_r2 * q.sum();
  c.b3 = pm.linear(q) - c.b4;
  for (int k = 0; k < static_cast<int>(tx.w.size()); ++k) {
    const ComplexMatrix wk = outer(tx.w[static_cast<std::size_t>(k)]);
    const RealMatrix b =
        sinr_gain_form(ch, phi, k, rx - wk) - sinr_gain_form(ch, phi, k, wk) / gamma_of(config, k);
    c.lambda.push_back(p_dot.dot(b * p_dot) +
                       config.sigma_r2 * ch.h[static_cast<std::size_t>(k)].cwiseAbs2().dot(q));
  }
  return c;
}

double max_feasible_scale(const GainScaleCoefficients& c, double p_dot_max_sq, const SystemConfig& config,
                          ScaleBinding* binding) {
  const double quad = c.b1 + c.b2;
  const double lin = c.b3 + c.b4;
  const double root = quad + lin > 0.0 ? positive_root(quad, lin, config.P_s) : kInf;
  const double cap = config.a_max * config.a_max / p_dot_max_sq;
  const double tau = std::min(root, cap);
  double lower = 0.0;
  for (double l : c.lambda) {
    if (!(l < 0.0)) return -1.0;
    lower = std::max(lower, config.sigma_u2 / -l);
  }
  if (tau < lower || !std::isfinite(tau)) return -1.0;
  if (binding) *binding = root < cap ? ScaleBinding::irs_power : ScaleBinding::amplitude;
  return tau;
}

ScaleResult scale_randomized_gain(const RealMatrix& p_bar, const ChannelSet& ch, const TransmitDesign& tx,
                                  const ReflectDesign& rf, const SystemConfig& config, int n_randomizations,
                                  Rng& rng) {
  const ComplexMatrix rx = tx.Rx();
  const int n = rf.size();
  ScaleResult res;
  res.p = rf.p;
  res.degraded = true;
  double best = kInf;

  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(0.5 * (p_bar + p_bar.transpose()));
  const RealVector sv = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const RealMatrix factor = eig.eigenvectors() * sv.asDiagonal();
  std::normal_distribution<double> normal(0.0, 1.0);

  auto consider = [&](const RealVector& p_dot, int index) {
    if (!(p_dot.minCoeff() > 0.0)) return;
    const GainScaleCoefficients c = gain_scale_coefficients(ch, tx, rf.phi, p_dot, config);
    ScaleBinding binding = ScaleBinding::none;
    const double tau = max_feasible_scale(c, p_dot.cwiseAbs2().maxCoeff(), config, &binding);
    if (tau < 0.0) return;
    ++res.feasible_candidates;
    const RealVector p = std::sqrt(tau) * p_dot;
    const auto v = crb_closed_form(ch, rx, ReflectDesign{p, rf.phi}, config);
    if (v && *v < best) {
      best = *v;
      res.p = p;
      res.tau = tau;
      res.candidate = index;
      res.binding = binding;
      res.degraded = false;
    }
  };
  consider(rf.p, 0);
  consider(RealVector(p_bar.diagonal().cwiseMax(0.0).cwiseSqrt()), 1);
  for (int i = 0; i < n_randomizations; ++i) {
    RealVector r(n);
    for (int j = 0; j < n; ++j) r(j) = normal(rng);
    consider(RealVector((factor * r).cwiseAbs()), i + 2);
  }
  return res;
}

IsacAoReport run_isac_ao(const ChannelSet& ch, const SystemConfig& config, const ReflectDesign& initial, Rng& rng,
                         const AoOptions& opts, const IsacAoVariant& variant) {
  auto transmit = [&](const ReflectDesign& rf) {
    P5Options p5;
    p5.irs_constraint = variant.irs_constraint;
    if (variant.directions) p5.fixed_directions = variant.directions(rf);
    return solve_p5(ch, rf, config, opts.solver, p5);
  };
  auto feasible = [&](const TransmitDesign& tx, const ReflectDesign& rf) {
    return design_feasible(ch, tx, rf, config, variant.irs_constraint);
  };
  auto crb_of = [&](const TransmitDesign& tx, const ReflectDesign& rf) {
    return crb_closed_form(ch, tx.Rx(), rf, config);
  };

  IsacAoReport rep;
  rep.rf = initial;
  rep.tx = transmit(rep.rf);
  const auto c0 = crb_of(rep.tx, rep.rf);
  if (!c0) throw NumericalError("run_isac_ao: CRB unbounded at the initial design");
  double crb = *c0;
  auto record = [&] {
    const MetricsReport m = check_feasibility(ch, rep.tx, rep.rf, config, {true, variant.irs_constraint, true});
    rep.crb_trace.push_back(crb);
    rep.min_sinr_db_trace.push_back(m.min_sinr_db);
    rep.irs_power_trace.push_back(m.irs_power);
  };
  record();
  rep.reason = "max-iter";

  for (int it = 1; it <= opts.max_outer; ++it) {
    rep.iterations = it;
    if (variant.optimize_phase) {
      const BisectionConfig bis = default_bisection(ch, rep.tx, rep.rf, config, opts.bisection_rel_eps);
      const PhaseStepResult ph = maxmin_phase_bisection(ch, rep.tx, rep.rf, config, bis, opts.n_randomizations, rng,
                                                        opts.solver, variant.irs_constraint);
      const ReflectDesign cand{rep.rf.p, ph.phi};
      if (const auto c = crb_of(rep.tx, cand); c && *c <= crb * (1.0 + 1e-12) && feasible(rep.tx, cand)) {
        rep.rf = cand;
        crb = std::min(crb, *c);
      }
    }
    if (variant.optimize_gain) {
      try {
        const LiftedGainResult g = optimize_gain_isac_sca(ch, rep.tx, rep.rf, config, opts);
        const ScaleResult s =
            scale_randomized_gain(g.P_bar, ch, rep.tx, rep.rf, config, opts.n_randomizations, rng);
        const ReflectDesign cand{s.p, rep.rf.phi};
        if (const auto c = crb_of(rep.tx, cand); !s.degraded && c && *c <= crb && feasible(rep.tx, cand)) {
          rep.rf = cand;
          crb = *c;
        }
      } catch (const NumericalError&) {
        // keep the incumbent amplitudes
      }
    }
    bool stalled = false;
    try {
      const TransmitDesign tx = transmit(rep.rf);
      if (const auto c = crb_of(tx, rep.rf); c && *c <= crb && feasible(tx, rep.rf)) {
        rep.tx = tx;
        crb = *c;
      }
    } catch (const std::runtime_error&) {
      stalled = true;
    }
    const double prev = rep.crb_trace.back();
    record();
    if (stalled) {
      rep.reason = "stalled";
      break;
    }
    if ((prev - crb) / prev < opts.rel_tol) {
      rep.reason = "converged";
      break;
    }
  }
  return rep;
}

IsacAoReport ao_isac(const ChannelSet& ch, const SystemConfig& config, std::uint64_t seed, const AoOptions& opts) {
  config.validate(Mode::isac);
  Rng rng(seed);
  std::string last;
  for (int attempt = 0; attempt < 5; ++attempt) {
    const ReflectDesign rf = initial_reflect(ch, config, rng);
    try {
      return run_isac_ao(ch, config, rf, rng, opts);
    } catch (const InfeasibleError& e) {
      last = e.what();
    }
  }
  throw InfeasibleError("ao_isac: infeasible for 5 reflection draws; last: " + last);
}

}  // namespace irisac
