#include "irisac/metrics.hpp"

#include <nlohmann/json.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace irisac {

ComplexMatrix TransmitDesign::Rx() const {
  ComplexMatrix rx = R0;
  for (const auto& wk : w) rx += wk * wk.adjoint();
  return rx;
}

TransmitDesign TransmitDesign::sensing_only(const ComplexMatrix& rx) {
  TransmitDesign t;
  t.R0 = rx;
  return t;
}

ComplexMatrix ReflectDesign::Psi() const {
  return (p.cast<cplx>().cwiseProduct(phi)).asDiagonal();
}

ComplexMatrix ReflectDesign::P() const { return p.cast<cplx>().asDiagonal(); }

ComplexMatrix ReflectDesign::Phi() const { return phi.asDiagonal(); }

ReflectDesign ReflectDesign::uniform(int n, double amplitude, const ComplexVector& phi) {
  if (phi.size() != n) throw DimensionError("ReflectDesign::uniform: phase vector length");
  return {RealVector::Constant(n, amplitude), phi};
}

IrsPowerTerms irs_power_terms(const ChannelSet& ch, const ComplexMatrix& rx, const ReflectDesign& rf,
                              double sigma_r2) {
  const ComplexMatrix psi = rf.Psi();
  const ComplexMatrix fwd = psi * ch.G * rx * ch.G.adjoint() * psi.adjoint();
  const ComplexMatrix pe = psi * ch.E;
  IrsPowerTerms t;
  t.echo = (pe * fwd * pe.adjoint()).trace().real();
  t.forward = fwd.trace().real();
  const RealVector q = rf.p.cwiseAbs2();
  // tr(Psi E Psi Psi^H E^H Psi^H) = sum_ij q_i |E_ij|^2 q_j
  t.echo_noise = sigma_r2 * (q.transpose() * ch.E.cwiseAbs2() * q)(0, 0);
  t.self_noise = 2.0 * sigma_r2 * q.sum();
  return t;
}

double irs_power_usage(const ChannelSet& ch, const TransmitDesign& tx, const ReflectDesign& rf,
                       const SystemConfig& config) {
  return irs_power_terms(ch, tx.Rx(), rf, config.sigma_r2).total();
}

ComplexVector effective_channel(const ChannelSet& ch, const ReflectDesign& rf, int k) {
  return ch.G.adjoint() * (rf.Psi().adjoint() * ch.h.at(static_cast<std::size_t>(k)));
}

double sinr(int k, const ChannelSet& ch, const TransmitDesign& tx, const ReflectDesign& rf,
            const SystemConfig& config) {
  const auto uk = static_cast<std::size_t>(k);
  if (uk >= tx.w.size() || uk >= ch.h.size()) throw std::out_of_range("sinr: user index");
  const ComplexVector hb = effective_channel(ch, rf, k);
  const double signal = std::norm(hb.dot(tx.w[uk]));
  double interference = 0.0;
  for (std::size_t j = 0; j < tx.w.size(); ++j) {
    if (j != uk) interference += std::norm(hb.dot(tx.w[j]));
  }
  const double sensing = (hb.adjoint() * tx.R0 * hb)(0, 0).real();
  const double irs_noise = config.sigma_r2 * (rf.p.cwiseAbs2().cwiseProduct(ch.h[uk].cwiseAbs2())).sum();
  return signal / (interference + sensing + irs_noise + config.sigma_u2);
}

ComplexMatrix dft_waveform(const ComplexMatrix& rx, int t) {
  const Eigen::Index m = rx.rows();
  if (t < m) throw std::invalid_argument("dft_waveform: T must be at least M");
  ComplexMatrix f(m, t);
  for (Eigen::Index r = 0; r < m; ++r) {
    for (int c = 0; c < t; ++c) {
      f(r, c) = std::polar(1.0 / std::sqrt(static_cast<double>(t)), -2.0 * M_PI * static_cast<double>(r * c) / t);
    }
  }
  return std::sqrt(static_cast<double>(t)) * psd_sqrt(rx) * f;
}

RealMatrix fim(const ChannelSet& ch, const ComplexMatrix& x, const ReflectDesign& rf, const SystemConfig& config) {
  const ComplexMatrix psi = rf.Psi();
  const ComplexMatrix jx = x.transpose() * ch.G.transpose() * psi;
  const ComplexMatrix jg = ch.G.transpose() * psi;
  const Eigen::Index m = ch.G.cols();
  const ComplexMatrix rw = config.sigma_r2 * ch.G.transpose() * rf.P() * rf.P() * ch.G.conjugate() +
                           config.sigma_b2 * ComplexMatrix::Identity(m, m);
  const ComplexMatrix b = jg.adjoint() * rw.llt().solve(jg);
  const ComplexMatrix fc = kron(jx.adjoint() * jx, b);
  const Eigen::Index n2 = fc.rows();
  RealMatrix f(2 * n2, 2 * n2);
  f.topLeftCorner(n2, n2) = 2.0 * fc.real();
  f.topRightCorner(n2, n2) = -2.0 * fc.imag();
  f.bottomLeftCorner(n2, n2) = 2.0 * fc.imag();
  f.bottomRightCorner(n2, n2) = 2.0 * fc.real();
  return f;
}

namespace {

// diag(C^{-1}) for Hermitian positive definite C, or empty if C is
// numerically singular.
std::optional<RealVector> inverse_diagonal(const ComplexMatrix& c) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(c));
  const RealVector& ev = es.eigenvalues();
  if (!(ev(0) > 1e-12 * ev(ev.size() - 1)) || !(ev(0) > 0.0)) return std::nullopt;
  const ComplexMatrix& v = es.eigenvectors();
  RealVector d(c.rows());
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    d(i) = (v.row(i).cwiseAbs2().transpose().cwiseQuotient(ev)).sum();
  }
  return d;
}

}  // namespace

std::optional<CrbFactors> crb_factors(const ChannelSet& ch, const ComplexMatrix& rx, const RealVector& p,
                                      const SystemConfig& config) {
  if (p.size() != ch.G.rows()) throw DimensionError("crb_factors: amplitude length");
  if (!(p.minCoeff() > 0.0)) return std::nullopt;
  const auto t1 = inverse_diagonal(ch.G * rx * ch.G.adjoint());
  if (!t1) return std::nullopt;
  const Eigen::Index m = ch.G.cols();
  const RealVector q = p.cwiseAbs2();
  const ComplexMatrix rw = config.sigma_r2 * ch.G.adjoint() * q.cast<cplx>().asDiagonal() * ch.G +
                           config.sigma_b2 * ComplexMatrix::Identity(m, m);
  const ComplexMatrix d = ch.G * rw.llt().solve(ch.G.adjoint());
  const auto t2 = inverse_diagonal(d);
  if (!t2) return std::nullopt;
  return CrbFactors{*t1, *t2};
}

std::optional<double> crb_closed_form(const ChannelSet& ch, const ComplexMatrix& rx, const ReflectDesign& rf,
                                      const SystemConfig& config) {
  const auto f = crb_factors(ch, rx, rf.p, config);
  if (!f) return std::nullopt;
  const RealVector iq = rf.p.cwiseAbs2().cwiseInverse();
  return f->t1.dot(iq) * f->t2.dot(iq) / config.T;
}

MetricsReport check_feasibility(const ChannelSet& ch, const TransmitDesign& tx, const ReflectDesign& rf,
                                const SystemConfig& config, const ConstraintSet& active, double tol) {
  MetricsReport r;
  const ComplexMatrix rx = tx.Rx();
  r.bs_power = rx.trace().real();
  r.irs_power = irs_power_usage(ch, tx, rf, config);
  r.crb = crb_closed_form(ch, rx, rf, config);
  r.min_sinr_db = std::numeric_limits<double>::infinity();
  const int users = std::min<int>(static_cast<int>(tx.w.size()), static_cast<int>(ch.h.size()));
  for (int k = 0; k < users; ++k) {
    const double g = sinr(k, ch, tx, rf, config);
    r.sinr.push_back(g);
    r.min_sinr_db = std::min(r.min_sinr_db, linear_to_db(g));
    if (active.sinr && k < static_cast<int>(config.gamma.size()) &&
        g < config.gamma[static_cast<std::size_t>(k)] * (1.0 - tol)) {
      r.sinr_ok = false;
    }
  }
  if (active.sinr && users < config.K) r.sinr_ok = false;
  r.bs_power_ok = r.bs_power <= config.P_t * (1.0 + tol);
  r.irs_power_ok = !active.irs_power || r.irs_power <= config.P_s * (1.0 + tol);
  r.amplitude_ok = !active.amplitude ||
                   (rf.p.minCoeff() >= 0.0 && rf.p.maxCoeff() <= config.a_max * (1.0 + tol));
  const double scale = std::max(r.bs_power, 1e-300);
  r.psd_ok = tx.R0.size() == 0 || min_eigenvalue(hermitian_part(tx.R0)) >= -1e-8 * scale;
  return r;
}

nlohmann::json report_to_json(const MetricsReport& r) {
  nlohmann::json s = nlohmann::json::array();
  for (double g : r.sinr) s.push_back(linear_to_db(g));
  nlohmann::json j{{"sinr_db", s},
                   {"irs_power_w", r.irs_power},
                   {"bs_power_w", r.bs_power},
                   {"feasible",
                    {{"sinr", r.sinr_ok},
                     {"irs_power", r.irs_power_ok},
                     {"bs_power", r.bs_power_ok},
                     {"amplitude", r.amplitude_ok},
                     {"psd", r.psd_ok},
                     {"all", r.feasible()}}}};
  j["crb"] = r.crb ? nlohmann::json(*r.crb) : nlohmann::json("unbounded");
  if (!r.sinr.empty()) j["min_sinr_db"] = r.min_sinr_db;
  return j;
}

}  // namespace irisac
