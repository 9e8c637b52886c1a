#include "irisac/conic/solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace irisac::conic {

Eigen::Index ConeDims::rows() const {
  Eigen::Index m = nonneg;
  for (int d : psd) m += svec_size(d);
  return m;
}

int ConeDims::degree() const {
  int deg = nonneg;
  for (int d : psd) deg += d;
  return deg;
}

void ConicProgram::validate() const {
  const Eigen::Index n = c.size();
  if (G.cols() != n || A.cols() != n) throw DimensionError("ConicProgram: column count differs from c");
  if (G.rows() != h.size() || A.rows() != b.size()) throw DimensionError("ConicProgram: rhs length mismatch");
  if (G.rows() != dims.rows()) throw DimensionError("ConicProgram: G rows do not match the cone");
  if (dims.nonneg < 0) throw DimensionError("ConicProgram: negative orthant size");
  for (int d : dims.psd) {
    if (d <= 0) throw DimensionError("ConicProgram: PSD block of nonpositive size");
  }
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::primal_infeasible: return "primal infeasible";
    case SolveStatus::dual_infeasible: return "dual infeasible";
    case SolveStatus::max_iterations: return "max-iter";
    case SolveStatus::numerical_error: return "numerical error";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kStallIterations = 30;

// Nesterov-Todd scaling point for the product cone.
struct Scaling {
  RealVector d;                    // orthant: sqrt(s / z)
  RealVector lam_lp;               // orthant: sqrt(s * z)
  std::vector<RealMatrix> R;       // block: W(u) = R^T u R
  std::vector<RealMatrix> Rinv;
  std::vector<RealVector> lam;     // block: diagonal of the scaled point
};

class Cone {
 public:
  explicit Cone(const ConeDims& dims) : nl_(dims.nonneg), dims_(dims.psd) {
    Eigen::Index off = nl_;
    for (int d : dims_) {
      offs_.push_back(off);
      off += svec_size(d);
    }
    m_ = off;
    degree_ = dims.degree();
  }

  Eigen::Index rows() const { return m_; }
  int degree() const { return degree_; }
  int nonneg() const { return nl_; }
  std::size_t blocks() const { return dims_.size(); }
  int dim(std::size_t j) const { return dims_[j]; }
  Eigen::Index offset(std::size_t j) const { return offs_[j]; }
  Eigen::Index length(std::size_t j) const { return svec_size(dims_[j]); }

  RealMatrix block(const RealVector& v, std::size_t j) const {
    return smat(v.segment(offs_[j], length(j)), dims_[j]);
  }
  void set_block(RealVector& v, std::size_t j, const RealMatrix& x) const {
    v.segment(offs_[j], length(j)) = svec(x);
  }

  RealVector identity() const {
    RealVector e = RealVector::Zero(m_);
    e.head(nl_).setOnes();
    for (std::size_t j = 0; j < blocks(); ++j) set_block(e, j, RealMatrix::Identity(dims_[j], dims_[j]));
    return e;
  }

  bool scaling(const RealVector& s, const RealVector& z, Scaling& w) const {
    w.d.resize(nl_);
    w.lam_lp.resize(nl_);
    for (int i = 0; i < nl_; ++i) {
      if (!(s(i) > 0.0) || !(z(i) > 0.0)) return false;
      w.d(i) = std::sqrt(s(i) / z(i));
      w.lam_lp(i) = std::sqrt(s(i) * z(i));
    }
    w.R.resize(blocks());
    w.Rinv.resize(blocks());
    w.lam.resize(blocks());
    for (std::size_t j = 0; j < blocks(); ++j) {
      const int d = dims_[j];
      RealMatrix ls, lz;
      if (!factor(block(s, j), ls) || !factor(block(z, j), lz)) return false;
      Eigen::JacobiSVD<RealMatrix> svd(lz.transpose() * ls, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const RealVector lam = svd.singularValues();
      if (!(lam.minCoeff() > 0.0)) return false;
      const RealMatrix& v = svd.matrixV();
      const RealVector isq = lam.cwiseSqrt().cwiseInverse();
      w.R[j] = ls * v * isq.asDiagonal();
      const RealMatrix ls_inv =
          ls.triangularView<Eigen::Lower>().solve(RealMatrix::Identity(d, d));
      w.Rinv[j] = lam.cwiseSqrt().asDiagonal() * v.transpose() * ls_inv;
      w.lam[j] = lam;
    }
    return true;
  }

  // W^{-T} v
  RealVector winv_t(const Scaling& w, const RealVector& v) const {
    RealVector out(m_);
    out.head(nl_) = v.head(nl_).cwiseQuotient(w.d);
    for (std::size_t j = 0; j < blocks(); ++j) {
      set_block(out, j, w.Rinv[j] * block(v, j) * w.Rinv[j].transpose());
    }
    return out;
  }

  // W^T v
  RealVector w_t(const Scaling& w, const RealVector& v) const {
    RealVector out(m_);
    out.head(nl_) = v.head(nl_).cwiseProduct(w.d);
    for (std::size_t j = 0; j < blocks(); ++j) {
      set_block(out, j, w.R[j] * block(v, j) * w.R[j].transpose());
    }
    return out;
  }

  // W^{-1} v
  RealVector w_inv(const Scaling& w, const RealVector& v) const {
    RealVector out(m_);
    out.head(nl_) = v.head(nl_).cwiseQuotient(w.d);
    for (std::size_t j = 0; j < blocks(); ++j) {
      set_block(out, j, w.Rinv[j].transpose() * block(v, j) * w.Rinv[j]);
    }
    return out;
  }

  RealVector lambda(const Scaling& w) const {
    RealVector out = RealVector::Zero(m_);
    out.head(nl_) = w.lam_lp;
    for (std::size_t j = 0; j < blocks(); ++j) {
      set_block(out, j, RealMatrix(w.lam[j].asDiagonal()));
    }
    return out;
  }

  RealVector jordan(const RealVector& a, const RealVector& b) const {
    RealVector out(m_);
    out.head(nl_) = a.head(nl_).cwiseProduct(b.head(nl_));
    for (std::size_t j = 0; j < blocks(); ++j) {
      const RealMatrix x = block(a, j);
      const RealMatrix y = block(b, j);
      const RealMatrix xy = x * y;
      set_block(out, j, 0.5 * (xy + xy.transpose()));
    }
    return out;
  }

  // Solves lambda o u = r for u.
  RealVector lambda_solve(const Scaling& w, const RealVector& r) const {
    RealVector out(m_);
    out.head(nl_) = r.head(nl_).cwiseQuotient(w.lam_lp);
    for (std::size_t j = 0; j < blocks(); ++j) {
      RealMatrix x = block(r, j);
      const RealVector& l = w.lam[j];
      for (int c = 0; c < dims_[j]; ++c) {
        for (int i = 0; i < dims_[j]; ++i) x(i, c) *= 2.0 / (l(i) + l(c));
      }
      set_block(out, j, x);
    }
    return out;
  }

  // Largest alpha with lambda + alpha * dv in K (may be +inf).
  double max_step(const Scaling& w, const RealVector& dv) const {
    double worst = 0.0;
    for (int i = 0; i < nl_; ++i) worst = std::min(worst, dv(i) / w.lam_lp(i));
    for (std::size_t j = 0; j < blocks(); ++j) {
      const RealVector isq = w.lam[j].cwiseSqrt().cwiseInverse();
      const RealMatrix x = isq.asDiagonal() * block(dv, j) * isq.asDiagonal();
      worst = std::min(worst, min_eigenvalue(RealMatrix(0.5 * (x + x.transpose()))));
    }
    return worst < 0.0 ? -1.0 / worst : kInf;
  }

  double min_eig(const RealVector& v) const {
    double lo = kInf;
    for (int i = 0; i < nl_; ++i) lo = std::min(lo, v(i));
    for (std::size_t j = 0; j < blocks(); ++j) lo = std::min(lo, min_eigenvalue(block(v, j)));
    return lo == kInf ? 0.0 : lo;
  }

 private:
  static bool factor(const RealMatrix& x, RealMatrix& l) {
    Eigen::LLT<RealMatrix> llt(x);
    if (llt.info() == Eigen::Success) {
      l = llt.matrixL();
      return true;
    }
    // Near-singular point: fall back to a clipped eigen-factor, made lower
    // triangular through a QR of its transpose.
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(x);
    const double top = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
    const RealVector ev = es.eigenvalues().cwiseMax(1e-14 * top);
    const RealMatrix f = es.eigenvectors() * ev.cwiseSqrt().asDiagonal();
    Eigen::LLT<RealMatrix> again(f * f.transpose());
    if (again.info() != Eigen::Success) return false;
    l = again.matrixL();
    return true;
  }

  int nl_;
  std::vector<int> dims_;
  std::vector<Eigen::Index> offs_;
  Eigen::Index m_ = 0;
  int degree_ = 0;
};

// Solves [[G~^T G~, A^T], [A, 0]] [dx; dy] = [r1; r2]. Uses a QR factor of
// [G~; A] so that K + A^T A = R^T R is never formed, then a Schur complement
// on y. Refinement passes apply the unfactored operator.
class KktSolver {
 public:
  bool factor(const RealMatrix& gt, const RealMatrix& a) {
    gt_ = &gt;
    a_ = &a;
    const Eigen::Index n = gt.cols();
    RealMatrix stacked(gt.rows() + a.rows(), n);
    stacked.topRows(gt.rows()) = gt;
    if (a.rows() > 0) stacked.bottomRows(a.rows()) = a;
    if (stacked.rows() < n) {
      stacked.conservativeResize(n, Eigen::NoChange);
      stacked.bottomRows(n - gt.rows() - a.rows()).setZero();
    }
    Eigen::HouseholderQR<RealMatrix> qr(stacked);
    r_ = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    const double top = std::max(r_.diagonal().cwiseAbs().maxCoeff(), 1e-300);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(r_(i, i)) < 1e-13 * top) r_(i, i) = r_(i, i) < 0.0 ? -1e-13 * top : 1e-13 * top;
    }
    if (a.rows() > 0) {
      kinv_at_ = k2_solve(a.transpose());
      schur_.compute(a * kinv_at_);
      if (schur_.info() != Eigen::Success) return false;
    }
    return true;
  }

  void solve(const RealVector& r1, const RealVector& r2, RealVector& dx, RealVector& dy) const {
    raw(r1, r2, dx, dy);
    for (int pass = 0; pass < 2; ++pass) {
      RealVector e1 = r1 - gt_->transpose() * (*gt_ * dx);
      RealVector e2 = r2;
      if (a_->rows() > 0) {
        e1.noalias() -= a_->transpose() * dy;
        e2.noalias() -= *a_ * dx;
      }
      RealVector cx, cy;
      raw(e1, e2, cx, cy);
      dx += cx;
      dy += cy;
    }
  }

 private:
  template <class Rhs>
  RealMatrix k2_solve(const Rhs& b) const {
    RealMatrix t = r_.transpose().triangularView<Eigen::Lower>().solve(b);
    return r_.triangularView<Eigen::Upper>().solve(t);
  }

  void raw(const RealVector& r1, const RealVector& r2, RealVector& dx, RealVector& dy) const {
    if (a_->rows() == 0) {
      dx = k2_solve(r1);
      dy.resize(0);
      return;
    }
    const RealVector t = k2_solve(r1 + a_->transpose() * r2);
    dy = schur_.solve(*a_ * t - r2);
    dx = t - kinv_at_ * dy;
  }

  const RealMatrix* gt_ = nullptr;
  const RealMatrix* a_ = nullptr;
  RealMatrix r_, kinv_at_;
  Eigen::LDLT<RealMatrix> schur_;
};

struct Equilibration {
  RealVector col;     // x = rho * col .* x_scaled
  RealVector row;     // per cone row scale (orthant rows individually, PSD blocks uniformly)
  RealVector eq_row;  // per equality row
  double rho = 1.0;
  double sigma = 1.0;
};

double safe_inv_sqrt(double v) { return v > 0.0 ? 1.0 / std::sqrt(v) : 1.0; }

Equilibration equilibrate(ConicProgram& p, const Cone& cone, const SolverOptions& opts) {
  const Eigen::Index n = p.c.size();
  Equilibration e;
  e.col = RealVector::Ones(n);
  e.row = RealVector::Ones(p.G.rows());
  e.eq_row = RealVector::Ones(p.A.rows());
  if (opts.equilibrate) {
    for (int pass = 0; pass < opts.ruiz_passes; ++pass) {
      RealVector cs(n);
      for (Eigen::Index j = 0; j < n; ++j) {
        double mx = 0.0;
        if (p.G.rows() > 0) mx = p.G.col(j).cwiseAbs().maxCoeff();
        if (p.A.rows() > 0) mx = std::max(mx, p.A.col(j).cwiseAbs().maxCoeff());
        cs(j) = safe_inv_sqrt(mx);
      }
      p.G = p.G * cs.asDiagonal();
      p.A = p.A * cs.asDiagonal();
      e.col = e.col.cwiseProduct(cs);

      RealVector rs = RealVector::Ones(p.G.rows());
      for (int i = 0; i < cone.nonneg(); ++i) rs(i) = safe_inv_sqrt(p.G.row(i).cwiseAbs().maxCoeff());
      for (std::size_t j = 0; j < cone.blocks(); ++j) {
        const double mx = p.G.middleRows(cone.offset(j), cone.length(j)).cwiseAbs().maxCoeff();
        rs.segment(cone.offset(j), cone.length(j)).setConstant(safe_inv_sqrt(mx));
      }
      p.G = rs.asDiagonal() * p.G;
      e.row = e.row.cwiseProduct(rs);

      if (p.A.rows() > 0) {
        RealVector es(p.A.rows());
        for (Eigen::Index i = 0; i < p.A.rows(); ++i) es(i) = safe_inv_sqrt(p.A.row(i).cwiseAbs().maxCoeff());
        p.A = es.asDiagonal() * p.A;
        e.eq_row = e.eq_row.cwiseProduct(es);
      }
    }
    p.c = p.c.cwiseProduct(e.col);
    p.h = p.h.cwiseProduct(e.row);
    p.b = p.b.cwiseProduct(e.eq_row);
    double hb = 0.0;
    if (p.h.size() > 0) hb = p.h.cwiseAbs().maxCoeff();
    if (p.b.size() > 0) hb = std::max(hb, p.b.cwiseAbs().maxCoeff());
    e.rho = hb > 0.0 ? hb : 1.0;
    const double cm = p.c.size() > 0 ? p.c.cwiseAbs().maxCoeff() : 0.0;
    e.sigma = cm > 0.0 ? cm : 1.0;
    p.h /= e.rho;
    p.b /= e.rho;
    p.c /= e.sigma;
  }
  return e;
}

}  // namespace

namespace {

thread_local SolveRecorder* g_recorder = nullptr;

ConicSolution solve_conic_impl(const ConicProgram& original, const SolverOptions& opts) {
  original.validate();
  const Cone cone(original.dims);
  ConicProgram p = original;
  const Equilibration eq = equilibrate(p, cone, opts);

  const Eigen::Index n = p.c.size();
  const Eigen::Index m = cone.rows();
  const Eigen::Index neq = p.A.rows();
  const double tol = opts.tol;
  const double resx0 = std::max(1.0, p.c.norm());
  const double resy0 = std::max(1.0, p.b.norm());
  const double resz0 = std::max(1.0, p.h.norm());
  // Stopping is judged in the caller's units, so residuals are mapped back
  // through the equilibration before they are normalized.
  const double obj_unscale = eq.rho * eq.sigma;
  const double resx0_o = std::max(1.0, original.c.norm());
  const double resy0_o = std::max(1.0, original.b.norm());
  const double resz0_o = std::max(1.0, original.h.norm());
  const RealVector inv_col = eq.col.cwiseInverse();
  const RealVector inv_row = eq.row.cwiseInverse();
  const RealVector inv_eq_row = eq.eq_row.cwiseInverse();

  RealVector x = RealVector::Zero(n);
  RealVector y = RealVector::Zero(neq);
  RealVector s = cone.identity();
  RealVector z = cone.identity();
  double tau = 1.0;
  double kappa = 1.0;

  ConicSolution sol;
  sol.status = SolveStatus::max_iterations;
  Scaling w;
  KktSolver kkt;
  RealMatrix gt(m, n);

  // Column sparsity per PSD block so that scaling skips empty slices.
  std::vector<std::vector<Eigen::Index>> block_cols(cone.blocks());
  for (std::size_t j = 0; j < cone.blocks(); ++j) {
    for (Eigen::Index c = 0; c < n; ++c) {
      if (p.G.col(c).segment(cone.offset(j), cone.length(j)).cwiseAbs().maxCoeff() > 0.0) {
        block_cols[j].push_back(c);
      }
    }
  }

  double pres = kInf, dres = kInf, gap = kInf, pcost = 0.0, dcost = 0.0;
  struct Iterate {
    double score = kInf;
    RealVector x, y, s, z;
    double tau = 1.0, kappa = 1.0, pres = kInf, dres = kInf, gap = kInf, pcost = 0.0, dcost = 0.0;
  } best;
  // Best infeasibility certificates seen, for the inaccurate fallback.
  struct Certificate {
    double ratio = kInf;
    RealVector a, b;
  } best_pinf, best_dinf;
  int it = 0;
  int best_it = 0;
  for (;; ++it) {
    const RealVector rx = p.A.transpose() * y + p.G.transpose() * z + p.c * tau;
    const RealVector ry = p.b * tau - p.A * x;
    const RealVector rz = s + p.G * x - p.h * tau;
    const double cx = p.c.dot(x);
    const double hz_by = p.h.dot(z) + p.b.dot(y);
    const double rt = kappa + cx + hz_by;

    pcost = obj_unscale * cx / tau;
    dcost = -obj_unscale * hz_by / tau;
    gap = obj_unscale * s.dot(z) / (tau * tau);
    pres = eq.rho / tau *
           std::max(ry.size() ? ry.cwiseProduct(inv_eq_row).norm() / resy0_o : 0.0,
                    rz.cwiseProduct(inv_row).norm() / resz0_o);
    dres = eq.sigma / tau * rx.cwiseProduct(inv_col).norm() / resx0_o;

    if (opts.verbose) {
      std::fprintf(stderr, "%3d pcost % .8e dcost % .8e gap %.2e pres %.2e dres %.2e tau %.2e kappa %.2e\n",
                   it, pcost, dcost, gap, pres, dres, tau, kappa);
    }

    if (!std::isfinite(pcost) || !std::isfinite(dcost) || !std::isfinite(gap) || !std::isfinite(pres) ||
        !std::isfinite(dres)) {
      sol.status = SolveStatus::numerical_error;
      break;
    }
    const double obj_scale = 1.0 + std::abs(pcost);
    const double score =
        std::max({pres, opts.unattained_dual ? 0.0 : dres, gap / obj_scale, std::abs(pcost - dcost) / obj_scale});
    if (score < best.score) {
      best = {score, x, y, s, z, tau, kappa, pres, dres, gap, pcost, dcost};
      best_it = it;
    }
    if (pres <= tol && dres <= tol && gap <= tol * obj_scale && std::abs(pcost - dcost) <= tol * obj_scale) {
      sol.status = SolveStatus::optimal;
      break;
    }
    if (hz_by < 0.0) {
      const RealVector aty = p.A.transpose() * y + p.G.transpose() * z;
      const double ratio = aty.norm() / resx0 / (-hz_by);
      if (ratio < best_pinf.ratio) best_pinf = {ratio, y, z};
      if (ratio <= tol) {
        sol.status = SolveStatus::primal_infeasible;
        break;
      }
    }
    if (cx < 0.0) {
      const double ax = neq ? (p.A * x).norm() / resy0 : 0.0;
      const double gxs = (p.G * x + s).norm() / resz0;
      const double ratio = std::max(ax, gxs) / (-cx);
      if (ratio < best_dinf.ratio) best_dinf = {ratio, x, s};
      if (ratio <= tol) {
        sol.status = SolveStatus::dual_infeasible;
        break;
      }
    }
    // Stop once the best iterate has not improved for a while.
    if (it >= opts.max_iterations || it - best_it > kStallIterations) {
      sol.status = SolveStatus::max_iterations;
      break;
    }

    if (!cone.scaling(s, z, w)) {
      sol.status = SolveStatus::numerical_error;
      break;
    }
    const double mu = (s.dot(z) + tau * kappa) / (cone.degree() + 1);

    // G~ = W^{-T} G
    gt.topRows(cone.nonneg()) = w.d.cwiseInverse().asDiagonal() * p.G.topRows(cone.nonneg());
    for (std::size_t j = 0; j < cone.blocks(); ++j) {
      auto seg = gt.middleRows(cone.offset(j), cone.length(j));
      seg.setZero();
      for (Eigen::Index c : block_cols[j]) {
        const RealMatrix f = smat(p.G.col(c).segment(cone.offset(j), cone.length(j)), cone.dim(j));
        seg.col(c) = svec(w.Rinv[j] * f * w.Rinv[j].transpose());
      }
    }
    if (!kkt.factor(gt, p.A)) {
      sol.status = SolveStatus::numerical_error;
      break;
    }

    const RealVector ht = cone.winv_t(w, p.h);
    const RealVector rzt = cone.winv_t(w, rz);
    const RealVector lam = cone.lambda(w);
    RealVector dx1, dy1;
    kkt.solve(-p.c + gt.transpose() * ht, p.b, dx1, dy1);
    const RealVector gdx1 = gt * dx1;
    const double denom = -kappa / tau + p.c.dot(dx1) + (neq ? p.b.dot(dy1) : 0.0) + ht.dot(gdx1) - ht.dot(ht);

    struct Step {
      RealVector dx, dy, dzt, dst;
      double dtau = 0.0, dkappa = 0.0;
    };
    auto direction = [&](double eta, const RealVector& rc, double rct) {
      Step st;
      const RealVector u = cone.lambda_solve(w, rc);
      const RealVector zt = eta * rzt + u;
      RealVector dx0, dy0;
      kkt.solve(-eta * rx - gt.transpose() * zt, eta * ry, dx0, dy0);
      const RealVector gdx0 = gt * dx0;
      const double numer = -eta * rt - rct / tau - p.c.dot(dx0) - (neq ? p.b.dot(dy0) : 0.0) - ht.dot(gdx0 + zt);
      st.dtau = numer / denom;
      st.dx = dx0 + st.dtau * dx1;
      st.dy = dy0 + st.dtau * dy1;
      st.dzt = gdx0 + st.dtau * gdx1 + zt - st.dtau * ht;
      st.dst = u - st.dzt;
      st.dkappa = (rct - kappa * st.dtau) / tau;
      return st;
    };
    auto step_length = [&](const Step& st) {
      double a = std::min(cone.max_step(w, st.dst), cone.max_step(w, st.dzt));
      if (st.dtau < 0.0) a = std::min(a, -tau / st.dtau);
      if (st.dkappa < 0.0) a = std::min(a, -kappa / st.dkappa);
      return a;
    };

    const Step aff = direction(1.0, -cone.jordan(lam, lam), -tau * kappa);
    const double a_aff = std::min(1.0, step_length(aff));
    const double sigma = std::pow(1.0 - a_aff, 3);

    RealVector rc = -cone.jordan(lam, lam) - cone.jordan(aff.dst, aff.dzt);
    rc += sigma * mu * cone.identity();
    const double rct = sigma * mu - tau * kappa - aff.dtau * aff.dkappa;
    const Step st = direction(1.0 - sigma, rc, rct);
    const double alpha = std::min(1.0, opts.step_fraction * step_length(st));
    if (!(alpha > 1e-12)) {
      sol.status = SolveStatus::max_iterations;
      break;
    }

    x += alpha * st.dx;
    if (neq) y += alpha * st.dy;
    tau += alpha * st.dtau;
    kappa += alpha * st.dkappa;
    s += alpha * cone.w_t(w, st.dst);
    z += alpha * cone.w_inv(w, st.dzt);
  }

  sol.iterations = it;
  if ((sol.status == SolveStatus::max_iterations || sol.status == SolveStatus::numerical_error) &&
      best.score < kInf) {
    x = best.x;
    y = best.y;
    s = best.s;
    z = best.z;
    tau = best.tau;
    kappa = best.kappa;
    pres = best.pres;
    dres = best.dres;
    gap = best.gap;
    pcost = best.pcost;
    dcost = best.dcost;
  }
  const double obj_scale = 1.0 + std::abs(pcost);
  const bool dual_ok = opts.unattained_dual || dres <= 1e3 * tol;
  sol.near_optimal = sol.status == SolveStatus::optimal ||
                     (pres <= 1e3 * tol && dual_ok && gap <= 1e3 * tol * obj_scale &&
                      std::abs(pcost - dcost) <= 1e3 * tol * obj_scale);
  const bool stalled = sol.status == SolveStatus::max_iterations || sol.status == SolveStatus::numerical_error;
  // Reduced accuracy acceptance for stalled runs, typically close to the
  // feasibility boundary where the multipliers grow large.
  if (!sol.near_optimal && stalled && pres <= opts.inaccurate_tol && (dual_ok || dres <= opts.inaccurate_tol) &&
      gap <= 0.5 * opts.inaccurate_tol * obj_scale && std::abs(pcost - dcost) <= 0.5 * opts.inaccurate_tol * obj_scale) {
    sol.near_optimal = true;
    sol.inaccurate = true;
  }
  // A stalled run without a usable point may still carry a certificate that
  // is accurate to inaccurate_tol, which is reported as such.
  if (!sol.near_optimal && stalled) {
    const bool pinf = best_pinf.ratio <= opts.inaccurate_tol;
    const bool dinf = best_dinf.ratio <= opts.inaccurate_tol;
    if (pinf && (!dinf || best_pinf.ratio <= best_dinf.ratio)) {
      sol.status = SolveStatus::primal_infeasible;
      y = best_pinf.a;
      z = best_pinf.b;
      x.setZero();
      s.setZero();
    } else if (dinf) {
      sol.status = SolveStatus::dual_infeasible;
      x = best_dinf.a;
      s = best_dinf.b;
      y.setZero();
      z.setZero();
    }
    sol.inaccurate = pinf || dinf;
  }
  sol.scaled_primal_objective = pcost / obj_unscale;
  sol.scaled_dual_objective = dcost / obj_unscale;
  sol.scaled_gap = gap / obj_unscale;
  sol.primal_residual = pres;
  sol.dual_residual = dres;

  // Certificates are reported unnormalized; solutions are divided by tau.
  const bool certificate =
      sol.status == SolveStatus::primal_infeasible || sol.status == SolveStatus::dual_infeasible;
  const double div = certificate ? 1.0 : tau;
  sol.min_eigenvalue_s = cone.min_eig(s) / div;
  sol.min_eigenvalue_z = cone.min_eig(z) / div;

  sol.x = eq.rho * eq.col.cwiseProduct(x) / div;
  sol.s = eq.rho * s.cwiseQuotient(eq.row) / div;
  sol.z = eq.sigma * z.cwiseProduct(eq.row) / div;
  sol.y = eq.sigma * y.cwiseProduct(eq.eq_row) / div;
  sol.primal_objective = original.c.dot(sol.x);
  sol.dual_objective = -(original.h.dot(sol.z) + original.b.dot(sol.y));
  return sol;
}

}  // namespace

SolveRecorder::SolveRecorder() : previous_(g_recorder) { g_recorder = this; }
SolveRecorder::~SolveRecorder() { g_recorder = previous_; }
SolveRecorder* SolveRecorder::active() { return g_recorder; }

ConicSolution solve_conic(const ConicProgram& prog, const SolverOptions& opts) {
  ConicSolution sol = solve_conic_impl(prog, opts);
  if (g_recorder) {
    g_recorder->add({sol.status, sol.near_optimal, sol.primal_objective, sol.dual_objective, sol.min_eigenvalue_s,
                     sol.min_eigenvalue_z, sol.iterations});
  }
  return sol;
}

}  // namespace irisac::conic
