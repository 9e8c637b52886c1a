#include "irisac/conic/sdp_problem.hpp"

#include <ostream>

namespace irisac::conic {

AffineMatrix HermVar::expr() const {
  AffineMatrix e(ComplexMatrix::Zero(n, n));
  e.terms.reserve(static_cast<std::size_t>(n) * n);
  int k = offset;
  for (int i = 0; i < n; ++i) {
    ComplexMatrix f = ComplexMatrix::Zero(n, n);
    f(i, i) = 1.0;
    e.terms.emplace_back(k++, std::move(f));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      ComplexMatrix f = ComplexMatrix::Zero(n, n);
      f(i, j) = f(j, i) = 1.0;
      e.terms.emplace_back(k++, std::move(f));
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      ComplexMatrix f = ComplexMatrix::Zero(n, n);
      f(i, j) = cplx(0.0, 1.0);
      f(j, i) = cplx(0.0, -1.0);
      e.terms.emplace_back(k++, std::move(f));
    }
  }
  return e;
}

AffineMatrix SymVar::expr() const {
  AffineMatrix e(ComplexMatrix::Zero(n, n));
  int k = offset;
  for (int i = 0; i < n; ++i) {
    ComplexMatrix f = ComplexMatrix::Zero(n, n);
    f(i, i) = 1.0;
    e.terms.emplace_back(k++, std::move(f));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      ComplexMatrix f = ComplexMatrix::Zero(n, n);
      f(i, j) = f(j, i) = 1.0;
      e.terms.emplace_back(k++, std::move(f));
    }
  }
  return e;
}

ComplexMatrix SdpSolution::value(const HermVar& v) const {
  ComplexMatrix m(v.n, v.n);
  int k = v.offset;
  for (int i = 0; i < v.n; ++i) m(i, i) = raw.x(k++);
  for (int i = 0; i < v.n; ++i) {
    for (int j = i + 1; j < v.n; ++j) {
      m(i, j) = raw.x(k);
      m(j, i) = raw.x(k++);
    }
  }
  for (int i = 0; i < v.n; ++i) {
    for (int j = i + 1; j < v.n; ++j) {
      m(i, j) += cplx(0.0, raw.x(k));
      m(j, i) -= cplx(0.0, raw.x(k++));
    }
  }
  return m;
}

RealMatrix SdpSolution::value(const SymVar& v) const {
  RealMatrix m(v.n, v.n);
  int k = v.offset;
  for (int i = 0; i < v.n; ++i) m(i, i) = raw.x(k++);
  for (int i = 0; i < v.n; ++i) {
    for (int j = i + 1; j < v.n; ++j) m(i, j) = m(j, i) = raw.x(k++);
  }
  return m;
}

double SdpSolution::inequality_dual(std::size_t i) const { return raw.z(static_cast<Eigen::Index>(i)); }

int SdpProblem::add_scalar(const std::string& name) {
  names_.push_back(name);
  return static_cast<int>(names_.size()) - 1;
}

HermVar SdpProblem::add_hermitian(int n, const std::string& name, bool psd) {
  HermVar v{num_variables(), n};
  for (int i = 0; i < n * n; ++i) names_.push_back(name + "[" + std::to_string(i) + "]");
  if (psd) add_lmi(v.expr(), name);
  return v;
}

SymVar SdpProblem::add_symmetric(int n, const std::string& name, bool psd) {
  SymVar v{num_variables(), n};
  for (int i = 0; i < n * (n + 1) / 2; ++i) names_.push_back(name + "[" + std::to_string(i) + "]");
  if (psd) add_lmi(v.expr(), name);
  return v;
}

void SdpProblem::minimize(const LinExpr& f) {
  objective_ = f;
  sense_ = 1.0;
}

void SdpProblem::maximize(const LinExpr& f) {
  objective_ = -1.0 * f;
  sense_ = -1.0;
}

std::size_t SdpProblem::add_leq(const LinExpr& lhs, const LinExpr& rhs, const std::string& name) {
  leq_.push_back(lhs - rhs);
  leq_names_.push_back(name);
  return leq_.size() - 1;
}

void SdpProblem::add_eq(const LinExpr& lhs, const LinExpr& rhs, const std::string& name) {
  eq_.push_back(lhs - rhs);
  eq_names_.push_back(name);
}

void SdpProblem::add_lmi(const AffineMatrix& expr, const std::string& name) {
  if (expr.rows() != expr.cols() || expr.rows() == 0) {
    throw DimensionError("add_lmi: expression must be square and nonempty");
  }
  AffineMatrix e(hermitian_part(expr.constant));
  if (!is_hermitian(expr.constant, 1e-7)) throw std::invalid_argument("add_lmi: constant term is not Hermitian");
  for (const auto& [i, f] : expr.terms) {
    if (i < 0 || i >= num_variables()) throw std::out_of_range("add_lmi: unknown variable index");
    if (!is_hermitian(f, 1e-7)) throw std::invalid_argument("add_lmi: coefficient is not Hermitian");
    e.terms.emplace_back(i, hermitian_part(f));
  }
  lmi_.push_back(std::move(e));
  lmi_names_.push_back(name);
}

namespace {

RealMatrix lmi_real(const ComplexMatrix& f, bool real) {
  return real ? RealMatrix(f.real()) : hermitian_real_embedding(f);
}

void check_index(int i, int n) {
  if (i < 0 || i >= n) throw std::out_of_range("SdpProblem: unknown variable index");
}

}  // namespace

ConicProgram SdpProblem::compile() const {
  const int n = num_variables();
  ConicProgram p;
  p.c = RealVector::Zero(n);
  for (const auto& [i, v] : objective_.terms) {
    check_index(i, n);
    p.c(i) += v;
  }
  p.dims.nonneg = static_cast<int>(leq_.size());
  std::vector<bool> real(lmi_.size());
  for (std::size_t j = 0; j < lmi_.size(); ++j) {
    real[j] = lmi_[j].is_real();
    p.dims.psd.push_back(static_cast<int>(lmi_[j].rows() * (real[j] ? 1 : 2)));
  }
  const Eigen::Index m = p.dims.rows();
  p.G = RealMatrix::Zero(m, n);
  p.h = RealVector::Zero(m);
  for (std::size_t r = 0; r < leq_.size(); ++r) {
    for (const auto& [i, v] : leq_[r].terms) {
      check_index(i, n);
      p.G(r, i) += v;
    }
    p.h(r) = -leq_[r].constant;
  }
  Eigen::Index off = p.dims.nonneg;
  for (std::size_t j = 0; j < lmi_.size(); ++j) {
    const Eigen::Index len = svec_size(p.dims.psd[j]);
    p.h.segment(off, len) = svec(lmi_real(lmi_[j].constant, real[j]));
    for (const auto& [i, f] : lmi_[j].terms) {
      p.G.col(i).segment(off, len) -= svec(lmi_real(f, real[j]));
    }
    off += len;
  }
  p.A = RealMatrix::Zero(static_cast<Eigen::Index>(eq_.size()), n);
  p.b = RealVector::Zero(static_cast<Eigen::Index>(eq_.size()));
  for (std::size_t r = 0; r < eq_.size(); ++r) {
    for (const auto& [i, v] : eq_[r].terms) {
      check_index(i, n);
      p.A(r, i) += v;
    }
    p.b(r) = -eq_[r].constant;
  }
  return p;
}

SdpSolution SdpProblem::solve(const SolverOptions& opts) const {
  SdpSolution sol;
  sol.raw = solve_conic(compile(), opts);
  sol.objective = sense_ * (sol.raw.primal_objective + objective_.constant);
  return sol;
}

void SdpProblem::write_text(std::ostream& os) const {
  const ConicProgram p = compile();
  os << "variables " << p.c.size() << "\n";
  os << "nonneg " << p.dims.nonneg << "\n";
  os << "psd";
  for (int d : p.dims.psd) os << ' ' << d;
  os << "\nequalities " << p.A.rows() << "\n";
  os.precision(17);
  os << "c";
  for (Eigen::Index i = 0; i < p.c.size(); ++i) os << ' ' << p.c(i);
  os << "\nobjective_constant " << objective_.constant << "\nsense " << sense_ << "\n";
  for (Eigen::Index r = 0; r < p.G.rows(); ++r) {
    os << "G " << r;
    for (Eigen::Index c = 0; c < p.G.cols(); ++c) {
      if (p.G(r, c) != 0.0) os << ' ' << c << ':' << p.G(r, c);
    }
    os << " | " << p.h(r) << "\n";
  }
  for (Eigen::Index r = 0; r < p.A.rows(); ++r) {
    os << "A " << r;
    for (Eigen::Index c = 0; c < p.A.cols(); ++c) {
      if (p.A(r, c) != 0.0) os << ' ' << c << ':' << p.A(r, c);
    }
    os << " | " << p.b(r) << "\n";
  }
}

AffineMatrix unit_diagonal_hermitian(SdpProblem& prob, int n, const std::string& name) {
  AffineMatrix e(ComplexMatrix::Identity(n, n));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int re = prob.add_scalar(name + ".re");
      const int im = prob.add_scalar(name + ".im");
      ComplexMatrix fr = ComplexMatrix::Zero(n, n);
      fr(i, j) = fr(j, i) = 1.0;
      ComplexMatrix fi = ComplexMatrix::Zero(n, n);
      fi(i, j) = cplx(0.0, 1.0);
      fi(j, i) = cplx(0.0, -1.0);
      e.terms.emplace_back(re, std::move(fr));
      e.terms.emplace_back(im, std::move(fi));
    }
  }
  return e;
}

}  // namespace irisac::conic
