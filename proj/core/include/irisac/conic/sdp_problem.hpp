#pragma once

#include "irisac/conic/expression.hpp"
#include "irisac/conic/solver.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace irisac::conic {

// n x n Hermitian variable: n^2 real coordinates laid out as the diagonal,
// then real parts of the strict upper triangle, then imaginary parts.
struct HermVar {
  int offset = 0;
  int n = 0;
  AffineMatrix expr() const;
};

// n x n real symmetric variable: n(n+1)/2 coordinates (diagonal, then upper triangle).
struct SymVar {
  int offset = 0;
  int n = 0;
  AffineMatrix expr() const;
};

class SdpProblem;

struct SdpSolution {
  ConicSolution raw;
  double objective = 0.0;

  SolveStatus status() const { return raw.status; }
  bool ok() const { return raw.optimal() || raw.near_optimal; }
  double value(int index) const { return raw.x(index); }
  double value(const LinExpr& e) const { return evaluate(e, raw.x); }
  ComplexMatrix value(const HermVar& v) const;
  RealMatrix value(const SymVar& v) const;
  // Dual multiplier of the i-th scalar inequality.
  double inequality_dual(std::size_t i) const;
  double min_block_eigenvalue() const { return raw.min_eigenvalue_s; }
};

// LMI-based modeling layer. Complex LMIs are mapped to real PSD blocks of
// twice the size; LMIs whose data are all real stay real.
class SdpProblem {
 public:
  int add_scalar(const std::string& name);
  HermVar add_hermitian(int n, const std::string& name, bool psd = true);
  SymVar add_symmetric(int n, const std::string& name, bool psd = true);

  void minimize(const LinExpr& f);
  void maximize(const LinExpr& f);

  // lhs <= rhs; returns the inequality index.
  std::size_t add_leq(const LinExpr& lhs, const LinExpr& rhs, const std::string& name = {});
  void add_eq(const LinExpr& lhs, const LinExpr& rhs, const std::string& name = {});
  // expr >= 0 (Hermitian)
  void add_lmi(const AffineMatrix& expr, const std::string& name = {});

  int num_variables() const { return static_cast<int>(names_.size()); }
  std::size_t num_inequalities() const { return leq_.size(); }
  const std::string& inequality_name(std::size_t i) const { return leq_names_[i]; }

  ConicProgram compile() const;
  SdpSolution solve(const SolverOptions& opts = {}) const;
  void write_text(std::ostream& os) const;

 private:
  std::vector<std::string> names_;
  LinExpr objective_;
  double sense_ = 1.0;
  std::vector<LinExpr> leq_;
  std::vector<std::string> leq_names_;
  std::vector<LinExpr> eq_;
  std::vector<std::string> eq_names_;
  std::vector<AffineMatrix> lmi_;
  std::vector<std::string> lmi_names_;
};

// Hermitian matrix expression with unit diagonal whose off-diagonal entries
// are fresh scalar variables. No LMI is added.
AffineMatrix unit_diagonal_hermitian(SdpProblem& prob, int n, const std::string& name);

}  // namespace irisac::conic
