#pragma once

#include "irisac/numerics.hpp"

#include <string>
#include <vector>

namespace irisac::conic {

// Cone K = R_+^nonneg x S_+^{psd[0]} x S_+^{psd[1]} x ...
// PSD blocks are stored as svec vectors in the row order given here.
struct ConeDims {
  int nonneg = 0;
  std::vector<int> psd;

  Eigen::Index rows() const;
  int degree() const;
};

// minimize c^T x  subject to  G x + s = h,  A x = b,  s in K.
struct ConicProgram {
  RealVector c;
  RealMatrix G;
  RealVector h;
  RealMatrix A;
  RealVector b;
  ConeDims dims;

  void validate() const;
};

enum class SolveStatus { optimal, primal_infeasible, dual_infeasible, max_iterations, numerical_error };

std::string to_string(SolveStatus s);

struct SolverOptions {
  double tol = 1e-8;
  int max_iterations = 200;
  bool equilibrate = true;
  int ruiz_passes = 12;
  double step_fraction = 0.99;
  bool verbose = false;
  // For programs whose primal has no strictly feasible point (zero-forced
  // diagonals). The dual optimum is then not attained and the dual residual
  // stagnates once tau collapses, so the fallback iterate is ranked and
  // accepted on primal residual and gap alone.
  bool unattained_dual = false;
  // Accuracy accepted when the iteration stalls: residuals and certificates
  // to this value, relative gap to half of it.
  double inaccurate_tol = 1e-4;
};

struct ConicSolution {
  SolveStatus status = SolveStatus::numerical_error;
  RealVector x, s, z, y;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  int iterations = 0;
  // Quantities measured on the equilibrated problem the iteration runs on.
  double scaled_primal_objective = 0.0;
  double scaled_dual_objective = 0.0;
  double scaled_gap = 0.0;
  // Relative residuals in the original units, as used for stopping.
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double min_eigenvalue_s = 0.0;
  double min_eigenvalue_z = 0.0;
  // Set when the iteration stopped early but residuals and gap are within
  // 1e3 * tol, or within inaccurate_tol (then inaccurate is set too).
  bool near_optimal = false;
  // The returned point or certificate meets only inaccurate_tol.
  bool inaccurate = false;

  bool optimal() const { return status == SolveStatus::optimal; }
};

ConicSolution solve_conic(const ConicProgram& prog, const SolverOptions& opts = {});

struct SolveRecord {
  SolveStatus status = SolveStatus::numerical_error;
  bool near_optimal = false;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double min_eigenvalue_s = 0.0;
  double min_eigenvalue_z = 0.0;
  int iterations = 0;
};

// Collects a record of every solve_conic call made on this thread while the
// recorder is alive. Recorders nest; the innermost one receives the records.
class SolveRecorder {
 public:
  SolveRecorder();
  ~SolveRecorder();
  SolveRecorder(const SolveRecorder&) = delete;
  SolveRecorder& operator=(const SolveRecorder&) = delete;

  const std::vector<SolveRecord>& records() const { return records_; }
  void add(const SolveRecord& r) { records_.push_back(r); }
  static SolveRecorder* active();

 private:
  std::vector<SolveRecord> records_;
  SolveRecorder* previous_ = nullptr;
};

}  // namespace irisac::conic
