#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace irisac {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Rng = std::mt19937_64;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Complex matrix that is Hermitian up to a relative tolerance. Construction
// symmetrizes the stored value.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& m, double rel_tol = 1e-8);

  static HermitianMatrix zero(Eigen::Index n);
  static HermitianMatrix identity(Eigen::Index n);

  const ComplexMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  double trace() const { return m_.trace().real(); }

 private:
  ComplexMatrix m_;
};

bool is_hermitian(const ComplexMatrix& m, double rel_tol = 1e-8);

// [[Re X, -Im X], [Im X, Re X]]; preserves eigenvalues with multiplicity two.
RealMatrix hermitian_real_embedding(const ComplexMatrix& x);

// Inverse of the embedding: reads the top-left and bottom-left blocks.
ComplexMatrix hermitian_from_embedding(const RealMatrix& y);

double min_eigenvalue(const RealMatrix& symmetric);
double min_eigenvalue(const ComplexMatrix& hermitian);

// Returns M with M(i,j) = C(j,i) * B(i,j), so that for Phi = diag(phi)
// tr(Phi^H B Phi C) = phi^H M phi.
ComplexMatrix kron_trace_reduce(const ComplexMatrix& b, const ComplexMatrix& c);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector vec(const ComplexMatrix& m);

// Principal square root of a PSD Hermitian matrix (negative eigenvalues clipped).
ComplexMatrix psd_sqrt(const ComplexMatrix& hermitian);
RealMatrix psd_sqrt(const RealMatrix& symmetric);

ComplexMatrix hermitian_part(const ComplexMatrix& m);

// Symmetric-matrix vectorization with sqrt(2) scaling on off-diagonals so
// that <X, Y> = svec(X)^T svec(Y). Lower triangle, column major.
Eigen::Index svec_size(Eigen::Index n);
RealVector svec(const RealMatrix& x);
RealMatrix smat(const Eigen::Ref<const RealVector>& v, Eigen::Index n);

double db_to_linear(double db);
double linear_to_db(double lin);
double dbm_to_watts(double dbm);

// Circularly symmetric complex Gaussian with unit variance.
cplx complex_gaussian(Rng& rng);
ComplexVector complex_gaussian_vector(Eigen::Index n, Rng& rng);
ComplexMatrix complex_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng);

// exp(j * arg(z)) elementwise; zero entries map to 1.
ComplexVector unit_phases(const ComplexVector& z);

}  // namespace irisac
