#include "irisac/numerics.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace irisac {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(what) + ": matrix is not square");
  }
}

}  // namespace

bool is_hermitian(const ComplexMatrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  const double scale = m.cwiseAbs().maxCoeff();
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  return dev <= rel_tol * scale;
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m, double rel_tol) {
  require_square(m, "HermitianMatrix");
  if (!is_hermitian(m, rel_tol)) {
    throw std::invalid_argument("HermitianMatrix: input is not Hermitian");
  }
  m_ = hermitian_part(m);
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index n) {
  return HermitianMatrix(ComplexMatrix::Zero(n, n));
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index n) {
  return HermitianMatrix(ComplexMatrix::Identity(n, n));
}

RealMatrix hermitian_real_embedding(const ComplexMatrix& x) {
  require_square(x, "hermitian_real_embedding");
  if (!is_hermitian(x)) {
    throw std::invalid_argument("hermitian_real_embedding: input is not Hermitian");
  }
  const Eigen::Index n = x.rows();
  RealMatrix y(2 * n, 2 * n);
  y.topLeftCorner(n, n) = x.real();
  y.bottomRightCorner(n, n) = x.real();
  y.topRightCorner(n, n) = -x.imag();
  y.bottomLeftCorner(n, n) = x.imag();
  return y;
}

ComplexMatrix hermitian_from_embedding(const RealMatrix& y) {
  if (y.rows() != y.cols() || y.rows() % 2 != 0) {
    throw DimensionError("hermitian_from_embedding: expected an even square matrix");
  }
  const Eigen::Index n = y.rows() / 2;
  ComplexMatrix x(n, n);
  x.real() = 0.5 * (y.topLeftCorner(n, n) + y.bottomRightCorner(n, n));
  x.imag() = 0.5 * (y.bottomLeftCorner(n, n) - y.topRightCorner(n, n));
  return x;
}

double min_eigenvalue(const RealMatrix& symmetric) {
  if (symmetric.rows() != symmetric.cols()) {
    throw DimensionError("min_eigenvalue: matrix is not square");
  }
  if (symmetric.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(symmetric, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double min_eigenvalue(const ComplexMatrix& hermitian) {
  require_square(hermitian, "min_eigenvalue");
  if (hermitian.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

ComplexMatrix kron_trace_reduce(const ComplexMatrix& b, const ComplexMatrix& c) {
  require_square(b, "kron_trace_reduce");
  require_square(c, "kron_trace_reduce");
  if (b.rows() != c.rows()) {
    throw DimensionError("kron_trace_reduce: B and C differ in size");
  }
  return b.cwiseProduct(c.transpose());
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector vec(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix psd_sqrt(const ComplexMatrix& hermitian) {
  require_square(hermitian, "psd_sqrt");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(hermitian));
  const RealVector d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

RealMatrix psd_sqrt(const RealMatrix& symmetric) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(0.5 * (symmetric + symmetric.transpose()));
  const RealVector d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  return 0.5 * (m + m.adjoint());
}

Eigen::Index svec_size(Eigen::Index n) { return n * (n + 1) / 2; }

RealVector svec(const RealMatrix& x) {
  const Eigen::Index n = x.rows();
  RealVector v(svec_size(n));
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    v(k++) = x(j, j);
    for (Eigen::Index i = j + 1; i < n; ++i) v(k++) = M_SQRT2 * x(i, j);
  }
  return v;
}

RealMatrix smat(const Eigen::Ref<const RealVector>& v, Eigen::Index n) {
  if (v.size() != svec_size(n)) throw DimensionError("smat: length mismatch");
  RealMatrix x(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    x(j, j) = v(k++);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      x(i, j) = x(j, i) = v(k++) * M_SQRT1_2;
    }
  }
  return x;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

cplx complex_gaussian(Rng& rng) {
  std::normal_distribution<double> nd(0.0, M_SQRT1_2);
  const double re = nd(rng);
  const double im = nd(rng);
  return {re, im};
}

ComplexVector complex_gaussian_vector(Eigen::Index n, Rng& rng) {
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_gaussian(rng);
  return v;
}

ComplexMatrix complex_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  ComplexMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = complex_gaussian(rng);
  }
  return m;
}

ComplexVector unit_phases(const ComplexVector& z) {
  ComplexVector out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    out(i) = std::abs(z(i)) > 0.0 ? z(i) / std::abs(z(i)) : cplx(1.0, 0.0);
  }
  return out;
}

}  // namespace irisac
