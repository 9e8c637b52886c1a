#include "irisac/numerics.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

namespace irisac {
namespace {

TEST(Numerics, RealEmbeddingDoublesSpectrum) {
  Rng rng(3);
  const ComplexMatrix h = testing::random_pd(4, rng) - 0.2 * ComplexMatrix::Identity(4, 4);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> ec(h);
  Eigen::SelfAdjointEigenSolver<RealMatrix> er(hermitian_real_embedding(h));
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(er.eigenvalues()(2 * i), ec.eigenvalues()(i), 1e-12);
    EXPECT_NEAR(er.eigenvalues()(2 * i + 1), ec.eigenvalues()(i), 1e-12);
  }
  EXPECT_LT((hermitian_from_embedding(hermitian_real_embedding(h)) - h).norm(), 1e-14);
}

TEST(Numerics, SvecPreservesInnerProduct) {
  Rng rng(5);
  const RealMatrix a = RealMatrix::Random(5, 5), b = RealMatrix::Random(5, 5);
  const RealMatrix x = a + a.transpose(), y = b + b.transpose();
  EXPECT_EQ(svec_size(5), 15);
  EXPECT_NEAR(svec(x).dot(svec(y)), (x * y).trace(), 1e-12);
  EXPECT_LT((smat(svec(x), 5) - x).norm(), 1e-13);
}

TEST(Numerics, KronTraceReduce) {
  Rng rng(7);
  const int n = 4;
  const ComplexMatrix b = complex_gaussian_matrix(n, n, rng), c = complex_gaussian_matrix(n, n, rng);
  const ComplexVector phi = unit_phases(complex_gaussian_vector(n, rng));
  const ComplexMatrix ph = phi.asDiagonal();
  const cplx direct = (ph.adjoint() * b * ph * c).trace();
  const cplx reduced = phi.dot(kron_trace_reduce(b, c) * phi);
  EXPECT_NEAR(std::abs(direct - reduced), 0.0, 1e-12);
  // Lifted form: vec(Phi)^H (C^T kron B) vec(Phi)
  const ComplexVector v = vec(ph);
  EXPECT_NEAR(std::abs(v.dot(kron(c.transpose(), b) * v) - direct), 0.0, 1e-11);
}

TEST(Numerics, PsdSqrtClipsNegativeEigenvalues) {
  Rng rng(9);
  const ComplexMatrix r = testing::random_pd(3, rng);
  const ComplexMatrix s = psd_sqrt(r);
  EXPECT_LT((s * s - r).norm(), 1e-13);
  EXPECT_TRUE(is_hermitian(s));
  const RealMatrix neg = -RealMatrix::Identity(2, 2);
  EXPECT_LT(psd_sqrt(neg).norm(), 1e-15);
}

TEST(Numerics, HermitianMatrixRejectsAsymmetry) {
  ComplexMatrix m(2, 2);
  m << 1.0, cplx(0.0, 1.0), cplx(0.0, 1.0), 1.0;
  EXPECT_THROW(HermitianMatrix{m}, std::invalid_argument);
  EXPECT_DOUBLE_EQ(HermitianMatrix::identity(3).trace(), 3.0);
}

TEST(Numerics, UnitConversions) {
  EXPECT_NEAR(db_to_linear(10.0), 10.0, 1e-12);
  EXPECT_NEAR(linear_to_db(100.0), 20.0, 1e-12);
  EXPECT_NEAR(dbm_to_watts(30.0), 1.0, 1e-12);
}

TEST(Numerics, UnitPhasesMapZeroToOne) {
  ComplexVector z(3);
  z << cplx(0.0, 0.0), cplx(3.0, 4.0), cplx(-2.0, 0.0);
  const ComplexVector u = unit_phases(z);
  EXPECT_EQ(u(0), cplx(1.0, 0.0));
  EXPECT_NEAR(std::abs(u(1) - cplx(0.6, 0.8)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u(2) + 1.0), 0.0, 1e-15);
}

TEST(Numerics, ComplexGaussianHasUnitVariance) {
  Rng rng(11);
  double acc = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) acc += std::norm(complex_gaussian(rng));
  EXPECT_NEAR(acc / n, 1.0, 0.03);
}

}  // namespace
}  // namespace irisac
