#include "irisac/conic/epigraph.hpp"

namespace irisac::conic {

TraceInverseEpigraph build_trace_inverse_epigraph(SdpProblem& problem, const AffineMatrix& c,
                                                  const ComplexMatrix& weight, const std::string& name) {
  if (c.rows() != c.cols() || weight.rows() != c.rows()) {
    throw DimensionError("build_trace_inverse_epigraph: weight and map sizes differ");
  }
  const int k = static_cast<int>(weight.cols());
  TraceInverseEpigraph ep;
  ep.u = problem.add_hermitian(k, name + ".U", false);
  const AffineMatrix u = ep.u.expr();
  problem.add_lmi(hermitian_block(u, AffineMatrix(weight.adjoint()), c), name);
  ep.trace = trace_product(ComplexMatrix::Identity(k, k), u);
  return ep;
}

}  // namespace irisac::conic
