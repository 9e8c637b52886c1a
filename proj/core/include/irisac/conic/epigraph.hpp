#pragma once

#include "irisac/conic/sdp_problem.hpp"

namespace irisac::conic {

struct TraceInverseEpigraph {
  HermVar u;
  LinExpr trace;  // tr(U) >= tr(W^H C^{-1} W) at any feasible point
};

// Adds U and the LMI [[U, W^H], [W, C]] >= 0 for an affine Hermitian C.
TraceInverseEpigraph build_trace_inverse_epigraph(SdpProblem& problem, const AffineMatrix& c,
                                                  const ComplexMatrix& weight,
                                                  const std::string& name = "epigraph");

}  // namespace irisac::conic
