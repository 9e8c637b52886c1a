#pragma once

#include "irisac/scenario.hpp"

#include <cmath>
#include <cstdint>

namespace irisac::testing {

inline Scenario desk(Mode mode, int m = 4, int n = 4) {
  Scenario s = desk_scenario(mode);
  s.config.M = m;
  s.config.N = n;
  return s;
}

inline ChannelSet channels(const Scenario& s, std::uint64_t seed) {
  return generate_channels(s.config, s.geometry, s.model, seed);
}

// Random Hermitian positive definite matrix with unit trace.
inline ComplexMatrix random_pd(int n, Rng& rng) {
  const ComplexMatrix a = complex_gaussian_matrix(n, n, rng);
  ComplexMatrix r = a * a.adjoint() + 0.1 * ComplexMatrix::Identity(n, n);
  return r / r.trace().real();
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace irisac::testing
