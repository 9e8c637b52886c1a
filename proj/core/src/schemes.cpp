#include "irisac/schemes.hpp"

#include <Eigen/LU>

#include <stdexcept>

namespace irisac {

namespace {

// Mirrors the re-draw loop of ao_isac so that every scheme sharing the
// reflection initialization sees the same draws.
template <class Run>
AoReport with_redraws(const ChannelSet& ch, const SystemConfig& config, Rng& rng, std::optional<double> amplitude,
                      Run run) {
  std::string last;
  for (int attempt = 0; attempt < 5; ++attempt) {
    const ReflectDesign rf = initial_reflect(ch, config, rng, amplitude);
    try {
      return run(rf);
    } catch (const InfeasibleError& e) {
      last = e.what();
    }
  }
  throw InfeasibleError("infeasible for 5 reflection draws; last: " + last);
}

AoReport transmit_only_isac(const ChannelSet& ch, const SystemConfig& config, const ReflectDesign& rf, Rng& rng,
                            const AoOptions& opts, bool irs_constraint) {
  AoOptions o = opts;
  o.max_outer = 0;
  IsacAoVariant v;
  v.optimize_phase = false;
  v.optimize_gain = false;
  v.irs_constraint = irs_constraint;
  AoReport rep = run_isac_ao(ch, config, rf, rng, o, v);
  rep.iterations = 1;
  rep.reason = "converged";
  return rep;
}

}  // namespace

std::string to_string(SchemeId id) {
  switch (id) {
    case SchemeId::ao: return "ao";
    case SchemeId::transmit_bf_only: return "tx-only";
    case SchemeId::reflective_bf_only: return "rf-only";
    case SchemeId::passive_irs: return "passive";
    case SchemeId::zf_bf: return "zf";
  }
  return "unknown";
}

SchemeId scheme_from_string(const std::string& s) {
  for (SchemeId id : {SchemeId::ao, SchemeId::transmit_bf_only, SchemeId::reflective_bf_only, SchemeId::passive_irs,
                      SchemeId::zf_bf}) {
    if (to_string(id) == s) return id;
  }
  throw std::invalid_argument("unknown scheme '" + s + "' (expected ao, tx-only, rf-only, passive or zf)");
}

bool scheme_supports(SchemeId id, Mode mode) {
  if (id == SchemeId::reflective_bf_only) return mode == Mode::sensing;
  if (id == SchemeId::zf_bf) return mode == Mode::isac;
  return true;
}

SystemConfig scheme_config(SchemeId id, const SystemConfig& config) {
  SystemConfig c = config;
  if (id == SchemeId::passive_irs) c.sigma_r2 = 0.0;
  return c;
}

ConstraintSet scheme_constraints(SchemeId id, Mode mode) {
  ConstraintSet s;
  s.sinr = mode == Mode::isac;
  s.irs_power = id != SchemeId::passive_irs;
  return s;
}

std::vector<ComplexVector> zf_directions(const ChannelSet& ch, const ReflectDesign& rf) {
  const int users = static_cast<int>(ch.h.size());
  const int m = static_cast<int>(ch.G.cols());
  if (users < 1 || users > m) throw InfeasibleError("zf_directions: need 1 <= K <= M users");
  ComplexMatrix h(m, users);
  for (int k = 0; k < users; ++k) h.col(k) = effective_channel(ch, rf, k);
  const ComplexMatrix gram = h.adjoint() * h;
  Eigen::FullPivLU<ComplexMatrix> lu(gram);
  lu.setThreshold(1e-10);
  if (lu.rank() < users) throw InfeasibleError("zf_directions: effective channels are rank deficient");
  const ComplexMatrix w = h * lu.inverse();
  std::vector<ComplexVector> out;
  for (int k = 0; k < users; ++k) out.push_back(w.col(k) / w.col(k).norm());
  return out;
}

AoReport run_scheme(SchemeId id, const ChannelSet& ch, const SystemConfig& config, Mode mode, std::uint64_t seed,
                    const AoOptions& opts) {
  if (!scheme_supports(id, mode)) {
    throw std::invalid_argument("scheme " + to_string(id) + " does not support " + to_string(mode) + " mode");
  }
  config.validate(mode);
  Rng rng(seed);
  if (mode == Mode::sensing) {
    switch (id) {
      case SchemeId::ao: return ao_sensing(ch, config, seed, opts);
      case SchemeId::transmit_bf_only:
        return sensing_transmit_only(ch, config, initial_reflect(ch, config, rng), opts);
      case SchemeId::reflective_bf_only: return sensing_reflect_only(ch, config, seed, opts);
      case SchemeId::passive_irs: {
        const SystemConfig c = scheme_config(id, config);
        return sensing_transmit_only(ch, c, initial_reflect(ch, c, rng, 1.0), opts, false);
      }
      case SchemeId::zf_bf: break;
    }
    throw std::invalid_argument("unsupported scheme");
  }
  switch (id) {
    case SchemeId::ao: return ao_isac(ch, config, seed, opts);
    case SchemeId::transmit_bf_only:
      return with_redraws(ch, config, rng, std::nullopt, [&](const ReflectDesign& rf) {
        return transmit_only_isac(ch, config, rf, rng, opts, true);
      });
    case SchemeId::passive_irs: {
      const SystemConfig c = scheme_config(id, config);
      IsacAoVariant v;
      v.optimize_gain = false;
      v.irs_constraint = false;
      return with_redraws(ch, c, rng, 1.0, [&](const ReflectDesign& rf) { return run_isac_ao(ch, c, rf, rng, opts, v); });
    }
    case SchemeId::zf_bf: {
      IsacAoVariant v;
      v.directions = [&ch](const ReflectDesign& rf) { return zf_directions(ch, rf); };
      return with_redraws(ch, config, rng, std::nullopt,
                          [&](const ReflectDesign& rf) { return run_isac_ao(ch, config, rf, rng, opts, v); });
    }
    case SchemeId::reflective_bf_only: break;
  }
  throw std::invalid_argument("unsupported scheme");
}

AoReport run_fixed_amplitude(const ChannelSet& ch, const SystemConfig& config, Mode mode, double amplitude,
                             std::uint64_t seed, const AoOptions& opts) {
  if (!(amplitude > 0.0)) throw std::invalid_argument("run_fixed_amplitude: amplitude must be positive");
  SystemConfig c = config;
  c.a_max = std::max(c.a_max, amplitude);
  c.validate(mode);
  Rng rng(seed);
  const int n = static_cast<int>(ch.G.rows());
  const ReflectDesign rf = ReflectDesign::uniform(n, amplitude, unit_phases(complex_gaussian_vector(n, rng)));
  if (mode == Mode::sensing) return sensing_transmit_only(ch, c, rf, opts);
  return transmit_only_isac(ch, c, rf, rng, opts, true);
}

}  // namespace irisac
