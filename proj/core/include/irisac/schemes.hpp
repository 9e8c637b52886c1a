#pragma once

#include "irisac/isac.hpp"

#include <string>

namespace irisac {

enum class SchemeId { ao, transmit_bf_only, reflective_bf_only, passive_irs, zf_bf };

// Stable tokens: ao | tx-only | rf-only | passive | zf
std::string to_string(SchemeId id);
SchemeId scheme_from_string(const std::string& s);
bool scheme_supports(SchemeId id, Mode mode);

// Unit columns of H (H^H H)^{-1}, H = [h_bar_1 .. h_bar_K]. Throws
// InfeasibleError when H lacks full column rank.
std::vector<ComplexVector> zf_directions(const ChannelSet& ch, const ReflectDesign& rf);

// Runs one scheme. The reflection draw is shared by ao, tx-only and zf for a
// given seed. Throws InfeasibleError or NumericalError on failure and
// std::invalid_argument for a scheme that does not support the mode.
AoReport run_scheme(SchemeId id, const ChannelSet& ch, const SystemConfig& config, Mode mode, std::uint64_t seed,
                    const AoOptions& opts = {});

// Transmit-only design with all amplitudes fixed at `amplitude` and seeded
// random phases (no rescaling).
AoReport run_fixed_amplitude(const ChannelSet& ch, const SystemConfig& config, Mode mode, double amplitude,
                             std::uint64_t seed, const AoOptions& opts = {});

// Configuration a scheme is evaluated against (passive drops the IRS noise).
SystemConfig scheme_config(SchemeId id, const SystemConfig& config);
ConstraintSet scheme_constraints(SchemeId id, Mode mode);

}  // namespace irisac
