#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "eai/motion.hpp"

namespace eai {

enum class SynthKind { circle, wave, grasp, noise };

std::optional<SynthKind> parse_synth_kind(const std::string& name);
const char* synth_kind_name(SynthKind kind);

// Deterministic whole-body motion driven by forward kinematics over the
// default skeleton, so bone lengths are constant by construction.
//   circle  root walks a horizontal circle with counter-swinging limbs
//   wave    right arm raised and waving, fingers flickering
//   grasp   both arms reach forward while all fingers curl towards the palm
//   noise   smooth random rotations on every joint (seed drives everything)
WholeBodySequence synth_sequence(SynthKind kind, std::size_t frames, std::uint64_t seed, double fps = 30.0);

}  // namespace eai
