// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

namespace affectlab {

// Two fully seeded signal families over the four affect classes:
//
//   tones:    each class owns a fixed pitch class; clips vary octave, level,
//             phase, and noise. Linearly separable from chroma alone, used
//             by the overfit fixtures.
//   contours: each class is a three-segment melodic contour (rise, fall,
//             flat, up-down) over a random base frequency, so the class is
//             carried by relative movement rather than absolute pitch.
//             Variants 'a' and 'b' differ in timbre, noise level, and base
//             frequency range; they play the roles of the high-resource and
//             low-resource domains in the transfer fixtures.
enum class SynthProfile { tones, contours };

struct SynthSpec {
  SynthProfile profile = SynthProfile::tones;
  char variant = 'a';
  int clips_per_class = 10;
  uint64_t seed = 1;
  int sample_rate_hz = 16000;
};

// Writes root/<affect>/<affect>_<index>_spk<k>.wav for the classes anger,
// happy, neutral, sad.
void generate_synthetic_corpus(const std::string& root, const SynthSpec& spec);

}  // namespace affectlab
