// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace affectlab {

// Decoded mono waveform. Samples always live in [-1, 1].
struct AudioClip {
  std::vector<double> samples;
  int sample_rate_hz = 0;
  int channels_seen = 1;
  std::string source_path;
  // Float inputs outside [-1, 1] are clamped on load; this counts them.
  int clipped_samples = 0;

  double duration_seconds() const {
    return sample_rate_hz > 0
               ? static_cast<double>(samples.size()) / sample_rate_hz
               : 0.0;
  }
};

// Reads RIFF/WAVE, little-endian, format codes 1 (PCM16) and 3 (float32).
// Unknown chunks are skipped. Multi-channel audio is averaged to mono;
// integer PCM is scaled by 1/32768.
AudioClip load_wav(const std::string& path);

// Mono PCM16 writer used by the synthetic corpus generator and tests.
void write_wav_pcm16(const std::string& path,
                     const std::vector<double>& samples, int sample_rate_hz);

// Sample-rate conversion with a Kaiser-windowed sinc kernel, 64 taps per
// phase, cutoff at 0.9 of the lower Nyquist. Equal rates return the input
// unchanged, so repeating the call at a fixed rate is exact.
AudioClip resample(const AudioClip& clip, int target_rate_hz);

}  // namespace affectlab
