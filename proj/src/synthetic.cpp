// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "affectlab/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

#include "affectlab/audio_io.hpp"
#include "affectlab/common.hpp"
#include "affectlab/rng.hpp"

namespace fs = std::filesystem;

namespace affectlab {

namespace {

constexpr double kTau = 6.283185307179586;
const char* kClasses[4] = {"anger", "happy", "neutral", "sad"};

// Pitch classes A, D, F#, B as A3/D4/F#4/B4 fundamentals.
const double kTonePitch[4] = {220.0, 293.66, 369.99, 493.88};

// Segment frequency ratios per class: rise, up-down, flat, fall.
const double kContour[4][3] = {
    {1.0, 1.26, 1.59},
    {1.0, 1.59, 1.0},
    {1.26, 1.26, 1.26},
    {1.59, 1.26, 1.0},
};

void add_tone(std::vector<double>& y, size_t start, size_t len, double freq,
              double amp, const std::vector<double>& harmonics, double phase,
              int sr) {
  const size_t fade = std::min<size_t>(len / 8, 80);  // 5 ms declick
  for (size_t i = 0; i < len; ++i) {
    double env = 1.0;
    if (i < fade) env = static_cast<double>(i) / fade;
    if (len - 1 - i < fade) env = std::min(env, static_cast<double>(len - 1 - i) / fade);
    double v = 0.0;
    for (size_t h = 0; h < harmonics.size(); ++h) {
      v += harmonics[h] * std::sin(kTau * freq * (h + 1) * (start + i) / sr + phase);
    }
    y[start + i] += amp * env * v;
  }
}

}  // namespace

void generate_synthetic_corpus(const std::string& root, const SynthSpec& spec) {
  if (spec.clips_per_class <= 0) {
    fail(Err::ConfigInvalid, "clips_per_class must be positive");
  }
  if (spec.variant != 'a' && spec.variant != 'b') {
    fail(Err::ConfigInvalid, "variant must be 'a' or 'b'");
  }
  const int sr = spec.sample_rate_hz;
  const bool variant_b = spec.variant == 'b';

  const std::vector<double> harmonics =
      variant_b ? std::vector<double>{1.0, 0.3, 0.15} : std::vector<double>{1.0, 0.5};
  const double noise_level = variant_b ? 0.06 : 0.02;
  const double base_lo = variant_b ? 200.0 : 180.0;
  const double base_hi = variant_b ? 320.0 : 280.0;

  for (int cls = 0; cls < 4; ++cls) {
    const fs::path dir = fs::path(root) / kClasses[cls];
    fs::create_directories(dir);
    for (int i = 0; i < spec.clips_per_class; ++i) {
      // Per-clip stream keyed by class and index, independent of write order.
      Xoshiro256 rng(mix_seed(spec.seed, static_cast<uint64_t>(cls) * 100000 + i));
      const double amp = rng.uniform(0.3, 0.7);
      const double phase = rng.uniform(0.0, kTau);

      std::vector<double> y;
      if (spec.profile == SynthProfile::tones) {
        const size_t len = static_cast<size_t>(sr * rng.uniform(0.45, 0.6));
        y.assign(len, 0.0);
        const double octave = rng.bounded(2) ? 2.0 : 1.0;
        add_tone(y, 0, len, kTonePitch[cls] * octave, amp, harmonics, phase, sr);
      } else {
        const size_t seg = static_cast<size_t>(sr * 0.15);
        y.assign(3 * seg, 0.0);
        const double base = rng.uniform(base_lo, base_hi);
        for (int s = 0; s < 3; ++s) {
          add_tone(y, static_cast<size_t>(s) * seg, seg, base * kContour[cls][s],
                   amp, harmonics, phase, sr);
        }
      }
      for (double& v : y) v += noise_level * rng.normal();

      double peak = 0.0;
      for (double v : y) peak = std::max(peak, std::abs(v));
      if (peak > 0.95) {
        for (double& v : y) v *= 0.95 / peak;
      }

      char name[64];
      std::snprintf(name, sizeof(name), "%s_%04d_spk%d.wav", kClasses[cls], i,
                    i % 4);
      write_wav_pcm16((dir / name).string(), y, sr);
    }
  }
}

}  // namespace affectlab
