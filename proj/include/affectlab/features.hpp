// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "affectlab/audio_io.hpp"

namespace affectlab {

// Every corpus is converted to this rate on ingest.
constexpr int kCanonicalRateHz = 16000;

enum class Window { hann, hamming };

struct FrameSpec {
  int frame_length_samples = 400;  // 25 ms at 16 kHz
  int hop_samples = 160;           // 10 ms
  Window window = Window::hann;
  int fft_size = 512;              // power of two >= frame_length

  void validate() const;
  uint64_t hash() const;
};

struct Spectrogram {
  int frames = 0;
  int bins = 0;  // fft_size/2 + 1
  int fft_size = 0;
  int sample_rate_hz = 0;
  std::vector<std::complex<double>> values;  // row-major frames x bins

  const std::complex<double>& at(int t, int k) const {
    return values[static_cast<size_t>(t) * bins + k];
  }
  double magnitude(int t, int k) const { return std::abs(at(t, k)); }
};

// Small row-major matrix used for per-block feature outputs.
struct Mat {
  int rows = 0, cols = 0;
  std::vector<double> v;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), v(static_cast<size_t>(r) * c, 0.0) {}
  double& at(int r, int c) { return v[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return v[static_cast<size_t>(r) * cols + c]; }
};

// Assembled frame-level features with a declared block layout. Values are
// float32-representable so the on-disk cache round-trips exactly.
struct FeatureSequence {
  int frames = 0;
  int dim = 0;
  std::vector<double> values;  // row-major frames x dim
  std::vector<std::pair<std::string, int>> layout;
  std::string clip_id;
  bool normalized = false;

  double at(int t, int d) const { return values[static_cast<size_t>(t) * dim + d]; }
};

enum class NormalizeMode { none, per_corpus_z };

struct FeatureOptions {
  bool with_deltas = true;
  NormalizeMode normalize = NormalizeMode::none;
};

// Frame t covers samples [t*hop, t*hop + frame_length). Clips shorter than
// one frame are zero-padded to a single frame.
Spectrogram stft(const AudioClip& clip, const FrameSpec& spec);

// Spectral energy folded onto the 12 pitch classes (C=0 .. B=11), reference
// A4 = 440 Hz. Each nonzero row is max-normalized to 1.
Mat chromagram(const Spectrogram& spec);

// 6-dimensional tonal centroids of L1-normalized chroma rows; zero rows map
// to zero.
Mat tonnetz(const Mat& chroma);

// Per-frame peak-to-valley log contrast over 6 octave bands from 200 Hz plus
// the residual top band; quantile fraction 0.2, magnitudes floored at 1e-10.
Mat spectral_contrast(const Spectrogram& spec);

// 26-filter mel bank over [0, Nyquist], log energies floored at 1e-10,
// orthonormal DCT-II, coefficients 0-12.
Mat mfcc(const Spectrogram& spec);

// Columns (f0_hz, log_energy). F0 from the autocorrelation peak over lags
// covering 50-400 Hz; 0 when the normalized peak is below 0.3.
Mat pitch_energy(const AudioClip& clip, const FrameSpec& spec);

// First-order regression deltas, window 2, edge frames replicated.
Mat deltas(const Mat& seq);

// Concatenates chroma(12), tonnetz(6), contrast(7), mfcc(13), pitch(1),
// energy(1) and, when requested, the mirrored delta blocks (D = 40 or 80).
// Corpus-level z-normalization is applied separately via FeatureNormalizer.
FeatureSequence assemble_features(const AudioClip& clip, const FrameSpec& spec,
                                  const FeatureOptions& options);

// Per-dimension mean/std over training-partition frames, std floored at
// 1e-8. Fit on the training split only, then applied everywhere.
struct FeatureNormalizer {
  std::vector<double> mean, stdev;

  static FeatureNormalizer fit(const std::vector<const FeatureSequence*>& train);
  void apply(FeatureSequence& seq) const;
};

uint64_t feature_config_hash(const FrameSpec& spec, const FeatureOptions& options);

// Binary per-clip cache. Stale or unreadable entries are treated as absent
// so extraction simply reruns.
void save_feature_cache(const std::string& path, const FeatureSequence& seq,
                        uint64_t spec_hash);
std::optional<FeatureSequence> load_feature_cache(const std::string& path,
                                                  uint64_t expected_spec_hash);

// Load -> resample to the canonical rate -> assemble, with optional caching
// under cache_dir.
FeatureSequence extract_from_file(const std::string& audio_path,
                                  const FrameSpec& spec,
                                  const FeatureOptions& options,
                                  const std::string& cache_dir = "");

// Batch extraction, parallel across files. threads <= 0 uses all cores.
std::vector<FeatureSequence> extract_batch(const std::vector<std::string>& paths,
                                           const FrameSpec& spec,
                                           const FeatureOptions& options,
                                           const std::string& cache_dir = "",
                                           int threads = 0);

}  // namespace affectlab
