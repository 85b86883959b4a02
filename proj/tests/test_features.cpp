// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "affectlab/features.hpp"

#include <cmath>
#include <doctest.h>
#include <vector>

#include "affectlab/common.hpp"
#include "affectlab/reference.hpp"
#include "affectlab/rng.hpp"
#include "test_util.hpp"

using namespace affectlab;
using affectlab::test::TempDir;

namespace {

AudioClip clip_of(std::vector<double> samples, int rate = 16000) {
  AudioClip c;
  c.samples = std::move(samples);
  c.sample_rate_hz = rate;
  c.source_path = "mem";
  return c;
}

AudioClip sine_clip(double freq, double seconds, int rate = 16000,
                    double amp = 0.5) {
  std::vector<double> s(static_cast<size_t>(rate * seconds));
  for (size_t i = 0; i < s.size(); ++i) {
    s[i] = amp * std::sin(2.0 * M_PI * freq * i / rate);
  }
  return clip_of(std::move(s), rate);
}

AudioClip random_clip(int n, uint64_t seed, int rate = 16000) {
  Xoshiro256 rng(seed);
  std::vector<double> s(n);
  for (double& x : s) x = rng.uniform(-0.9, 0.9);
  return clip_of(std::move(s), rate);
}

// Magnitude-only spectrogram for exercising the band/filter math directly.
Spectrogram synthetic_spectrum(int frames, int bins, double value) {
  Spectrogram sg;
  sg.frames = frames;
  sg.bins = bins;
  sg.fft_size = (bins - 1) * 2;
  sg.sample_rate_hz = 16000;
  sg.values.assign(static_cast<size_t>(frames) * bins, {value, 0.0});
  return sg;
}

}  // namespace

TEST_CASE("stft of an all-zero clip is all zeros") {
  const FrameSpec spec;
  const Spectrogram sg = stft(clip_of(std::vector<double>(1600, 0.0)), spec);
  CHECK(sg.frames == 1 + (1600 - 400) / 160);
  CHECK(sg.bins == 257);
  for (const auto& v : sg.values) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("stft puts a 1 kHz tone into bin 32") {
  const FrameSpec spec;
  const Spectrogram sg = stft(sine_clip(1000.0, 0.2), spec);
  for (int t = 0; t < sg.frames; ++t) {
    int best = 0;
    for (int k = 1; k < sg.bins; ++k) {
      if (sg.magnitude(t, k) > sg.magnitude(t, best)) best = k;
    }
    CHECK(best == 32);  // 1000 / (16000/512)
  }
}

TEST_CASE("stft frames match the direct DFT oracle") {
  const FrameSpec spec;
  const AudioClip clip = random_clip(1024, 5);
  const Spectrogram sg = stft(clip, spec);

  std::vector<double> win(spec.frame_length_samples);
  for (int i = 0; i < spec.frame_length_samples; ++i) {
    win[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / spec.frame_length_samples);
  }
  for (int t = 0; t < sg.frames; ++t) {
    std::vector<double> frame(spec.fft_size, 0.0);
    for (int i = 0; i < spec.frame_length_samples; ++i) {
      const size_t k = static_cast<size_t>(t) * spec.hop_samples + i;
      if (k < clip.samples.size()) frame[i] = clip.samples[k] * win[i];
    }
    const auto oracle = ref::dft(frame);
    for (int k = 0; k < sg.bins; ++k) {
      CHECK(std::abs(sg.at(t, k) - oracle[k]) < 1e-6);
    }
  }
}

TEST_CASE("stft zero-pads clips shorter than one frame") {
  const FrameSpec spec;
  const Spectrogram sg = stft(clip_of(std::vector<double>(37, 0.25)), spec);
  CHECK(sg.frames == 1);
}

TEST_CASE("stft rejects an empty clip and a bad frame spec") {
  FrameSpec spec;
  CHECK_THROWS_AS(stft(clip_of({}), spec), Error);
  spec.fft_size = 300;  // not a power of two
  CHECK_THROWS_AS(stft(sine_clip(100, 0.1), spec), Error);
}

TEST_CASE("chromagram maps silence to zero rows") {
  const Spectrogram sg = stft(clip_of(std::vector<double>(800, 0.0)), FrameSpec{});
  const Mat ch = chromagram(sg);
  for (double v : ch.v) CHECK(v == 0.0);
}

TEST_CASE("chromagram folds 440 Hz and 880 Hz onto pitch class A") {
  for (double freq : {440.0, 880.0}) {
    const Spectrogram sg = stft(sine_clip(freq, 0.3), FrameSpec{});
    const Mat ch = chromagram(sg);
    for (int t = 0; t < ch.rows; ++t) {
      int best = 0;
      for (int c = 1; c < 12; ++c) {
        if (ch.at(t, c) > ch.at(t, best)) best = c;
      }
      CHECK(best == 9);  // A
      CHECK(ch.at(t, 9) == doctest::Approx(1.0));  // max-normalized
    }
  }
}

TEST_CASE("tonnetz closed-form cases") {
  Mat chroma(3, 12);
  // Row 0: uniform -> all six centroids vanish.
  for (int c = 0; c < 12; ++c) chroma.at(0, c) = 1.0;
  // Row 1: one-hot at class 0 -> the class-0 basis column.
  chroma.at(1, 0) = 1.0;
  // Row 2: zero row stays zero.
  const Mat tz = tonnetz(chroma);
  for (int d = 0; d < 6; ++d) CHECK(std::abs(tz.at(0, d)) < 1e-12);
  const double expected1[6] = {0.0, 1.0, 0.0, 1.0, 0.0, 0.5};
  for (int d = 0; d < 6; ++d) {
    CHECK(tz.at(1, d) == doctest::Approx(expected1[d]).epsilon(1e-12));
  }
  for (int d = 0; d < 6; ++d) CHECK(tz.at(2, d) == 0.0);
}

TEST_CASE("tonnetz one-hot rows match the basis oracle") {
  Mat chroma(12, 12);
  for (int p = 0; p < 12; ++p) chroma.at(p, p) = 0.7;  // scale cancels in L1 norm
  const Mat tz = tonnetz(chroma);
  for (int p = 0; p < 12; ++p) {
    const auto basis = ref::tonnetz_basis(p);
    for (int d = 0; d < 6; ++d) {
      CHECK(tz.at(p, d) == doctest::Approx(basis[d]).epsilon(1e-12));
    }
  }
}

TEST_CASE("tonnetz rejects negative chroma") {
  Mat chroma(1, 12);
  chroma.at(0, 3) = -0.1;
  CHECK_THROWS_AS(tonnetz(chroma), Error);
}

TEST_CASE("tonnetz row norm stays within the radius bound") {
  Xoshiro256 rng(3);
  Mat chroma(50, 12);
  for (double& v : chroma.v) v = rng.uniform(0.0, 1.0);
  const Mat tz = tonnetz(chroma);
  for (int t = 0; t < tz.rows; ++t) {
    double sq = 0.0;
    for (int d = 0; d < 6; ++d) sq += tz.at(t, d) * tz.at(t, d);
    CHECK(std::sqrt(sq) <= 5.0);
  }
}

TEST_CASE("spectral contrast is zero for flat and for silent spectra") {
  for (double value : {0.5, 0.0}) {
    const Spectrogram sg = synthetic_spectrum(4, 257, value);
    const Mat sc = spectral_contrast(sg);
    CHECK(sc.cols == 7);
    for (double v : sc.v) CHECK(std::abs(v) < 1e-12);
  }
}

TEST_CASE("spectral contrast peaks in the band holding a strong tone") {
  // Octave bands start at 200 Hz; put a narrow peak mid-band over a floor.
  const double centers[6] = {300, 600, 1200, 2400, 4800, 7000};
  for (int band = 0; band < 6; ++band) {
    Spectrogram sg = synthetic_spectrum(1, 257, 1e-3);
    const int k = static_cast<int>(centers[band] * sg.fft_size / sg.sample_rate_hz);
    sg.values[static_cast<size_t>(k)] = {1.0, 0.0};
    const Mat sc = spectral_contrast(sg);
    for (int b = 0; b < 7; ++b) {
      if (b != band) CHECK(sc.at(0, band) > sc.at(0, b));
    }
  }
}

TEST_CASE("mfcc of silence gives identical constant rows") {
  const Mat mf = mfcc(stft(clip_of(std::vector<double>(800, 0.0)), FrameSpec{}));
  CHECK(mf.cols == 13);
  REQUIRE(mf.rows >= 2);
  for (int t = 1; t < mf.rows; ++t) {
    for (int c = 0; c < 13; ++c) {
      CHECK(mf.at(t, c) == mf.at(0, c));
    }
  }
  // Constant log-floor energies survive the DCT only in coefficient 0.
  CHECK(std::abs(mf.at(0, 0)) > 1.0);
  for (int c = 1; c < 13; ++c) CHECK(std::abs(mf.at(0, c)) < 1e-9);
}

TEST_CASE("mfcc width is 13 for any fft size") {
  for (int fft : {512, 1024}) {
    FrameSpec spec;
    spec.fft_size = fft;
    const Mat mf = mfcc(stft(sine_clip(500, 0.1), spec));
    CHECK(mf.cols == 13);
  }
}

TEST_CASE("mfcc matches the direct mel+DCT oracle") {
  const FrameSpec spec;
  const AudioClip clip = random_clip(2048, 9);
  const Spectrogram sg = stft(clip, spec);
  const Mat mf = mfcc(sg);
  for (int t = 0; t < sg.frames; ++t) {
    std::vector<double> power(sg.bins);
    for (int k = 0; k < sg.bins; ++k) {
      const double m = sg.magnitude(t, k);
      power[k] = m * m;
    }
    const auto oracle = ref::mfcc_frame(power, sg.sample_rate_hz, sg.fft_size, 26, 13);
    for (int c = 0; c < 13; ++c) {
      CHECK(std::abs(mf.at(t, c) - oracle[c]) < 1e-6);
    }
  }
}

TEST_CASE("pitch_energy of silence") {
  const Mat pe = pitch_energy(clip_of(std::vector<double>(800, 0.0)), FrameSpec{});
  for (int t = 0; t < pe.rows; ++t) {
    CHECK(pe.at(t, 0) == 0.0);
    CHECK(pe.at(t, 1) == doctest::Approx(std::log(1e-10)));
  }
}

TEST_CASE("pitch_energy finds a 100 Hz tone") {
  const Mat pe = pitch_energy(sine_clip(100.0, 0.3), FrameSpec{});
  // Lag quantization bounds the per-frame error to sr/lag^2.
  const double tol = 16000.0 / (160.0 * 160.0) + 1e-9;
  for (int t = 0; t < pe.rows; ++t) {
    CHECK(std::abs(pe.at(t, 0) - 100.0) <= tol);
  }
}

TEST_CASE("doubling the amplitude raises log energy by log 4") {
  const AudioClip one = sine_clip(120.0, 0.2, 16000, 0.25);
  AudioClip two = one;
  for (double& s : two.samples) s *= 2.0;
  const Mat pe1 = pitch_energy(one, FrameSpec{});
  const Mat pe2 = pitch_energy(two, FrameSpec{});
  for (int t = 0; t < pe1.rows; ++t) {
    CHECK(pe2.at(t, 1) - pe1.at(t, 1) ==
          doctest::Approx(std::log(4.0)).epsilon(1e-3));
    CHECK(pe2.at(t, 0) == pe1.at(t, 0));
  }
}

TEST_CASE("deltas of closed-form inputs") {
  Mat constant(5, 3);
  for (double& v : constant.v) v = 2.5;
  for (double v : deltas(constant).v) CHECK(v == 0.0);

  Mat single(1, 4);
  for (int c = 0; c < 4; ++c) single.at(0, c) = c;
  for (double v : deltas(single).v) CHECK(v == 0.0);

  Mat ramp(8, 1);
  for (int t = 0; t < 8; ++t) ramp.at(t, 0) = t;
  const Mat d = deltas(ramp);
  for (int t = 2; t < 6; ++t) CHECK(d.at(t, 0) == doctest::Approx(1.0));
}

TEST_CASE("assemble_features layout arithmetic") {
  const AudioClip clip = sine_clip(250.0, 0.15);
  FeatureOptions opts;
  opts.with_deltas = false;
  const FeatureSequence plain = assemble_features(clip, FrameSpec{}, opts);
  CHECK(plain.dim == 40);
  CHECK(plain.layout.size() == 6);

  opts.with_deltas = true;
  const FeatureSequence full = assemble_features(clip, FrameSpec{}, opts);
  CHECK(full.dim == 80);
  CHECK(full.layout.size() == 12);
  int width_sum = 0;
  for (const auto& [name, w] : full.layout) width_sum += w;
  CHECK(width_sum == 80);
  // Static block values are unchanged by adding deltas.
  for (int t = 0; t < plain.frames; ++t) {
    for (int d = 0; d < 40; ++d) CHECK(plain.at(t, d) == full.at(t, d));
  }
}

TEST_CASE("assemble_features is finite and deterministic on random clips") {
  for (uint64_t seed : {1ull, 2ull, 3ull}) {
    const AudioClip clip = random_clip(3000 + 700 * static_cast<int>(seed), seed);
    const FeatureSequence a = assemble_features(clip, FrameSpec{}, FeatureOptions{});
    const FeatureSequence b = assemble_features(clip, FrameSpec{}, FeatureOptions{});
    CHECK(a.values == b.values);
    for (double v : a.values) CHECK(std::isfinite(v));
  }
}

TEST_CASE("per-corpus normalization zeroes the training mean") {
  std::vector<FeatureSequence> train;
  for (uint64_t seed : {10ull, 11ull, 12ull, 13ull}) {
    train.push_back(assemble_features(random_clip(2500, seed), FrameSpec{},
                                      FeatureOptions{}));
  }
  std::vector<const FeatureSequence*> ptrs;
  for (const auto& f : train) ptrs.push_back(&f);
  const FeatureNormalizer nz = FeatureNormalizer::fit(ptrs);
  for (auto& f : train) nz.apply(f);

  const int D = train[0].dim;
  std::vector<double> mean(D, 0.0);
  int64_t n = 0;
  for (const auto& f : train) {
    CHECK(f.normalized);
    for (int t = 0; t < f.frames; ++t) {
      for (int d = 0; d < D; ++d) mean[d] += f.at(t, d);
    }
    n += f.frames;
  }
  for (int d = 0; d < D; ++d) CHECK(std::abs(mean[d] / n) < 1e-6);
}

TEST_CASE("feature cache round-trips bit-exactly and detects staleness") {
  TempDir tmp("cache");
  const FrameSpec spec;
  const FeatureOptions opts;
  const FeatureSequence seq = assemble_features(random_clip(2000, 21), spec, opts);
  const uint64_t h = feature_config_hash(spec, opts);

  save_feature_cache(tmp.file("a.afq"), seq, h);
  const auto back = load_feature_cache(tmp.file("a.afq"), h);
  REQUIRE(back.has_value());
  CHECK(back->values == seq.values);
  CHECK(back->layout == seq.layout);
  CHECK(back->frames == seq.frames);

  CHECK_FALSE(load_feature_cache(tmp.file("a.afq"), h + 1).has_value());
  CHECK_FALSE(load_feature_cache(tmp.file("missing.afq"), h).has_value());
}

TEST_CASE("extract_from_file caches and reuses features") {
  TempDir tmp("extract");
  const AudioClip clip = sine_clip(330.0, 0.3, 22050);
  write_wav_pcm16(tmp.file("tone.wav"), clip.samples, 22050);

  const FrameSpec spec;
  const FeatureOptions opts;
  const FeatureSequence fresh =
      extract_from_file(tmp.file("tone.wav"), spec, opts, tmp.str());
  const FeatureSequence cached =
      extract_from_file(tmp.file("tone.wav"), spec, opts, tmp.str());
  CHECK(fresh.values == cached.values);
  CHECK(fresh.dim == 80);
}
