// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Times the OpenMP kernels against the serial reference implementations and
// checks that both sides agree numerically. Sizes are chosen so a full run
// stays under a minute; pass --quick for a smoke run.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "affectlab/audio_io.hpp"
#include "affectlab/features.hpp"
#include "affectlab/reference.hpp"
#include "affectlab/rng.hpp"
#include "affectlab/tensor.hpp"

using namespace affectlab;

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <class F>
double time_ms(F&& fn, int reps) {
  const double t0 = now_ms();
  for (int i = 0; i < reps; ++i) fn();
  return (now_ms() - t0) / reps;
}

void row(const char* name, double serial_ms, double parallel_ms, double max_diff) {
  std::printf("%-28s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   max|diff| %.2e\n",
              name, serial_ms, parallel_ms, serial_ms / parallel_ms, max_diff);
}

}  // namespace

int main(int argc, char** argv) {
  const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif

  Xoshiro256 rng(42);

  // Matrix product: parallel kernel vs naive triple loop.
  {
    const int n = quick ? 96 : 384;
    const int reps = quick ? 2 : 3;
    std::vector<double> av(static_cast<size_t>(n) * n), bv(av.size());
    for (double& x : av) x = rng.uniform(-1.0, 1.0);
    for (double& x : bv) x = rng.uniform(-1.0, 1.0);
    const Tensor a = Tensor::from_values({n, n}, av);
    const Tensor b = Tensor::from_values({n, n}, bv);

    Tensor c_par;
    std::vector<double> c_ser;
    const double par = time_ms([&] { c_par = tensor_matmul(a, b); }, reps);
    const double ser = time_ms([&] { c_ser = ref::matmul(av, n, n, bv, n); }, reps);
    double md = 0.0;
    for (int64_t i = 0; i < c_par.size(); ++i) {
      md = std::max(md, std::abs(c_par[i] - c_ser[static_cast<size_t>(i)]));
    }
    char label[64];
    std::snprintf(label, sizeof(label), "matmul %dx%dx%d", n, n, n);
    row(label, ser, par, md);
  }

  // Short-time transform: FFT frames in parallel vs per-frame direct DFT.
  {
    const double seconds = quick ? 0.5 : 4.0;
    AudioClip clip;
    clip.sample_rate_hz = kCanonicalRateHz;
    clip.samples.resize(static_cast<size_t>(seconds * kCanonicalRateHz));
    for (size_t i = 0; i < clip.samples.size(); ++i) {
      clip.samples[i] = 0.4 * std::sin(2.0 * M_PI * 440.0 * i / kCanonicalRateHz) +
                        0.05 * rng.uniform(-1.0, 1.0);
    }
    const FrameSpec spec;

    Spectrogram sg;
    const double par = time_ms([&] { sg = stft(clip, spec); }, quick ? 1 : 3);

    // Serial oracle path: window each frame, direct DFT, keep half spectrum.
    std::vector<std::complex<double>> ser_vals;
    const double ser = time_ms(
        [&] {
          ser_vals.clear();
          std::vector<double> win(spec.frame_length_samples);
          for (int i = 0; i < spec.frame_length_samples; ++i) {
            win[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / spec.frame_length_samples);
          }
          const int T = sg.frames;
          for (int t = 0; t < T; ++t) {
            std::vector<double> frame(spec.fft_size, 0.0);
            for (int i = 0; i < spec.frame_length_samples; ++i) {
              const size_t k = static_cast<size_t>(t) * spec.hop_samples + i;
              if (k < clip.samples.size()) frame[i] = clip.samples[k] * win[i];
            }
            const auto spec_full = ref::dft(frame);
            for (int k = 0; k <= spec.fft_size / 2; ++k) ser_vals.push_back(spec_full[k]);
          }
        },
        1);

    double md = 0.0;
    for (size_t i = 0; i < ser_vals.size(); ++i) {
      md = std::max(md, std::abs(sg.values[i] - ser_vals[i]));
    }
    row("stft (fft vs direct dft)", ser, par, md);
  }

  // Full feature pipeline across files: one thread vs all threads.
  {
    const int clips = quick ? 8 : 32;
    std::vector<AudioClip> clipset(clips);
    for (int c = 0; c < clips; ++c) {
      clipset[c].sample_rate_hz = kCanonicalRateHz;
      clipset[c].samples.resize(kCanonicalRateHz / 2);
      const double f = 150.0 + 30.0 * c;
      for (size_t i = 0; i < clipset[c].samples.size(); ++i) {
        clipset[c].samples[i] = 0.5 * std::sin(2.0 * M_PI * f * i / kCanonicalRateHz);
      }
    }
    const FrameSpec spec;
    const FeatureOptions opts;

    auto run = [&](int threads) {
#ifdef _OPENMP
      std::vector<FeatureSequence> out(clipset.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
      for (int c = 0; c < clips; ++c) {
        out[c] = assemble_features(clipset[c], spec, opts);
      }
#else
      (void)threads;
      std::vector<FeatureSequence> out(clipset.size());
      for (int c = 0; c < clips; ++c) {
        out[c] = assemble_features(clipset[c], spec, opts);
      }
#endif
      return out;
    };

#ifdef _OPENMP
    const int max_threads = omp_get_max_threads();
#else
    const int max_threads = 1;
#endif
    std::vector<FeatureSequence> a, b;
    const double ser = time_ms([&] { a = run(1); }, 1);
    const double par = time_ms([&] { b = run(max_threads); }, 1);
    double md = 0.0;
    for (int c = 0; c < clips; ++c) {
      for (size_t i = 0; i < a[c].values.size(); ++i) {
        md = std::max(md, std::abs(a[c].values[i] - b[c].values[i]));
      }
    }
    row("feature pipeline (files)", ser, par, md);
  }

  return 0;
}
