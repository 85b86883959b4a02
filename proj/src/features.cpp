// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "affectlab/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "affectlab/common.hpp"

namespace affectlab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLogFloor = 1e-10;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::vector<double> make_window(const FrameSpec& spec) {
  const int n = spec.frame_length_samples;
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    const double c = std::cos(2.0 * kPi * i / n);
    w[i] = (spec.window == Window::hann) ? 0.5 - 0.5 * c : 0.54 - 0.46 * c;
  }
  return w;
}

// Iterative radix-2 FFT, decimation in time.
void fft_inplace(std::complex<double>* a, int n,
                 const std::vector<std::complex<double>>& twiddle) {
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const int stride = n / len;
    for (int i = 0; i < n; i += len) {
      for (int k = 0; k < len / 2; ++k) {
        const std::complex<double> w = twiddle[static_cast<size_t>(k) * stride];
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

int frame_count(int64_t n_samples, const FrameSpec& spec) {
  if (n_samples < spec.frame_length_samples) return 1;
  return 1 + static_cast<int>((n_samples - spec.frame_length_samples) /
                              spec.hop_samples);
}

int pitch_class_of(double freq_hz) {
  const double midi = 69.0 + 12.0 * std::log2(freq_hz / 440.0);
  const long r = std::lround(midi);
  return static_cast<int>(((r % 12) + 12) % 12);
}

void check_finite(const std::vector<double>& v, const std::string& what) {
  for (double x : v) {
    if (!std::isfinite(x)) fail(Err::NumericFailure, "non-finite value in " + what);
  }
}

}  // namespace

void FrameSpec::validate() const {
  if (frame_length_samples <= 0 || hop_samples <= 0 || fft_size <= 0) {
    fail(Err::ConfigInvalid, "frame spec fields must be positive");
  }
  if (hop_samples > frame_length_samples || frame_length_samples > fft_size) {
    fail(Err::ConfigInvalid, "require hop <= frame_length <= fft_size");
  }
  if (!is_pow2(fft_size)) fail(Err::ConfigInvalid, "fft_size must be a power of two");
}

uint64_t FrameSpec::hash() const {
  uint64_t h = fnv1a64("framespec-v1");
  const int fields[4] = {frame_length_samples, hop_samples,
                         static_cast<int>(window), fft_size};
  h = fnv1a64(fields, sizeof(fields), h);
  return h;
}

uint64_t feature_config_hash(const FrameSpec& spec, const FeatureOptions& options) {
  uint64_t h = spec.hash();
  const int d = options.with_deltas ? 1 : 0;
  return fnv1a64(&d, sizeof(d), h);
}

Spectrogram stft(const AudioClip& clip, const FrameSpec& spec) {
  spec.validate();
  if (clip.samples.empty()) fail(Err::EmptyClip, "stft of empty clip");

  const int T = frame_count(static_cast<int64_t>(clip.samples.size()), spec);
  const int n = spec.fft_size;
  const int bins = n / 2 + 1;

  Spectrogram out;
  out.frames = T;
  out.bins = bins;
  out.fft_size = n;
  out.sample_rate_hz = clip.sample_rate_hz;
  out.values.resize(static_cast<size_t>(T) * bins);

  const std::vector<double> win = make_window(spec);
  std::vector<std::complex<double>> twiddle(n / 2);
  for (int k = 0; k < n / 2; ++k) {
    twiddle[k] = std::polar(1.0, -2.0 * kPi * k / n);
  }

  const int64_t n_samples = static_cast<int64_t>(clip.samples.size());
#pragma omp parallel for schedule(static)
  for (int t = 0; t < T; ++t) {
    std::vector<std::complex<double>> buf(n, std::complex<double>(0.0, 0.0));
    const int64_t start = static_cast<int64_t>(t) * spec.hop_samples;
    for (int i = 0; i < spec.frame_length_samples; ++i) {
      const int64_t k = start + i;
      if (k < n_samples) buf[i] = clip.samples[k] * win[i];
    }
    fft_inplace(buf.data(), n, twiddle);
    for (int k = 0; k < bins; ++k) {
      out.values[static_cast<size_t>(t) * bins + k] = buf[k];
    }
  }
  return out;
}

Mat chromagram(const Spectrogram& spec) {
  Mat out(spec.frames, 12);
  // Pitch class per bin is fixed for the whole spectrogram.
  std::vector<int> pc(spec.bins, -1);
  for (int k = 1; k < spec.bins; ++k) {
    const double f = static_cast<double>(k) * spec.sample_rate_hz / spec.fft_size;
    pc[k] = pitch_class_of(f);
  }
  for (int t = 0; t < spec.frames; ++t) {
    double row[12] = {0};
    for (int k = 1; k < spec.bins; ++k) {
      const double m = spec.magnitude(t, k);
      row[pc[k]] += m * m;
    }
    double mx = 0.0;
    for (double e : row) mx = std::max(mx, e);
    if (mx > 0.0) {
      for (int c = 0; c < 12; ++c) out.at(t, c) = row[c] / mx;
    }
  }
  return out;
}

Mat tonnetz(const Mat& chroma) {
  if (chroma.cols != 12) fail(Err::DimensionMismatch, "chroma must have 12 columns");
  for (double x : chroma.v) {
    if (x < 0.0) fail(Err::NegativeChroma, "chroma energies must be non-negative");
  }

  // Basis columns: interleaved sin/cos over the circles of fifths, minor
  // thirds, and major thirds, radii (1, 1, 1, 1, 0.5, 0.5).
  double basis[12][6];
  for (int p = 0; p < 12; ++p) {
    basis[p][0] = std::sin(p * 7.0 * kPi / 6.0);
    basis[p][1] = std::cos(p * 7.0 * kPi / 6.0);
    basis[p][2] = std::sin(p * 3.0 * kPi / 2.0);
    basis[p][3] = std::cos(p * 3.0 * kPi / 2.0);
    basis[p][4] = 0.5 * std::sin(p * 2.0 * kPi / 3.0);
    basis[p][5] = 0.5 * std::cos(p * 2.0 * kPi / 3.0);
  }

  Mat out(chroma.rows, 6);
  for (int t = 0; t < chroma.rows; ++t) {
    double sum = 0.0;
    for (int p = 0; p < 12; ++p) sum += chroma.at(t, p);
    if (sum <= 0.0) continue;
    for (int p = 0; p < 12; ++p) {
      const double c = chroma.at(t, p) / sum;
      for (int d = 0; d < 6; ++d) out.at(t, d) += c * basis[p][d];
    }
  }
  return out;
}

Mat spectral_contrast(const Spectrogram& spec) {
  constexpr int kBands = 7;
  constexpr double kQuantile = 0.2;
  const double nyquist = spec.sample_rate_hz / 2.0;

  // 6 octave bands from 200 Hz plus the residual top band. Bands beyond
  // Nyquist are empty and report zero contrast.
  double edges[kBands + 1];
  edges[0] = 200.0;
  for (int b = 1; b <= 6; ++b) edges[b] = edges[b - 1] * 2.0;
  edges[kBands] = std::max(nyquist, edges[kBands - 1]);

  std::vector<std::vector<int>> band_bins(kBands);
  for (int k = 0; k < spec.bins; ++k) {
    const double f = static_cast<double>(k) * spec.sample_rate_hz / spec.fft_size;
    for (int b = 0; b < kBands; ++b) {
      const double hi = (b == kBands - 1) ? nyquist + 1.0 : edges[b + 1];
      if (f >= edges[b] && f < hi && f <= nyquist) {
        band_bins[b].push_back(k);
        break;
      }
    }
  }

  Mat out(spec.frames, kBands);
  for (int t = 0; t < spec.frames; ++t) {
    std::vector<double> mags;
    for (int b = 0; b < kBands; ++b) {
      const auto& idx = band_bins[b];
      if (idx.empty()) continue;  // contrast stays 0
      mags.resize(idx.size());
      for (size_t i = 0; i < idx.size(); ++i) {
        mags[i] = std::max(spec.magnitude(t, idx[i]), kLogFloor);
      }
      std::sort(mags.begin(), mags.end());
      const int m = std::max<int>(1, static_cast<int>(kQuantile * mags.size()));
      double valley = 0.0, peak = 0.0;
      for (int i = 0; i < m; ++i) {
        valley += mags[i];
        peak += mags[mags.size() - 1 - i];
      }
      out.at(t, b) = std::log(peak / m) - std::log(valley / m);
    }
  }
  return out;
}

Mat mfcc(const Spectrogram& spec) {
  constexpr int kFilters = 26;
  constexpr int kCoeffs = 13;
  const double mel_hi = 2595.0 * std::log10(1.0 + (spec.sample_rate_hz / 2.0) / 700.0);

  // Triangular filters on a grid of kFilters+2 equally spaced mel points.
  std::vector<double> hz(kFilters + 2);
  for (int i = 0; i < kFilters + 2; ++i) {
    const double mel = mel_hi * i / (kFilters + 1);
    hz[i] = 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
  }
  std::vector<double> weights(static_cast<size_t>(kFilters) * spec.bins, 0.0);
  for (int i = 0; i < kFilters; ++i) {
    for (int k = 0; k < spec.bins; ++k) {
      const double f = static_cast<double>(k) * spec.sample_rate_hz / spec.fft_size;
      double w = 0.0;
      if (f > hz[i] && f <= hz[i + 1] && hz[i + 1] > hz[i]) {
        w = (f - hz[i]) / (hz[i + 1] - hz[i]);
      } else if (f > hz[i + 1] && f < hz[i + 2] && hz[i + 2] > hz[i + 1]) {
        w = (hz[i + 2] - f) / (hz[i + 2] - hz[i + 1]);
      }
      weights[static_cast<size_t>(i) * spec.bins + k] = w;
    }
  }

  // Orthonormal DCT-II rows.
  std::vector<double> dct(static_cast<size_t>(kCoeffs) * kFilters);
  for (int c = 0; c < kCoeffs; ++c) {
    const double scale = (c == 0) ? std::sqrt(1.0 / kFilters) : std::sqrt(2.0 / kFilters);
    for (int i = 0; i < kFilters; ++i) {
      dct[static_cast<size_t>(c) * kFilters + i] =
          scale * std::cos(kPi * c * (2.0 * i + 1.0) / (2.0 * kFilters));
    }
  }

  Mat out(spec.frames, kCoeffs);
  for (int t = 0; t < spec.frames; ++t) {
    double log_e[kFilters];
    for (int i = 0; i < kFilters; ++i) {
      double e = 0.0;
      const double* w = weights.data() + static_cast<size_t>(i) * spec.bins;
      for (int k = 0; k < spec.bins; ++k) {
        const double m = spec.magnitude(t, k);
        e += w[k] * m * m;
      }
      log_e[i] = std::log(e < kLogFloor ? kLogFloor : e);
    }
    for (int c = 0; c < kCoeffs; ++c) {
      double acc = 0.0;
      const double* row = dct.data() + static_cast<size_t>(c) * kFilters;
      for (int i = 0; i < kFilters; ++i) acc += row[i] * log_e[i];
      out.at(t, c) = acc;
    }
  }
  return out;
}

Mat pitch_energy(const AudioClip& clip, const FrameSpec& spec) {
  spec.validate();
  if (clip.samples.empty()) fail(Err::EmptyClip, "pitch_energy of empty clip");

  const int sr = clip.sample_rate_hz;
  const int T = frame_count(static_cast<int64_t>(clip.samples.size()), spec);
  const int L = spec.frame_length_samples;
  const int lag_lo = std::max(1, static_cast<int>(std::ceil(sr / 400.0)));
  const int lag_hi = std::min(L - 1, static_cast<int>(std::floor(sr / 50.0)));
  const int64_t n_samples = static_cast<int64_t>(clip.samples.size());

  Mat out(T, 2);
#pragma omp parallel for schedule(static)
  for (int t = 0; t < T; ++t) {
    std::vector<double> frame(L, 0.0);
    const int64_t start = static_cast<int64_t>(t) * spec.hop_samples;
    for (int i = 0; i < L; ++i) {
      const int64_t k = start + i;
      if (k < n_samples) frame[i] = clip.samples[k];
    }

    double r0 = 0.0;
    for (int i = 0; i < L; ++i) r0 += frame[i] * frame[i];
    out.at(t, 1) = std::log(r0 / L + kLogFloor);

    double f0 = 0.0;
    if (r0 > 0.0 && lag_lo <= lag_hi) {
      int best_lag = 0;
      double best = -1.0;
      for (int lag = lag_lo; lag <= lag_hi; ++lag) {
        double r = 0.0;
        for (int i = 0; i + lag < L; ++i) r += frame[i] * frame[i + lag];
        if (r > best) {
          best = r;
          best_lag = lag;
        }
      }
      if (best_lag > 0 && best / r0 >= 0.3) {
        f0 = static_cast<double>(sr) / best_lag;
      }
    }
    out.at(t, 0) = f0;
  }
  return out;
}

Mat deltas(const Mat& seq) {
  Mat out(seq.rows, seq.cols);
  const int T = seq.rows;
  auto clamp_t = [T](int t) { return t < 0 ? 0 : (t >= T ? T - 1 : t); };
  for (int t = 0; t < T; ++t) {
    for (int d = 0; d < seq.cols; ++d) {
      double acc = 0.0;
      for (int n = 1; n <= 2; ++n) {
        acc += n * (seq.at(clamp_t(t + n), d) - seq.at(clamp_t(t - n), d));
      }
      out.at(t, d) = acc / 10.0;  // 2 * (1^2 + 2^2)
    }
  }
  return out;
}

FeatureSequence assemble_features(const AudioClip& clip, const FrameSpec& spec,
                                  const FeatureOptions& options) {
  const Spectrogram sg = stft(clip, spec);
  const Mat ch = chromagram(sg);
  const Mat tn = tonnetz(ch);
  const Mat sc = spectral_contrast(sg);
  const Mat mf = mfcc(sg);
  const Mat pe = pitch_energy(clip, spec);

  const Mat* blocks[5] = {&ch, &tn, &sc, &mf, &pe};
  const int T = sg.frames;
  int static_dim = 0;
  for (const Mat* b : blocks) static_dim += b->cols;

  Mat statics(T, static_dim);
  for (int t = 0; t < T; ++t) {
    int col = 0;
    for (const Mat* b : blocks) {
      for (int c = 0; c < b->cols; ++c) statics.at(t, col++) = b->at(t, c);
    }
  }

  FeatureSequence out;
  out.frames = T;
  out.dim = options.with_deltas ? 2 * static_dim : static_dim;
  out.values.resize(static_cast<size_t>(T) * out.dim);
  out.clip_id = clip.source_path;
  out.layout = {{"chroma", 12}, {"tonnetz", 6}, {"contrast", 7},
                {"mfcc", 13},  {"pitch", 1},   {"energy", 1}};

  for (int t = 0; t < T; ++t) {
    for (int d = 0; d < static_dim; ++d) {
      out.values[static_cast<size_t>(t) * out.dim + d] = statics.at(t, d);
    }
  }
  if (options.with_deltas) {
    const Mat dl = deltas(statics);
    for (int t = 0; t < T; ++t) {
      for (int d = 0; d < static_dim; ++d) {
        out.values[static_cast<size_t>(t) * out.dim + static_dim + d] = dl.at(t, d);
      }
    }
    for (const auto& [name, width] : std::vector<std::pair<std::string, int>>(out.layout)) {
      out.layout.emplace_back("d_" + name, width);
    }
  }

  // Keep values float32-representable so the cache round-trips exactly.
  for (double& x : out.values) x = static_cast<double>(static_cast<float>(x));
  check_finite(out.values, "features of " + clip.source_path);
  return out;
}

FeatureNormalizer FeatureNormalizer::fit(
    const std::vector<const FeatureSequence*>& train) {
  if (train.empty()) fail(Err::EmptyDataset, "normalizer fit on empty set");
  const int D = train[0]->dim;
  std::vector<double> mean(D, 0.0), var(D, 0.0);
  int64_t n = 0;
  for (const FeatureSequence* s : train) {
    if (s->dim != D) fail(Err::DimensionMismatch, "mixed feature dims in fit");
    for (int t = 0; t < s->frames; ++t) {
      for (int d = 0; d < D; ++d) mean[d] += s->at(t, d);
    }
    n += s->frames;
  }
  for (double& m : mean) m /= static_cast<double>(n);
  for (const FeatureSequence* s : train) {
    for (int t = 0; t < s->frames; ++t) {
      for (int d = 0; d < D; ++d) {
        const double z = s->at(t, d) - mean[d];
        var[d] += z * z;
      }
    }
  }
  FeatureNormalizer out;
  out.mean = std::move(mean);
  out.stdev.resize(D);
  for (int d = 0; d < D; ++d) {
    out.stdev[d] = std::max(std::sqrt(var[d] / static_cast<double>(n)), 1e-8);
  }
  return out;
}

void FeatureNormalizer::apply(FeatureSequence& seq) const {
  if (static_cast<size_t>(seq.dim) != mean.size()) {
    fail(Err::DimensionMismatch, "normalizer dim mismatch");
  }
  for (int t = 0; t < seq.frames; ++t) {
    for (int d = 0; d < seq.dim; ++d) {
      double& x = seq.values[static_cast<size_t>(t) * seq.dim + d];
      x = (x - mean[d]) / stdev[d];
    }
  }
  seq.normalized = true;
}

namespace {

constexpr char kCacheMagic[4] = {'A', 'F', 'Q', '1'};

void put_u32(std::vector<unsigned char>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xff);
}
void put_u64(std::vector<unsigned char>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back((v >> (8 * i)) & 0xff);
}

struct Reader {
  const unsigned char* p;
  size_t n, pos = 0;
  bool ok = true;

  bool need(size_t k) {
    if (pos + k > n) ok = false;
    return ok;
  }
  uint32_t u32() {
    if (!need(4)) return 0;
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(p[pos + i]) << (8 * i);
    pos += 4;
    return v;
  }
  uint64_t u64() {
    if (!need(8)) return 0;
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[pos + i]) << (8 * i);
    pos += 8;
    return v;
  }
};

}  // namespace

void save_feature_cache(const std::string& path, const FeatureSequence& seq,
                        uint64_t spec_hash) {
  std::vector<unsigned char> out;
  out.insert(out.end(), kCacheMagic, kCacheMagic + 4);
  put_u64(out, spec_hash);
  put_u32(out, static_cast<uint32_t>(seq.frames));
  put_u32(out, static_cast<uint32_t>(seq.dim));
  put_u32(out, static_cast<uint32_t>(seq.layout.size()));
  for (const auto& [name, width] : seq.layout) {
    put_u32(out, static_cast<uint32_t>(name.size()));
    out.insert(out.end(), name.begin(), name.end());
    put_u32(out, static_cast<uint32_t>(width));
  }
  for (double x : seq.values) {
    const float f = static_cast<float>(x);
    uint32_t u;
    std::memcpy(&u, &f, 4);
    put_u32(out, u);
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(Err::IoError, "cannot write cache " + path);
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
}

std::optional<FeatureSequence> load_feature_cache(const std::string& path,
                                                  uint64_t expected_spec_hash) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return std::nullopt;
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)),
                                   std::istreambuf_iterator<char>());
  Reader r{bytes.data(), bytes.size()};
  if (!r.need(4) || std::memcmp(bytes.data(), kCacheMagic, 4) != 0) {
    return std::nullopt;
  }
  r.pos = 4;
  if (r.u64() != expected_spec_hash) return std::nullopt;

  FeatureSequence seq;
  seq.frames = static_cast<int>(r.u32());
  seq.dim = static_cast<int>(r.u32());
  const uint32_t n_blocks = r.u32();
  if (!r.ok || seq.frames <= 0 || seq.dim <= 0 || n_blocks > 64) {
    return std::nullopt;
  }
  int width_sum = 0;
  for (uint32_t i = 0; i < n_blocks; ++i) {
    const uint32_t len = r.u32();
    if (!r.ok || len > 64 || !r.need(len)) return std::nullopt;
    std::string name(reinterpret_cast<const char*>(bytes.data() + r.pos), len);
    r.pos += len;
    const int width = static_cast<int>(r.u32());
    seq.layout.emplace_back(name, width);
    width_sum += width;
  }
  if (!r.ok || width_sum != seq.dim) return std::nullopt;

  const size_t count = static_cast<size_t>(seq.frames) * seq.dim;
  if (!r.need(count * 4)) return std::nullopt;
  seq.values.resize(count);
  for (size_t i = 0; i < count; ++i) {
    const uint32_t u = r.u32();
    float fv;
    std::memcpy(&fv, &u, 4);
    seq.values[i] = static_cast<double>(fv);
  }
  return seq;
}

FeatureSequence extract_from_file(const std::string& audio_path,
                                  const FrameSpec& spec,
                                  const FeatureOptions& options,
                                  const std::string& cache_dir) {
  const uint64_t h = feature_config_hash(spec, options);
  std::string cache_path;
  if (!cache_dir.empty()) {
    cache_path = (std::filesystem::path(cache_dir) /
                  (hex64(fnv1a64(audio_path)) + ".afq")).string();
    if (auto cached = load_feature_cache(cache_path, h)) {
      cached->clip_id = audio_path;
      return *std::move(cached);
    }
  }
  AudioClip clip = load_wav(audio_path);
  if (clip.sample_rate_hz != kCanonicalRateHz) {
    clip = resample(clip, kCanonicalRateHz);
  }
  FeatureSequence seq = assemble_features(clip, spec, options);
  if (!cache_path.empty()) save_feature_cache(cache_path, seq, h);
  return seq;
}

std::vector<FeatureSequence> extract_batch(const std::vector<std::string>& paths,
                                           const FrameSpec& spec,
                                           const FeatureOptions& options,
                                           const std::string& cache_dir,
                                           int threads) {
  if (!cache_dir.empty()) std::filesystem::create_directories(cache_dir);
  std::vector<FeatureSequence> out(paths.size());
  std::exception_ptr err;
#ifdef _OPENMP
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#else
  const int nt = 1;
  (void)threads;
#endif
  (void)nt;
#pragma omp parallel for schedule(dynamic) num_threads(nt)
  for (int64_t i = 0; i < static_cast<int64_t>(paths.size()); ++i) {
    try {
      out[i] = extract_from_file(paths[i], spec, options, cache_dir);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

}  // namespace affectlab
