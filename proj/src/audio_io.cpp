// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "affectlab/audio_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "affectlab/common.hpp"

namespace affectlab {

namespace {

uint16_t rd_u16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

uint32_t rd_u32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

float rd_f32(const unsigned char* p) {
  uint32_t u = rd_u32(p);
  float f;
  std::memcpy(&f, &u, 4);
  return f;
}

std::vector<unsigned char> read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(Err::MissingFile, "cannot open " + path);
  f.seekg(0, std::ios::end);
  const std::streamoff n = f.tellg();
  f.seekg(0, std::ios::beg);
  std::vector<unsigned char> bytes(static_cast<size_t>(n));
  if (n > 0) f.read(reinterpret_cast<char*>(bytes.data()), n);
  if (!f) fail(Err::IoError, "read failed for " + path);
  return bytes;
}

// Zeroth-order modified Bessel function, power series.
double bessel_i0(double x) {
  double sum = 1.0, term = 1.0;
  for (int k = 1; k < 64; ++k) {
    const double t = x / (2.0 * k);
    term *= t * t;
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

}  // namespace

AudioClip load_wav(const std::string& path) {
  const std::vector<unsigned char> bytes = read_file(path);
  const size_t n = bytes.size();
  if (n < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    fail(Err::BadMagic, "not a RIFF/WAVE file: " + path);
  }

  bool have_fmt = false, have_data = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  size_t data_off = 0, data_len = 0;

  size_t pos = 12;
  while (pos + 8 <= n) {
    const unsigned char* hdr = bytes.data() + pos;
    const uint32_t sz = rd_u32(hdr + 4);
    pos += 8;
    if (pos + sz > n) {
      fail(Err::TruncatedData, "chunk overruns file in " + path);
    }
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (sz < 16) fail(Err::TruncatedData, "short fmt chunk in " + path);
      const unsigned char* p = bytes.data() + pos;
      format = rd_u16(p);
      channels = rd_u16(p + 2);
      rate = rd_u32(p + 4);
      bits = rd_u16(p + 14);
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data_off = pos;
      data_len = sz;
      have_data = true;
    }
    pos += sz + (sz & 1);  // chunks are word-aligned
  }

  if (!have_fmt || !have_data) {
    fail(Err::BadMagic, "missing fmt or data chunk in " + path);
  }
  if (channels == 0 || rate == 0) {
    fail(Err::UnsupportedEncoding, "bad fmt fields in " + path);
  }
  const bool pcm16 = (format == 1 && bits == 16);
  const bool f32 = (format == 3 && bits == 32);
  if (!pcm16 && !f32) {
    fail(Err::UnsupportedEncoding,
         "format " + std::to_string(format) + "/" + std::to_string(bits) +
             " bits not supported (PCM16 or float32 only): " + path);
  }

  const size_t bytes_per = bits / 8;
  const size_t block = bytes_per * channels;
  const size_t frames = data_len / block;
  if (frames == 0) fail(Err::EmptyClip, "no audio frames in " + path);

  AudioClip clip;
  clip.samples.resize(frames);
  clip.sample_rate_hz = static_cast<int>(rate);
  clip.channels_seen = channels;
  clip.source_path = path;

  const unsigned char* d = bytes.data() + data_off;
  for (size_t t = 0; t < frames; ++t) {
    double acc = 0.0;
    for (int c = 0; c < channels; ++c) {
      const unsigned char* s = d + t * block + c * bytes_per;
      if (pcm16) {
        const int16_t v = static_cast<int16_t>(rd_u16(s));
        acc += static_cast<double>(v) / 32768.0;
      } else {
        double v = rd_f32(s);
        if (v < -1.0 || v > 1.0 || std::isnan(v)) {
          v = std::isnan(v) ? 0.0 : std::clamp(v, -1.0, 1.0);
          clip.clipped_samples++;
        }
        acc += v;
      }
    }
    clip.samples[t] = acc / channels;
  }
  return clip;
}

void write_wav_pcm16(const std::string& path,
                     const std::vector<double>& samples, int sample_rate_hz) {
  const uint32_t data_len = static_cast<uint32_t>(samples.size() * 2);
  std::vector<unsigned char> out;
  out.reserve(44 + data_len);

  auto put_u16 = [&](uint16_t v) {
    out.push_back(v & 0xff);
    out.push_back((v >> 8) & 0xff);
  };
  auto put_u32 = [&](uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xff);
  };
  auto put_tag = [&](const char* t) {
    out.insert(out.end(), t, t + 4);
  };

  put_tag("RIFF");
  put_u32(36 + data_len);
  put_tag("WAVE");
  put_tag("fmt ");
  put_u32(16);
  put_u16(1);  // PCM
  put_u16(1);  // mono
  put_u32(static_cast<uint32_t>(sample_rate_hz));
  put_u32(static_cast<uint32_t>(sample_rate_hz) * 2);
  put_u16(2);
  put_u16(16);
  put_tag("data");
  put_u32(data_len);
  for (double s : samples) {
    const double c = std::clamp(s, -1.0, 1.0);
    put_u16(static_cast<uint16_t>(static_cast<int16_t>(std::lround(c * 32767.0))));
  }

  std::ofstream f(path, std::ios::binary);
  if (!f) fail(Err::IoError, "cannot write " + path);
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
  if (!f) fail(Err::IoError, "write failed for " + path);
}

AudioClip resample(const AudioClip& clip, int target_rate_hz) {
  if (target_rate_hz <= 0) {
    fail(Err::ConfigInvalid, "target_rate_hz must be positive");
  }
  if (clip.samples.empty()) fail(Err::EmptyClip, "resample of empty clip");
  if (target_rate_hz == clip.sample_rate_hz) return clip;

  const int src = clip.sample_rate_hz;
  const int dst = target_rate_hz;
  const int64_t n_in = static_cast<int64_t>(clip.samples.size());
  int64_t n_out = std::llround(static_cast<double>(n_in) * dst / src);
  if (n_out < 1) n_out = 1;

  constexpr int kHalf = 32;     // 64 taps per output sample
  constexpr int kTaps = 2 * kHalf;
  constexpr int kPhases = 1024;
  constexpr double kBeta = 9.0;
  // Cutoff at 0.9 of the lower Nyquist, expressed in input-sample units.
  const double fc = 0.45 * std::min(src, dst) / static_cast<double>(src);

  // Kernel table: kPhases+1 rows of 64 taps, each row normalized to unit
  // sum so constant signals pass through exactly.
  std::vector<double> table(static_cast<size_t>(kPhases + 1) * kTaps);
  const double i0_beta = bessel_i0(kBeta);
  for (int p = 0; p <= kPhases; ++p) {
    const double phi = static_cast<double>(p) / kPhases;
    double sum = 0.0;
    double* row = table.data() + static_cast<size_t>(p) * kTaps;
    for (int j = 0; j < kTaps; ++j) {
      const double x = (j - (kHalf - 1)) - phi;  // in [-32, 32]
      const double sinc = (x == 0.0)
                              ? 2.0 * fc
                              : std::sin(2.0 * M_PI * fc * x) / (M_PI * x);
      const double r = x / kHalf;
      const double win = (r <= -1.0 || r >= 1.0)
                             ? 0.0
                             : bessel_i0(kBeta * std::sqrt(1.0 - r * r)) / i0_beta;
      row[j] = sinc * win;
      sum += row[j];
    }
    for (int j = 0; j < kTaps; ++j) row[j] /= sum;
  }

  AudioClip out;
  out.samples.resize(static_cast<size_t>(n_out));
  out.sample_rate_hz = dst;
  out.channels_seen = clip.channels_seen;
  out.source_path = clip.source_path;
  out.clipped_samples = clip.clipped_samples;

  const double* x = clip.samples.data();
#pragma omp parallel for schedule(static)
  for (int64_t n = 0; n < n_out; ++n) {
    const double t = static_cast<double>(n * static_cast<int64_t>(src)) / dst;
    const int64_t k0 = static_cast<int64_t>(std::floor(t));
    const double phi = t - static_cast<double>(k0);
    const double pf = phi * kPhases;
    const int p0 = static_cast<int>(pf);
    const double w1 = pf - p0;
    const double* r0 = table.data() + static_cast<size_t>(p0) * kTaps;
    const double* r1 = r0 + kTaps;
    double acc = 0.0;
    for (int j = 0; j < kTaps; ++j) {
      const int64_t k = k0 + j - (kHalf - 1);
      if (k < 0 || k >= n_in) continue;
      acc += ((1.0 - w1) * r0[j] + w1 * r1[j]) * x[k];
    }
    out.samples[n] = std::clamp(acc, -1.0, 1.0);
  }
  return out;
}

}  // namespace affectlab
