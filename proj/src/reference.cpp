// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "affectlab/reference.hpp"

#include <cmath>

namespace affectlab::ref {

namespace {
constexpr double kPi = 3.14159265358979323846;

double hz_to_mel(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }
double mel_to_hz(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }
}  // namespace

std::vector<std::complex<double>> dft(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<std::complex<double>> out(n);
  for (int k = 0; k < n; ++k) {
    double re = 0.0, im = 0.0;
    for (int t = 0; t < n; ++t) {
      const double ang = -2.0 * kPi * k * t / n;
      re += x[t] * std::cos(ang);
      im += x[t] * std::sin(ang);
    }
    out[k] = {re, im};
  }
  return out;
}

std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<std::complex<double>> out(n);
  for (int k = 0; k < n; ++k) {
    std::complex<double> acc{0.0, 0.0};
    for (int t = 0; t < n; ++t) {
      const double ang = -2.0 * kPi * k * t / n;
      acc += x[t] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

int dft_peak_bin(const std::vector<std::complex<double>>& spectrum) {
  const int half = static_cast<int>(spectrum.size()) / 2;
  int best = 1;
  double best_mag = -1.0;
  for (int k = 1; k <= half; ++k) {
    const double m = std::abs(spectrum[k]);
    if (m > best_mag) {
      best_mag = m;
      best = k;
    }
  }
  return best;
}

std::vector<double> matmul(const std::vector<double>& a, int m, int k,
                           const std::vector<double>& b, int n) {
  std::vector<double> c(static_cast<size_t>(m) * n, 0.0);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int p = 0; p < k; ++p) {
        acc += a[static_cast<size_t>(i) * k + p] * b[static_cast<size_t>(p) * n + j];
      }
      c[static_cast<size_t>(i) * n + j] = acc;
    }
  }
  return c;
}

std::vector<double> mfcc_frame(const std::vector<double>& power_row,
                               int sample_rate_hz, int fft_size,
                               int num_filters, int num_coeffs) {
  const int bins = fft_size / 2 + 1;
  const double mel_hi = hz_to_mel(sample_rate_hz / 2.0);

  std::vector<double> log_e(num_filters);
  for (int i = 0; i < num_filters; ++i) {
    const double lo = mel_to_hz(mel_hi * i / (num_filters + 1));
    const double mid = mel_to_hz(mel_hi * (i + 1) / (num_filters + 1));
    const double hi = mel_to_hz(mel_hi * (i + 2) / (num_filters + 1));
    double e = 0.0;
    for (int k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate_hz / fft_size;
      double w = 0.0;
      if (f > lo && f <= mid && mid > lo) {
        w = (f - lo) / (mid - lo);
      } else if (f > mid && f < hi && hi > mid) {
        w = (hi - f) / (hi - mid);
      }
      e += w * power_row[k];
    }
    log_e[i] = std::log(e < 1e-10 ? 1e-10 : e);
  }

  std::vector<double> out(num_coeffs);
  for (int c = 0; c < num_coeffs; ++c) {
    double acc = 0.0;
    for (int i = 0; i < num_filters; ++i) {
      acc += log_e[i] * std::cos(kPi * c * (2.0 * i + 1.0) / (2.0 * num_filters));
    }
    const double scale = (c == 0) ? std::sqrt(1.0 / num_filters)
                                  : std::sqrt(2.0 / num_filters);
    out[c] = scale * acc;
  }
  return out;
}

std::array<double, 6> tonnetz_basis(int pitch_class) {
  const double p = static_cast<double>(pitch_class);
  return {
      std::sin(p * 7.0 * kPi / 6.0), std::cos(p * 7.0 * kPi / 6.0),
      std::sin(p * 3.0 * kPi / 2.0), std::cos(p * 3.0 * kPi / 2.0),
      0.5 * std::sin(p * 2.0 * kPi / 3.0), 0.5 * std::cos(p * 2.0 * kPi / 3.0),
  };
}

}  // namespace affectlab::ref
