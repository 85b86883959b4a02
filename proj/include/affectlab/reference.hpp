// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Serial reference kernels. These are deliberately naive (O(n^2) DFT,
// triple-loop matmul, per-filter mel/DCT sums) and share no code with the
// parallel implementations in src/. Tests use them as independent oracles;
// the benchmark tool compares them against the production kernels.

#pragma once

#include <array>
#include <complex>
#include <vector>

namespace affectlab::ref {

// Direct O(n^2) DFT of a real signal. Bin k of n bins.
std::vector<std::complex<double>> dft(const std::vector<double>& x);

// Direct O(n^2) DFT of a complex signal.
std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x);

// Index of the magnitude peak over bins [1, n/2].
int dft_peak_bin(const std::vector<std::complex<double>>& spectrum);

// Naive triple-loop matrix product: a is m-by-k, b is k-by-n, row-major.
std::vector<double> matmul(const std::vector<double>& a, int m, int k,
                           const std::vector<double>& b, int n);

// Mel filterbank log energies followed by an orthonormal DCT-II, computed
// with direct per-filter and per-coefficient sums from one power spectrum
// row (fft_size/2 + 1 bins).
std::vector<double> mfcc_frame(const std::vector<double>& power_row,
                               int sample_rate_hz, int fft_size,
                               int num_filters, int num_coeffs);

// Tonal-centroid basis column for one pitch class: interleaved sin/cos on
// the circles of fifths, minor thirds, and major thirds with radii
// (1, 1, 1, 1, 0.5, 0.5).
std::array<double, 6> tonnetz_basis(int pitch_class);

}  // namespace affectlab::ref
