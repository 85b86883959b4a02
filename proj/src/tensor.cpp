// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "affectlab/tensor.hpp"

#include <cmath>

#include "affectlab/common.hpp"

namespace affectlab {

namespace {
int64_t shape_product(const std::vector<int>& shape) {
  int64_t p = 1;
  for (int d : shape) {
    if (d <= 0) fail(Err::ShapeMismatch, "non-positive dimension");
    p *= d;
  }
  return p;
}
}  // namespace

Tensor::Tensor(std::vector<int> shape, Precision prec) : prec_(prec) {
  const int64_t n = shape_product(shape);
  shape_ = std::move(shape);
  values_.assign(static_cast<size_t>(n), 0.0);
}

Tensor Tensor::from_values(std::vector<int> shape, std::vector<double> values,
                           Precision prec) {
  Tensor t;
  const int64_t n = shape_product(shape);
  if (n != static_cast<int64_t>(values.size())) {
    fail(Err::ShapeMismatch, "value count does not match shape");
  }
  t.shape_ = std::move(shape);
  t.values_ = std::move(values);
  t.prec_ = prec;
  t.quantize();
  return t;
}

Tensor Tensor::scalar(double v) {
  return from_values({1}, {v});
}

void Tensor::set_precision(Precision p) {
  prec_ = p;
  quantize();
}

void Tensor::quantize() {
  if (prec_ != Precision::f32) return;
  for (double& x : values_) x = static_cast<double>(static_cast<float>(x));
}

bool Tensor::bit_equal(const Tensor& o) const {
  if (shape_ != o.shape_) return false;
  for (size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] != o.values_[i]) return false;
  }
  return true;
}

bool Tensor::all_finite() const {
  for (double x : values_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

std::string Tensor::shape_str() const {
  std::string s = "(";
  for (size_t i = 0; i < shape_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape_[i]);
  }
  return s + ")";
}

Tensor tensor_matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() == 2 && b.rank() == 2) {
    const int m = a.dim(0), k = a.dim(1), k2 = b.dim(0), n = b.dim(1);
    if (k != k2) {
      fail(Err::ShapeMismatch, "matmul " + a.shape_str() + " x " + b.shape_str());
    }
    Tensor c({m, n});
    const double* ap = a.data();
    const double* bp = b.data();
    double* cp = c.data();
#pragma omp parallel for schedule(static) if (static_cast<int64_t>(m) * n * k > 262144)
    for (int i = 0; i < m; ++i) {
      for (int p = 0; p < k; ++p) {
        const double av = ap[static_cast<size_t>(i) * k + p];
        const double* brow = bp + static_cast<size_t>(p) * n;
        double* crow = cp + static_cast<size_t>(i) * n;
        for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
      }
    }
    return c;
  }
  if (a.rank() == 2 && b.rank() == 1) {
    const int m = a.dim(0), k = a.dim(1);
    if (k != b.dim(0)) {
      fail(Err::ShapeMismatch, "matvec " + a.shape_str() + " x " + b.shape_str());
    }
    Tensor c({m});
    for (int i = 0; i < m; ++i) {
      double acc = 0.0;
      const double* row = a.data() + static_cast<size_t>(i) * k;
      for (int p = 0; p < k; ++p) acc += row[p] * b[p];
      c[i] = acc;
    }
    return c;
  }
  if (a.rank() == 1 && b.rank() == 2) {
    const int k = a.dim(0), n = b.dim(1);
    if (k != b.dim(0)) {
      fail(Err::ShapeMismatch, "vecmat " + a.shape_str() + " x " + b.shape_str());
    }
    Tensor c({n});
    for (int p = 0; p < k; ++p) {
      const double av = a[p];
      const double* brow = b.data() + static_cast<size_t>(p) * n;
      for (int j = 0; j < n; ++j) c[j] += av * brow[j];
    }
    return c;
  }
  fail(Err::ShapeMismatch,
       "matmul ranks " + std::to_string(a.rank()) + "/" + std::to_string(b.rank()));
}

}  // namespace affectlab
