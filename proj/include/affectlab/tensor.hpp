// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace affectlab {

// Storage width of a tensor's values. Arithmetic always runs in double;
// f32 tensors keep every stored value exactly float-representable, which is
// what makes the float32 checkpoint payload round-trip bit for bit. Model
// verification (gradient checks, determinism contracts) runs with f64
// parameters.
enum class Precision { f32, f64 };

class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape, Precision prec = Precision::f64);
  static Tensor from_values(std::vector<int> shape, std::vector<double> values,
                            Precision prec = Precision::f64);
  static Tensor scalar(double v);

  int rank() const { return static_cast<int>(shape_.size()); }
  const std::vector<int>& shape() const { return shape_; }
  int dim(int i) const { return shape_[static_cast<size_t>(i)]; }
  int64_t size() const { return static_cast<int64_t>(values_.size()); }

  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  double& operator[](int64_t i) { return values_[static_cast<size_t>(i)]; }
  double operator[](int64_t i) const { return values_[static_cast<size_t>(i)]; }

  Precision precision() const { return prec_; }
  void set_precision(Precision p);
  // Rounds stored values through float when precision is f32.
  void quantize();

  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }
  bool bit_equal(const Tensor& o) const;
  bool all_finite() const;
  std::string shape_str() const;

 private:
  std::vector<int> shape_;
  std::vector<double> values_;
  Precision prec_ = Precision::f64;
};

// Product kernel shared by the tape and the benchmark. Shapes follow the
// usual 2D/1D combinations: (m,k)x(k,n), (m,k)x(k), (k)x(k,n). The 2D-by-2D
// case parallelizes over output rows; every output element is produced by
// exactly one thread, so results do not depend on the thread count.
Tensor tensor_matmul(const Tensor& a, const Tensor& b);

}  // namespace affectlab
