// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "affectlab/tensor.hpp"

namespace affectlab {

enum class OptAlgo { sgd_momentum, adam };

struct OptimizerConfig {
  OptAlgo algo = OptAlgo::adam;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double momentum = 0.9;
};

// Per-parameter slots: a velocity buffer for SGD with momentum, first and
// second moments for Adam (bias-corrected). Slots stay in f64; parameters
// are re-quantized after each update according to their own precision.
class Optimizer {
 public:
  Optimizer(const std::vector<const Tensor*>& params, OptimizerConfig cfg);

  // frozen[i] true skips parameter i entirely (value and slots untouched).
  void step(std::vector<Tensor*>& params, const std::vector<Tensor>& grads,
            const std::vector<char>& frozen);

  int64_t steps() const { return t_; }
  const OptimizerConfig& config() const { return cfg_; }

 private:
  OptimizerConfig cfg_;
  int64_t t_ = 0;
  std::vector<Tensor> m_;  // velocity or first moment
  std::vector<Tensor> v_;  // second moment (adam only)
};

}  // namespace affectlab
