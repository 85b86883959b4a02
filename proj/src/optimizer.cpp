// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "affectlab/optimizer.hpp"

#include <cmath>

#include "affectlab/common.hpp"

namespace affectlab {

Optimizer::Optimizer(const std::vector<const Tensor*>& params, OptimizerConfig cfg)
    : cfg_(cfg) {
  m_.reserve(params.size());
  for (const Tensor* p : params) m_.emplace_back(p->shape());
  if (cfg_.algo == OptAlgo::adam) {
    v_.reserve(params.size());
    for (const Tensor* p : params) v_.emplace_back(p->shape());
  }
}

void Optimizer::step(std::vector<Tensor*>& params, const std::vector<Tensor>& grads,
                     const std::vector<char>& frozen) {
  if (params.size() != m_.size() || grads.size() != m_.size() ||
      frozen.size() != m_.size()) {
    fail(Err::ShapeMismatch, "optimizer step arity mismatch");
  }
  for (size_t i = 0; i < params.size(); ++i) {
    if (!params[i]->same_shape(m_[i]) || !grads[i].same_shape(m_[i])) {
      fail(Err::ShapeMismatch, "optimizer slot shape mismatch at index " +
                                   std::to_string(i));
    }
  }

  ++t_;
  if (cfg_.algo == OptAlgo::adam) {
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (size_t i = 0; i < params.size(); ++i) {
      if (frozen[i]) continue;
      Tensor& p = *params[i];
      const Tensor& g = grads[i];
      Tensor& m = m_[i];
      Tensor& v = v_[i];
      for (int64_t j = 0; j < p.size(); ++j) {
        m[j] = cfg_.beta1 * m[j] + (1.0 - cfg_.beta1) * g[j];
        v[j] = cfg_.beta2 * v[j] + (1.0 - cfg_.beta2) * g[j] * g[j];
        const double mhat = m[j] / bc1;
        const double vhat = v[j] / bc2;
        p[j] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
      }
      p.quantize();
    }
  } else {
    for (size_t i = 0; i < params.size(); ++i) {
      if (frozen[i]) continue;
      Tensor& p = *params[i];
      const Tensor& g = grads[i];
      Tensor& vel = m_[i];
      for (int64_t j = 0; j < p.size(); ++j) {
        vel[j] = cfg_.momentum * vel[j] + g[j];
        p[j] -= cfg_.lr * vel[j];
      }
      p.quantize();
    }
  }
}

}  // namespace affectlab
