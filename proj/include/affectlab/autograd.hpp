// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "affectlab/tensor.hpp"

namespace affectlab {

// Reverse-mode tape. Operations are recorded in execution order, which is a
// topological order by construction; backward walks the records in exact
// reverse and accumulates gradients additively across fan-out. A tape is
// single-threaded; distinct tapes may live on distinct threads.
class Tape {
 public:
  // Registers an input or parameter value.
  int leaf(Tensor t);

  int matmul(int a, int b);
  // Shape of b must equal a trailing suffix of a's shape (broadcast over
  // leading axes); the gradient of b sums over those axes.
  int add(int a, int b);
  int mul(int a, int b);  // elementwise, equal shapes
  int tanh_op(int a);
  int sigmoid(int a);
  int softmax(int a);  // last axis, max-subtracted
  int concat(int a, int b);            // last axis
  int slice(int a, int lo, int hi);    // last axis, [lo, hi)
  int row(int a, int r);               // row of a 2-D tensor
  int stack_rows(const std::vector<int>& rows);  // 1-D nodes -> 2-D
  int cross_entropy(int logits, int class_index);  // -log softmax[class]
  int scale(int a, double c);
  int add_scalar(int a, double c);

  const Tensor& value(int id) const { return values_[static_cast<size_t>(id)]; }
  int node_count() const { return static_cast<int>(values_.size()); }

  // Gradients for every node id, zero for nodes the loss does not reach.
  // The loss must be scalar.
  std::vector<Tensor> backward(int loss_id) const;

 private:
  enum class Op {
    leaf, matmul, add, mul, tanh, sigmoid, softmax, concat, slice, row,
    stack, cross_entropy, scale, add_scalar,
  };
  struct Rec {
    Op op;
    std::vector<int> in;
    int out = -1;
    int i0 = 0, i1 = 0;
    double c = 0.0;
  };

  int push(Tensor value, Rec rec);
  const Tensor& val(int id) const { return values_[static_cast<size_t>(id)]; }

  std::vector<Tensor> values_;
  std::vector<Rec> recs_;
};

}  // namespace affectlab
