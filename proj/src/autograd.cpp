// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "affectlab/autograd.hpp"

#include <algorithm>
#include <cmath>

#include "affectlab/common.hpp"

namespace affectlab {

namespace {

// Rows/row-length view of the last axis.
void last_axis(const Tensor& t, int64_t& rows, int64_t& len) {
  len = t.dim(t.rank() - 1);
  rows = t.size() / len;
}

void check_id(int id, int count) {
  if (id < 0 || id >= count) fail(Err::IndexOutOfRange, "bad tape node id");
}

}  // namespace

int Tape::push(Tensor value, Rec rec) {
  const int id = static_cast<int>(values_.size());
  rec.out = id;
  values_.push_back(std::move(value));
  recs_.push_back(std::move(rec));
  return id;
}

int Tape::leaf(Tensor t) {
  return push(std::move(t), Rec{Op::leaf, {}, -1, 0, 0, 0.0});
}

int Tape::matmul(int a, int b) {
  check_id(a, node_count());
  check_id(b, node_count());
  return push(tensor_matmul(val(a), val(b)), Rec{Op::matmul, {a, b}, -1, 0, 0, 0.0});
}

int Tape::add(int a, int b) {
  check_id(a, node_count());
  check_id(b, node_count());
  const Tensor& x = val(a);
  const Tensor& y = val(b);
  if (y.rank() > x.rank()) fail(Err::ShapeMismatch, "add: rank of b exceeds a");
  for (int i = 0; i < y.rank(); ++i) {
    if (y.dim(y.rank() - 1 - i) != x.dim(x.rank() - 1 - i)) {
      fail(Err::ShapeMismatch, "add " + x.shape_str() + " + " + y.shape_str());
    }
  }
  Tensor out(x.shape());
  const int64_t len = y.size();
  for (int64_t i = 0; i < x.size(); ++i) out[i] = x[i] + y[i % len];
  return push(std::move(out), Rec{Op::add, {a, b}, -1, 0, 0, 0.0});
}

int Tape::mul(int a, int b) {
  check_id(a, node_count());
  check_id(b, node_count());
  const Tensor& x = val(a);
  const Tensor& y = val(b);
  if (!x.same_shape(y)) {
    fail(Err::ShapeMismatch, "mul " + x.shape_str() + " * " + y.shape_str());
  }
  Tensor out(x.shape());
  for (int64_t i = 0; i < x.size(); ++i) out[i] = x[i] * y[i];
  return push(std::move(out), Rec{Op::mul, {a, b}, -1, 0, 0, 0.0});
}

int Tape::tanh_op(int a) {
  check_id(a, node_count());
  Tensor out(val(a).shape());
  for (int64_t i = 0; i < out.size(); ++i) out[i] = std::tanh(val(a)[i]);
  return push(std::move(out), Rec{Op::tanh, {a}, -1, 0, 0, 0.0});
}

int Tape::sigmoid(int a) {
  check_id(a, node_count());
  Tensor out(val(a).shape());
  for (int64_t i = 0; i < out.size(); ++i) {
    out[i] = 1.0 / (1.0 + std::exp(-val(a)[i]));
  }
  return push(std::move(out), Rec{Op::sigmoid, {a}, -1, 0, 0, 0.0});
}

int Tape::softmax(int a) {
  check_id(a, node_count());
  const Tensor& x = val(a);
  Tensor out(x.shape());
  int64_t rows, len;
  last_axis(x, rows, len);
  for (int64_t r = 0; r < rows; ++r) {
    const double* xi = x.data() + r * len;
    double* oi = out.data() + r * len;
    double mx = xi[0];
    for (int64_t i = 1; i < len; ++i) mx = std::max(mx, xi[i]);
    double sum = 0.0;
    for (int64_t i = 0; i < len; ++i) {
      oi[i] = std::exp(xi[i] - mx);
      sum += oi[i];
    }
    for (int64_t i = 0; i < len; ++i) oi[i] /= sum;
  }
  return push(std::move(out), Rec{Op::softmax, {a}, -1, 0, 0, 0.0});
}

int Tape::concat(int a, int b) {
  check_id(a, node_count());
  check_id(b, node_count());
  const Tensor& x = val(a);
  const Tensor& y = val(b);
  if (x.rank() != y.rank() || x.rank() < 1 || x.rank() > 2) {
    fail(Err::ShapeMismatch, "concat ranks");
  }
  if (x.rank() == 1) {
    Tensor out({x.dim(0) + y.dim(0)});
    std::copy(x.data(), x.data() + x.size(), out.data());
    std::copy(y.data(), y.data() + y.size(), out.data() + x.size());
    return push(std::move(out), Rec{Op::concat, {a, b}, -1, 0, 0, 0.0});
  }
  if (x.dim(0) != y.dim(0)) fail(Err::ShapeMismatch, "concat row counts differ");
  const int rows = x.dim(0), ca = x.dim(1), cb = y.dim(1);
  Tensor out({rows, ca + cb});
  for (int r = 0; r < rows; ++r) {
    std::copy(x.data() + static_cast<size_t>(r) * ca,
              x.data() + static_cast<size_t>(r + 1) * ca,
              out.data() + static_cast<size_t>(r) * (ca + cb));
    std::copy(y.data() + static_cast<size_t>(r) * cb,
              y.data() + static_cast<size_t>(r + 1) * cb,
              out.data() + static_cast<size_t>(r) * (ca + cb) + ca);
  }
  return push(std::move(out), Rec{Op::concat, {a, b}, -1, 0, 0, 0.0});
}

int Tape::slice(int a, int lo, int hi) {
  check_id(a, node_count());
  const Tensor& x = val(a);
  const int last = x.dim(x.rank() - 1);
  if (lo < 0 || hi > last || lo >= hi) {
    fail(Err::IndexOutOfRange, "slice [" + std::to_string(lo) + "," +
                                   std::to_string(hi) + ") of " + x.shape_str());
  }
  int64_t rows, len;
  last_axis(x, rows, len);
  std::vector<int> shape = x.shape();
  shape.back() = hi - lo;
  Tensor out(shape);
  for (int64_t r = 0; r < rows; ++r) {
    std::copy(x.data() + r * len + lo, x.data() + r * len + hi,
              out.data() + r * (hi - lo));
  }
  return push(std::move(out), Rec{Op::slice, {a}, -1, lo, hi, 0.0});
}

int Tape::row(int a, int r) {
  check_id(a, node_count());
  const Tensor& x = val(a);
  if (x.rank() != 2) fail(Err::ShapeMismatch, "row of non-matrix");
  if (r < 0 || r >= x.dim(0)) fail(Err::IndexOutOfRange, "row index");
  const int cols = x.dim(1);
  Tensor out({cols});
  std::copy(x.data() + static_cast<size_t>(r) * cols,
            x.data() + static_cast<size_t>(r + 1) * cols, out.data());
  return push(std::move(out), Rec{Op::row, {a}, -1, r, 0, 0.0});
}

int Tape::stack_rows(const std::vector<int>& rows) {
  if (rows.empty()) fail(Err::ShapeMismatch, "stack of zero rows");
  const int len = val(rows[0]).dim(0);
  for (int id : rows) {
    check_id(id, node_count());
    if (val(id).rank() != 1 || val(id).dim(0) != len) {
      fail(Err::ShapeMismatch, "stack rows must be equal-length vectors");
    }
  }
  Tensor out({static_cast<int>(rows.size()), len});
  for (size_t r = 0; r < rows.size(); ++r) {
    std::copy(val(rows[r]).data(), val(rows[r]).data() + len,
              out.data() + r * static_cast<size_t>(len));
  }
  return push(std::move(out), Rec{Op::stack, rows, -1, 0, 0, 0.0});
}

int Tape::cross_entropy(int logits, int class_index) {
  check_id(logits, node_count());
  const Tensor& x = val(logits);
  if (x.rank() != 1) fail(Err::ShapeMismatch, "cross_entropy expects a logit vector");
  if (class_index < 0 || class_index >= x.dim(0)) {
    fail(Err::IndexOutOfRange, "class index " + std::to_string(class_index) +
                                   " for " + std::to_string(x.dim(0)) + " classes");
  }
  double mx = x[0];
  for (int64_t i = 1; i < x.size(); ++i) mx = std::max(mx, x[i]);
  double sum = 0.0;
  for (int64_t i = 0; i < x.size(); ++i) sum += std::exp(x[i] - mx);
  const double loss = mx + std::log(sum) - x[class_index];
  return push(Tensor::scalar(loss),
              Rec{Op::cross_entropy, {logits}, -1, class_index, 0, 0.0});
}

int Tape::scale(int a, double c) {
  check_id(a, node_count());
  Tensor out(val(a).shape());
  for (int64_t i = 0; i < out.size(); ++i) out[i] = val(a)[i] * c;
  return push(std::move(out), Rec{Op::scale, {a}, -1, 0, 0, c});
}

int Tape::add_scalar(int a, double c) {
  check_id(a, node_count());
  Tensor out(val(a).shape());
  for (int64_t i = 0; i < out.size(); ++i) out[i] = val(a)[i] + c;
  return push(std::move(out), Rec{Op::add_scalar, {a}, -1, 0, 0, c});
}

std::vector<Tensor> Tape::backward(int loss_id) const {
  check_id(loss_id, node_count());
  if (values_[static_cast<size_t>(loss_id)].size() != 1) {
    fail(Err::NonScalarLoss, "loss node has shape " +
                                 values_[static_cast<size_t>(loss_id)].shape_str());
  }

  std::vector<Tensor> grads(values_.size());
  for (size_t i = 0; i < values_.size(); ++i) grads[i] = Tensor(values_[i].shape());
  grads[static_cast<size_t>(loss_id)][0] = 1.0;

  for (int64_t ri = static_cast<int64_t>(recs_.size()) - 1; ri >= 0; --ri) {
    const Rec& rec = recs_[static_cast<size_t>(ri)];
    if (rec.out > loss_id) continue;  // cannot feed the loss
    const Tensor& g = grads[static_cast<size_t>(rec.out)];
    const Tensor& y = values_[static_cast<size_t>(rec.out)];

    switch (rec.op) {
      case Op::leaf:
        break;
      case Op::matmul: {
        const Tensor& A = val(rec.in[0]);
        const Tensor& B = val(rec.in[1]);
        Tensor& dA = grads[static_cast<size_t>(rec.in[0])];
        Tensor& dB = grads[static_cast<size_t>(rec.in[1])];
        if (A.rank() == 2 && B.rank() == 2) {
          const int m = A.dim(0), k = A.dim(1), n = B.dim(1);
          for (int i = 0; i < m; ++i) {
            for (int j = 0; j < n; ++j) {
              const double gij = g[static_cast<int64_t>(i) * n + j];
              if (gij == 0.0) continue;
              for (int p = 0; p < k; ++p) {
                dA[static_cast<int64_t>(i) * k + p] += gij * B[static_cast<int64_t>(p) * n + j];
                dB[static_cast<int64_t>(p) * n + j] += gij * A[static_cast<int64_t>(i) * k + p];
              }
            }
          }
        } else if (A.rank() == 2 && B.rank() == 1) {
          const int m = A.dim(0), k = A.dim(1);
          for (int i = 0; i < m; ++i) {
            const double gi = g[i];
            if (gi == 0.0) continue;
            for (int p = 0; p < k; ++p) {
              dA[static_cast<int64_t>(i) * k + p] += gi * B[p];
              dB[p] += gi * A[static_cast<int64_t>(i) * k + p];
            }
          }
        } else {  // 1-D x 2-D
          const int k = A.dim(0), n = B.dim(1);
          for (int j = 0; j < n; ++j) {
            const double gj = g[j];
            if (gj == 0.0) continue;
            for (int p = 0; p < k; ++p) {
              dA[p] += gj * B[static_cast<int64_t>(p) * n + j];
              dB[static_cast<int64_t>(p) * n + j] += gj * A[p];
            }
          }
        }
        break;
      }
      case Op::add: {
        Tensor& dA = grads[static_cast<size_t>(rec.in[0])];
        Tensor& dB = grads[static_cast<size_t>(rec.in[1])];
        const int64_t len = dB.size();
        for (int64_t i = 0; i < g.size(); ++i) {
          dA[i] += g[i];
          dB[i % len] += g[i];
        }
        break;
      }
      case Op::mul: {
        const Tensor& A = val(rec.in[0]);
        const Tensor& B = val(rec.in[1]);
        Tensor& dA = grads[static_cast<size_t>(rec.in[0])];
        Tensor& dB = grads[static_cast<size_t>(rec.in[1])];
        for (int64_t i = 0; i < g.size(); ++i) {
          dA[i] += g[i] * B[i];
          dB[i] += g[i] * A[i];
        }
        break;
      }
      case Op::tanh: {
        Tensor& dA = grads[static_cast<size_t>(rec.in[0])];
        for (int64_t i = 0; i < g.size(); ++i) dA[i] += g[i] * (1.0 - y[i] * y[i]);
        break;
      }
      case Op::sigmoid: {
        Tensor& dA = grads[static_cast<size_t>(rec.in[0])];
        for (int64_t i = 0; i < g.size(); ++i) dA[i] += g[i] * y[i] * (1.0 - y[i]);
        break;
      }
      case Op::softmax: {
        Tensor& dA = grads[static_cast<size_t>(rec.in[0])];
        int64_t rows, len;
        last_axis(y, rows, len);
        for (int64_t r = 0; r < rows; ++r) {
          const double* yr = y.data() + r * len;
          const double* gr = g.data() + r * len;
          double dot = 0.0;
          for (int64_t i = 0; i < len; ++i) dot += yr[i] * gr[i];
          for (int64_t i = 0; i < len; ++i) {
            dA[r * len + i] += yr[i] * (gr[i] - dot);
          }
        }
        break;
      }
      case Op::concat: {
        const Tensor& A = val(rec.in[0]);
        const Tensor& B = val(rec.in[1]);
        Tensor& dA = grads[static_cast<size_t>(rec.in[0])];
        Tensor& dB = grads[static_cast<size_t>(rec.in[1])];
        if (A.rank() == 1) {
          for (int64_t i = 0; i < A.size(); ++i) dA[i] += g[i];
          for (int64_t i = 0; i < B.size(); ++i) dB[i] += g[A.size() + i];
        } else {
          const int rows = A.dim(0), ca = A.dim(1), cb = B.dim(1);
          for (int r = 0; r < rows; ++r) {
            for (int i = 0; i < ca; ++i) {
              dA[static_cast<int64_t>(r) * ca + i] += g[static_cast<int64_t>(r) * (ca + cb) + i];
            }
            for (int i = 0; i < cb; ++i) {
              dB[static_cast<int64_t>(r) * cb + i] += g[static_cast<int64_t>(r) * (ca + cb) + ca + i];
            }
          }
        }
        break;
      }
      case Op::slice: {
        Tensor& dA = grads[static_cast<size_t>(rec.in[0])];
        const Tensor& A = val(rec.in[0]);
        int64_t rows, len;
        last_axis(A, rows, len);
        const int w = rec.i1 - rec.i0;
        for (int64_t r = 0; r < rows; ++r) {
          for (int i = 0; i < w; ++i) dA[r * len + rec.i0 + i] += g[r * w + i];
        }
        break;
      }
      case Op::row: {
        Tensor& dA = grads[static_cast<size_t>(rec.in[0])];
        const int cols = val(rec.in[0]).dim(1);
        for (int i = 0; i < cols; ++i) {
          dA[static_cast<int64_t>(rec.i0) * cols + i] += g[i];
        }
        break;
      }
      case Op::stack: {
        const int len = y.dim(1);
        for (size_t r = 0; r < rec.in.size(); ++r) {
          Tensor& dr = grads[static_cast<size_t>(rec.in[r])];
          for (int i = 0; i < len; ++i) dr[i] += g[static_cast<int64_t>(r) * len + i];
        }
        break;
      }
      case Op::cross_entropy: {
        const Tensor& logits = val(rec.in[0]);
        Tensor& dA = grads[static_cast<size_t>(rec.in[0])];
        double mx = logits[0];
        for (int64_t i = 1; i < logits.size(); ++i) mx = std::max(mx, logits[i]);
        double sum = 0.0;
        for (int64_t i = 0; i < logits.size(); ++i) sum += std::exp(logits[i] - mx);
        const double g0 = g[0];
        for (int64_t i = 0; i < logits.size(); ++i) {
          const double p = std::exp(logits[i] - mx) / sum;
          dA[i] += g0 * (p - (i == rec.i0 ? 1.0 : 0.0));
        }
        break;
      }
      case Op::scale: {
        Tensor& dA = grads[static_cast<size_t>(rec.in[0])];
        for (int64_t i = 0; i < g.size(); ++i) dA[i] += g[i] * rec.c;
        break;
      }
      case Op::add_scalar: {
        Tensor& dA = grads[static_cast<size_t>(rec.in[0])];
        for (int64_t i = 0; i < g.size(); ++i) dA[i] += g[i];
        break;
      }
    }
  }
  return grads;
}

}  // namespace affectlab
