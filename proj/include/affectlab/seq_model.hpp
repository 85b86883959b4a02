// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "affectlab/autograd.hpp"
#include "affectlab/features.hpp"
#include "affectlab/optimizer.hpp"
#include "affectlab/tensor.hpp"

namespace affectlab {

struct Hyperparams {
  int input_dim = 0;
  int hidden_dim = 128;
  int encoder_layers = 2;
  int num_classes = 0;
  int attention_dim = 128;

  void validate() const;
  bool operator==(const Hyperparams&) const = default;
};

// Named parameters partitioned into the groups that selective transfer
// operates on:
//   encoder.l<i>.{W_z,U_z,b_z,W_r,U_r,b_r,W_h,U_h,b_h}
//     W_*: (hidden, layer_input)   U_*: (hidden, hidden)   b_*: (hidden)
//   attention.{W_enc,W_dec,v}
//     W_enc, W_dec: (hidden, attention_dim)   v: (attention_dim)
//   decoder.{W_s,b_s,W_o,b_o}
//     W_s: (hidden, hidden)  b_s: (hidden)
//     W_o: (num_classes, 2*hidden)  b_o: (num_classes)
// Initialization draws uniform(-k, k), k = 1/sqrt(fan_in) with fan_in the
// last dimension, consumed in exactly the order listed above.
struct ParameterSet {
  std::vector<std::pair<std::string, Tensor>> named;

  static std::vector<std::pair<std::string, std::vector<int>>> expected_shapes(
      const Hyperparams& hp);
  static ParameterSet init(const Hyperparams& hp, uint64_t seed,
                           Precision prec = Precision::f32);
  static std::string group_of(std::string_view name);

  Tensor* find(std::string_view name);
  const Tensor* find(std::string_view name) const;
  bool bit_equal(const ParameterSet& o) const;
  void set_precision(Precision p);
  void validate_shapes(const Hyperparams& hp) const;
};

// Stacked unidirectional GRU over the feature frames; returns the top
// layer's state sequence, one row per frame.
Tensor encode(const FeatureSequence& features, const ParameterSet& params,
              const Hyperparams& hp);

// Additive attention: score_t = v . tanh(H_t W_enc + s W_dec), weights are
// the softmax of the scores, context the weighted sum of H rows.
std::pair<Tensor, Tensor> attend(const Tensor& H, const Tensor& s,
                                 const ParameterSet& params);

// s0 = tanh(W_s H_T + b_s); logits = W_o [s0; context] + b_o; softmax.
Tensor classify(const FeatureSequence& features, const ParameterSet& params,
                const Hyperparams& hp);

struct SampleRef {
  const FeatureSequence* features = nullptr;
  int label = -1;
  int stable_id = 0;  // dataset index; fixes the gradient summation order
};

struct BatchResult {
  double mean_loss = 0.0;
  std::vector<Tensor> grads;  // aligned with ParameterSet::named
  int correct = 0;
};

// Mean cross-entropy over the batch plus gradients for every parameter.
// Per-sample contributions are combined in stable_id order, so the result
// is bit-identical under any permutation of the batch and any thread count.
BatchResult loss_and_grads(const std::vector<SampleRef>& batch,
                           const ParameterSet& params, const Hyperparams& hp,
                           int threads = 1);

struct TrainConfig {
  int epochs = 100;
  int batch_size = 16;
  double lr = 1e-3;
  uint64_t seed = 0;
  std::set<std::string> freeze_groups;
  OptAlgo algo = OptAlgo::adam;
  double momentum = 0.9;
  double clip_norm = 5.0;  // global L2 clip over the updated gradients
  Precision precision = Precision::f32;
  int threads = 1;
};

struct TrainingLogRow {
  int epoch = 0;
  double mean_loss = 0.0;
  double train_accuracy = 0.0;
  double wall_seconds = 0.0;
};

struct TrainingLog {
  std::vector<TrainingLogRow> rows;
  // Line-oriented: epoch, mean_loss, train_accuracy, wall_seconds.
  void save(const std::string& path) const;
};

struct Sample {
  FeatureSequence features;
  int label = -1;
};

// Shuffles per epoch with the seeded generator, buckets utterances of
// similar length into batches, and leaves frozen groups bit-untouched.
ParameterSet train(const std::vector<Sample>& dataset, const Hyperparams& hp,
                   const TrainConfig& cfg, const ParameterSet* initial = nullptr,
                   TrainingLog* log = nullptr);

int argmax_class(const Tensor& probs);

}  // namespace affectlab
