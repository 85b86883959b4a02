// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "affectlab/seq_model.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_map>

#include "affectlab/common.hpp"
#include "affectlab/rng.hpp"

namespace affectlab {

void Hyperparams::validate() const {
  if (input_dim <= 0 || hidden_dim <= 0 || encoder_layers <= 0 ||
      attention_dim <= 0) {
    fail(Err::ConfigInvalid, "hyperparameters must be positive");
  }
  if (num_classes < 2) fail(Err::ConfigInvalid, "num_classes must be >= 2");
}

std::vector<std::pair<std::string, std::vector<int>>> ParameterSet::expected_shapes(
    const Hyperparams& hp) {
  const int h = hp.hidden_dim;
  const int a = hp.attention_dim;
  std::vector<std::pair<std::string, std::vector<int>>> out;
  for (int l = 0; l < hp.encoder_layers; ++l) {
    const int d = (l == 0) ? hp.input_dim : h;
    const std::string p = "encoder.l" + std::to_string(l) + ".";
    for (const char* gate : {"z", "r", "h"}) {
      out.emplace_back(p + "W_" + gate, std::vector<int>{h, d});
      out.emplace_back(p + "U_" + gate, std::vector<int>{h, h});
      out.emplace_back(p + "b_" + gate, std::vector<int>{h});
    }
  }
  out.emplace_back("attention.W_enc", std::vector<int>{h, a});
  out.emplace_back("attention.W_dec", std::vector<int>{h, a});
  out.emplace_back("attention.v", std::vector<int>{a});
  out.emplace_back("decoder.W_s", std::vector<int>{h, h});
  out.emplace_back("decoder.b_s", std::vector<int>{h});
  out.emplace_back("decoder.W_o", std::vector<int>{hp.num_classes, 2 * h});
  out.emplace_back("decoder.b_o", std::vector<int>{hp.num_classes});
  return out;
}

ParameterSet ParameterSet::init(const Hyperparams& hp, uint64_t seed,
                                Precision prec) {
  hp.validate();
  Xoshiro256 rng(seed);
  ParameterSet ps;
  for (auto& [name, shape] : expected_shapes(hp)) {
    Tensor t(shape, prec);
    const double k = 1.0 / std::sqrt(static_cast<double>(shape.back()));
    for (int64_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-k, k);
    t.quantize();
    ps.named.emplace_back(name, std::move(t));
  }
  return ps;
}

std::string ParameterSet::group_of(std::string_view name) {
  const size_t dot = name.find('.');
  std::string g(name.substr(0, dot));
  if (g != "encoder" && g != "attention" && g != "decoder") {
    fail(Err::GroupShapeMismatch, "tensor '" + std::string(name) +
                                      "' belongs to no known group");
  }
  return g;
}

Tensor* ParameterSet::find(std::string_view name) {
  for (auto& [n, t] : named) {
    if (n == name) return &t;
  }
  return nullptr;
}

const Tensor* ParameterSet::find(std::string_view name) const {
  for (const auto& [n, t] : named) {
    if (n == name) return &t;
  }
  return nullptr;
}

bool ParameterSet::bit_equal(const ParameterSet& o) const {
  if (named.size() != o.named.size()) return false;
  for (size_t i = 0; i < named.size(); ++i) {
    if (named[i].first != o.named[i].first) return false;
    if (!named[i].second.bit_equal(o.named[i].second)) return false;
  }
  return true;
}

void ParameterSet::set_precision(Precision p) {
  for (auto& [n, t] : named) t.set_precision(p);
}

void ParameterSet::validate_shapes(const Hyperparams& hp) const {
  const auto expected = expected_shapes(hp);
  if (expected.size() != named.size()) {
    fail(Err::ShapeMismatch, "parameter count mismatch");
  }
  for (size_t i = 0; i < expected.size(); ++i) {
    if (named[i].first != expected[i].first ||
        named[i].second.shape() != expected[i].second) {
      fail(Err::ShapeMismatch, "parameter '" + named[i].first +
                                   "' has shape " + named[i].second.shape_str());
    }
  }
}

namespace {

// Full classifier graph on one tape. Parameter leaves are created in
// ParameterSet order so gradient indices line up.
struct Graph {
  Tape tape;
  std::vector<int> param_ids;
  int H = -1;       // encoder state sequence
  int last_h = -1;  // H_T
  int s0 = -1;
  int context = -1;
  int att_weights = -1;
  int logits = -1;
  int probs = -1;
};

Tensor features_tensor(const FeatureSequence& f) {
  std::vector<double> v(f.values);
  return Tensor::from_values({f.frames, f.dim}, std::move(v));
}

void build_encoder(Graph& g, const ParameterSet& params, const Hyperparams& hp,
                   int input_id) {
  Tape& tp = g.tape;
  std::unordered_map<std::string, int> id_of;
  for (size_t i = 0; i < params.named.size(); ++i) {
    id_of[params.named[i].first] = g.param_ids[i];
  }
  const int T = tp.value(input_id).dim(0);

  std::vector<int> prev_layer(T);
  for (int t = 0; t < T; ++t) prev_layer[t] = tp.row(input_id, t);

  std::vector<int> states;
  for (int l = 0; l < hp.encoder_layers; ++l) {
    const std::string p = "encoder.l" + std::to_string(l) + ".";
    const int Wz = id_of.at(p + "W_z"), Uz = id_of.at(p + "U_z"), bz = id_of.at(p + "b_z");
    const int Wr = id_of.at(p + "W_r"), Ur = id_of.at(p + "U_r"), br = id_of.at(p + "b_r");
    const int Wh = id_of.at(p + "W_h"), Uh = id_of.at(p + "U_h"), bh = id_of.at(p + "b_h");

    states.clear();
    int h = -1;  // zero initial state handled by dropping the U terms at t=0
    for (int t = 0; t < T; ++t) {
      const int x = prev_layer[t];
      int z, hc;
      if (h < 0) {
        z = tp.sigmoid(tp.add(tp.matmul(Wz, x), bz));
        hc = tp.tanh_op(tp.add(tp.matmul(Wh, x), bh));
        h = tp.mul(z, hc);
      } else {
        z = tp.sigmoid(tp.add(tp.add(tp.matmul(Wz, x), tp.matmul(Uz, h)), bz));
        const int r = tp.sigmoid(tp.add(tp.add(tp.matmul(Wr, x), tp.matmul(Ur, h)), br));
        hc = tp.tanh_op(tp.add(tp.add(tp.matmul(Wh, x), tp.matmul(Uh, tp.mul(r, h))), bh));
        const int keep = tp.mul(tp.add_scalar(tp.scale(z, -1.0), 1.0), h);
        h = tp.add(keep, tp.mul(z, hc));
      }
      states.push_back(h);
    }
    prev_layer = states;
  }
  g.H = tp.stack_rows(states);
  g.last_h = states.back();
}

void build_attention(Graph& g, const ParameterSet& params, int s_id) {
  Tape& tp = g.tape;
  std::unordered_map<std::string, int> id_of;
  for (size_t i = 0; i < params.named.size(); ++i) {
    id_of[params.named[i].first] = g.param_ids[i];
  }
  const int P = tp.matmul(g.H, id_of.at("attention.W_enc"));       // T x a
  const int q = tp.matmul(s_id, id_of.at("attention.W_dec"));      // a
  const int Z = tp.tanh_op(tp.add(P, q));
  const int scores = tp.matmul(Z, id_of.at("attention.v"));        // T
  g.att_weights = tp.softmax(scores);
  g.context = tp.matmul(g.att_weights, g.H);                       // h
}

Graph build_classifier(const FeatureSequence& f, const ParameterSet& params,
                       const Hyperparams& hp) {
  if (f.dim != hp.input_dim) {
    fail(Err::DimensionMismatch, "feature dim " + std::to_string(f.dim) +
                                     " vs input_dim " + std::to_string(hp.input_dim));
  }
  Graph g;
  for (const auto& [name, t] : params.named) g.param_ids.push_back(g.tape.leaf(t));
  const int input_id = g.tape.leaf(features_tensor(f));
  build_encoder(g, params, hp, input_id);

  std::unordered_map<std::string, int> id_of;
  for (size_t i = 0; i < params.named.size(); ++i) {
    id_of[params.named[i].first] = g.param_ids[i];
  }
  Tape& tp = g.tape;
  g.s0 = tp.tanh_op(tp.add(tp.matmul(id_of.at("decoder.W_s"), g.last_h),
                           id_of.at("decoder.b_s")));
  build_attention(g, params, g.s0);
  const int cat = tp.concat(g.s0, g.context);
  g.logits = tp.add(tp.matmul(id_of.at("decoder.W_o"), cat), id_of.at("decoder.b_o"));
  g.probs = tp.softmax(g.logits);
  return g;
}

}  // namespace

Tensor encode(const FeatureSequence& features, const ParameterSet& params,
              const Hyperparams& hp) {
  if (features.dim != hp.input_dim) {
    fail(Err::DimensionMismatch, "feature dim vs input_dim");
  }
  Graph g;
  for (const auto& [name, t] : params.named) g.param_ids.push_back(g.tape.leaf(t));
  const int input_id = g.tape.leaf(features_tensor(features));
  build_encoder(g, params, hp, input_id);
  return g.tape.value(g.H);
}

std::pair<Tensor, Tensor> attend(const Tensor& H, const Tensor& s,
                                 const ParameterSet& params) {
  const Tensor* W_enc = params.find("attention.W_enc");
  const Tensor* W_dec = params.find("attention.W_dec");
  const Tensor* v = params.find("attention.v");
  if (!W_enc || !W_dec || !v) fail(Err::DimensionMismatch, "missing attention params");
  if (H.rank() != 2 || s.rank() != 1 || H.dim(1) != s.dim(0) ||
      H.dim(1) != W_enc->dim(0)) {
    fail(Err::DimensionMismatch, "attend shapes H=" + H.shape_str() +
                                     " s=" + s.shape_str());
  }
  Tape tp;
  const int Hid = tp.leaf(H);
  const int sid = tp.leaf(s);
  const int P = tp.matmul(Hid, tp.leaf(*W_enc));
  const int q = tp.matmul(sid, tp.leaf(*W_dec));
  const int Z = tp.tanh_op(tp.add(P, q));
  const int scores = tp.matmul(Z, tp.leaf(*v));
  const int w = tp.softmax(scores);
  const int ctx = tp.matmul(w, Hid);
  return {tp.value(ctx), tp.value(w)};
}

Tensor classify(const FeatureSequence& features, const ParameterSet& params,
                const Hyperparams& hp) {
  Graph g = build_classifier(features, params, hp);
  return g.tape.value(g.probs);
}

int argmax_class(const Tensor& probs) {
  int best = 0;
  for (int64_t i = 1; i < probs.size(); ++i) {
    if (probs[i] > probs[best]) best = static_cast<int>(i);
  }
  return best;  // ties keep the lowest index
}

BatchResult loss_and_grads(const std::vector<SampleRef>& batch,
                           const ParameterSet& params, const Hyperparams& hp,
                           int threads) {
  if (batch.empty()) fail(Err::EmptyBatch, "loss_and_grads on empty batch");
  for (const SampleRef& s : batch) {
    if (s.label < 0 || s.label >= hp.num_classes) {
      fail(Err::LabelOutOfRange, "label " + std::to_string(s.label) + " for " +
                                     std::to_string(hp.num_classes) + " classes");
    }
  }

  // Canonical processing order, independent of how the batch was assembled.
  std::vector<const SampleRef*> order;
  order.reserve(batch.size());
  for (const SampleRef& s : batch) order.push_back(&s);
  std::sort(order.begin(), order.end(),
            [](const SampleRef* a, const SampleRef* b) {
              return a->stable_id < b->stable_id;
            });

  const int B = static_cast<int>(order.size());
  std::vector<double> losses(B);
  std::vector<int> predictions(B);
  std::vector<std::vector<Tensor>> sample_grads(B);
  std::exception_ptr err;
  (void)threads;  // consumed by the pragma only

#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, threads)) \
    if (threads > 1)
  for (int i = 0; i < B; ++i) {
    try {
      const SampleRef& s = *order[i];
      Graph g = build_classifier(*s.features, params, hp);
      const int loss_id = g.tape.cross_entropy(g.logits, s.label);
      losses[i] = g.tape.value(loss_id)[0];
      predictions[i] = argmax_class(g.tape.value(g.probs));
      std::vector<Tensor> grads = g.tape.backward(loss_id);
      std::vector<Tensor> picked;
      picked.reserve(g.param_ids.size());
      for (int id : g.param_ids) picked.push_back(std::move(grads[id]));
      sample_grads[i] = std::move(picked);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);

  BatchResult out;
  out.grads.reserve(params.named.size());
  for (const auto& [name, t] : params.named) out.grads.emplace_back(t.shape());

  const double inv = 1.0 / B;
  double loss_sum = 0.0;
  for (int i = 0; i < B; ++i) {
    loss_sum += losses[i];
    if (predictions[i] == order[i]->label) out.correct++;
    for (size_t p = 0; p < out.grads.size(); ++p) {
      Tensor& acc = out.grads[p];
      const Tensor& sg = sample_grads[i][p];
      for (int64_t j = 0; j < acc.size(); ++j) acc[j] += sg[j];
    }
  }
  for (Tensor& gt : out.grads) {
    for (int64_t j = 0; j < gt.size(); ++j) gt[j] *= inv;
  }
  out.mean_loss = loss_sum * inv;
  return out;
}

void TrainingLog::save(const std::string& path) const {
  std::ofstream f(path);
  if (!f) fail(Err::IoError, "cannot write " + path);
  f << "epoch\tmean_loss\ttrain_accuracy\twall_seconds\n";
  char buf[128];
  for (const TrainingLogRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d\t%.9g\t%.9g\t%.3f\n", r.epoch,
                  r.mean_loss, r.train_accuracy, r.wall_seconds);
    f << buf;
  }
}

ParameterSet train(const std::vector<Sample>& dataset, const Hyperparams& hp,
                   const TrainConfig& cfg, const ParameterSet* initial,
                   TrainingLog* log) {
  hp.validate();
  if (dataset.empty()) fail(Err::EmptyDataset, "train on empty dataset");
  for (const Sample& s : dataset) {
    if (s.label < 0 || s.label >= hp.num_classes) {
      fail(Err::LabelOutOfRange, "dataset label " + std::to_string(s.label));
    }
  }

  ParameterSet params;
  if (initial) {
    initial->validate_shapes(hp);
    params = *initial;
    params.set_precision(cfg.precision);
  } else {
    params = ParameterSet::init(hp, mix_seed(cfg.seed, 0), cfg.precision);
  }

  std::vector<Tensor*> param_ptrs;
  std::vector<const Tensor*> param_cptrs;
  std::vector<char> frozen;
  for (auto& [name, t] : params.named) {
    param_ptrs.push_back(&t);
    param_cptrs.push_back(&t);
    frozen.push_back(cfg.freeze_groups.count(ParameterSet::group_of(name)) ? 1 : 0);
  }

  OptimizerConfig ocfg;
  ocfg.algo = cfg.algo;
  ocfg.lr = cfg.lr;
  ocfg.momentum = cfg.momentum;
  Optimizer opt(param_cptrs, ocfg);

  Xoshiro256 shuffler(mix_seed(cfg.seed, 1));
  const int N = static_cast<int>(dataset.size());
  const int bs = std::max(1, cfg.batch_size);

  const auto t_start = std::chrono::steady_clock::now();
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::vector<int> order(N);
    std::iota(order.begin(), order.end(), 0);
    shuffler.shuffle(order);
    // Bucket similar lengths so a batch never mixes extremes; the shuffle
    // above still varies composition between epochs.
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return dataset[a].features.frames < dataset[b].features.frames;
    });
    std::vector<std::vector<int>> batches;
    for (int i = 0; i < N; i += bs) {
      batches.emplace_back(order.begin() + i,
                           order.begin() + std::min(N, i + bs));
    }
    shuffler.shuffle(batches);

    double loss_sum = 0.0;
    int correct = 0;
    for (const std::vector<int>& b : batches) {
      std::vector<SampleRef> refs;
      refs.reserve(b.size());
      for (int idx : b) {
        refs.push_back({&dataset[idx].features, dataset[idx].label, idx});
      }
      BatchResult r = loss_and_grads(refs, params, hp, cfg.threads);
      if (!std::isfinite(r.mean_loss)) {
        fail(Err::NumericFailure, "non-finite loss at epoch " + std::to_string(epoch));
      }

      if (cfg.clip_norm > 0.0) {
        double sq = 0.0;
        for (size_t p = 0; p < r.grads.size(); ++p) {
          if (frozen[p]) continue;
          for (int64_t j = 0; j < r.grads[p].size(); ++j) {
            sq += r.grads[p][j] * r.grads[p][j];
          }
        }
        const double norm = std::sqrt(sq);
        if (norm > cfg.clip_norm) {
          const double sc = cfg.clip_norm / norm;
          for (size_t p = 0; p < r.grads.size(); ++p) {
            if (frozen[p]) continue;
            for (int64_t j = 0; j < r.grads[p].size(); ++j) r.grads[p][j] *= sc;
          }
        }
      }

      opt.step(param_ptrs, r.grads, frozen);
      loss_sum += r.mean_loss * static_cast<double>(b.size());
      correct += r.correct;
    }

    if (log) {
      const double wall =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
              .count();
      log->rows.push_back({epoch, loss_sum / N,
                           static_cast<double>(correct) / N, wall});
    }
  }
  return params;
}

}  // namespace affectlab
