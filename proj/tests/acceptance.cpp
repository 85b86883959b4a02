// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line
// with its measured margin; the exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "affectlab/audio_io.hpp"
#include "affectlab/checkpoint.hpp"
#include "affectlab/common.hpp"
#include "affectlab/config.hpp"
#include "affectlab/corpus.hpp"
#include "affectlab/eval.hpp"
#include "affectlab/experiment.hpp"
#include "affectlab/features.hpp"
#include "affectlab/reference.hpp"
#include "affectlab/rng.hpp"
#include "affectlab/seq_model.hpp"
#include "affectlab/synthetic.hpp"
#include "affectlab/transfer.hpp"
#include "mock_corpora.hpp"

namespace fs = std::filesystem;
using namespace affectlab;

namespace {

int failures = 0;

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void run_criterion(int index, const std::string& name,
                   const std::function<std::pair<bool, std::string>()>& fn) {
  const double t0 = now_s();
  bool pass = false;
  std::string detail;
  try {
    std::tie(pass, detail) = fn();
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  std::printf("[%s] %2d. %-32s %s (%.1f s)\n", pass ? "PASS" : "FAIL", index,
              name.c_str(), detail.c_str(), now_s() - t0);
  std::fflush(stdout);
  if (!pass) ++failures;
}

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / "affectlab_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string sub(const std::string& name) const { return (dir / name).string(); }
};

Scratch* scratch = nullptr;

Tensor random_tensor(std::vector<int> shape, Xoshiro256& rng) {
  Tensor t(shape);
  for (int64_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-1.0, 1.0);
  return t;
}

AudioClip tone(double freq, double seconds, int rate = 16000, double amp = 0.5) {
  AudioClip c;
  c.sample_rate_hz = rate;
  c.samples.resize(static_cast<size_t>(rate * seconds));
  for (size_t i = 0; i < c.samples.size(); ++i) {
    c.samples[i] = amp * std::sin(2.0 * M_PI * freq * i / rate);
  }
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// 1. Gradient correctness

double max_rel_error_fd(
    const std::vector<Tensor>& inputs,
    const std::function<double(Tape&, const std::vector<int>&)>& build) {
  Tape tape;
  std::vector<int> ids;
  for (const Tensor& t : inputs) ids.push_back(tape.leaf(t));
  build(tape, ids);
  const int loss_id = tape.node_count() - 1;
  const std::vector<Tensor> grads = tape.backward(loss_id);

  const double h = 1e-5;
  double worst = 0.0;
  for (size_t i = 0; i < inputs.size(); ++i) {
    for (int64_t j = 0; j < inputs[i].size(); ++j) {
      auto eval = [&](double delta) {
        std::vector<Tensor> probe = inputs;
        probe[i][j] += delta;
        Tape t2;
        std::vector<int> ids2;
        for (const Tensor& t : probe) ids2.push_back(t2.leaf(t));
        build(t2, ids2);
        return t2.value(t2.node_count() - 1)[0];
      };
      const double fd = (eval(h) - eval(-h)) / (2.0 * h);
      const double an = grads[ids[i]][j];
      const double rel =
          std::abs(fd - an) / std::max(std::abs(fd) + std::abs(an), 1e-6);
      worst = std::max(worst, rel);
    }
  }
  return worst;
}

int scalarize(Tape& tape, int id, Xoshiro256& rng) {
  int cur = id;
  if (tape.value(cur).rank() == 2) {
    Tensor w({tape.value(cur).dim(1)});
    for (int64_t i = 0; i < w.size(); ++i) w[i] = rng.uniform(-1.0, 1.0);
    cur = tape.matmul(cur, tape.leaf(w));
  }
  Tensor w({tape.value(cur).dim(0), 1});
  for (int64_t i = 0; i < w.size(); ++i) w[i] = rng.uniform(-1.0, 1.0);
  return tape.matmul(cur, tape.leaf(w));
}

std::pair<bool, std::string> criterion_gradients() {
  Xoshiro256 rng(1001);
  double worst = 0.0;

  using Build = std::function<int(Tape&, const std::vector<int>&)>;
  const std::vector<std::pair<std::vector<Tensor>, Build>> op_cases = {
      {{random_tensor({3, 4}, rng), random_tensor({4, 2}, rng)},
       [](Tape& t, const std::vector<int>& id) { return t.matmul(id[0], id[1]); }},
      {{random_tensor({3, 4}, rng), random_tensor({4}, rng)},
       [](Tape& t, const std::vector<int>& id) { return t.matmul(id[0], id[1]); }},
      {{random_tensor({4}, rng), random_tensor({4, 3}, rng)},
       [](Tape& t, const std::vector<int>& id) { return t.matmul(id[0], id[1]); }},
      {{random_tensor({3, 4}, rng), random_tensor({4}, rng)},
       [](Tape& t, const std::vector<int>& id) { return t.add(id[0], id[1]); }},
      {{random_tensor({5}, rng), random_tensor({5}, rng)},
       [](Tape& t, const std::vector<int>& id) { return t.mul(id[0], id[1]); }},
      {{random_tensor({5}, rng)},
       [](Tape& t, const std::vector<int>& id) { return t.tanh_op(id[0]); }},
      {{random_tensor({5}, rng)},
       [](Tape& t, const std::vector<int>& id) { return t.sigmoid(id[0]); }},
      {{random_tensor({6}, rng)},
       [](Tape& t, const std::vector<int>& id) { return t.softmax(id[0]); }},
      {{random_tensor({3}, rng), random_tensor({4}, rng)},
       [](Tape& t, const std::vector<int>& id) { return t.concat(id[0], id[1]); }},
      {{random_tensor({7}, rng)},
       [](Tape& t, const std::vector<int>& id) { return t.slice(id[0], 2, 6); }},
      {{random_tensor({5}, rng)},
       [](Tape& t, const std::vector<int>& id) { return t.scale(id[0], -1.3); }},
      {{random_tensor({5}, rng)},
       [](Tape& t, const std::vector<int>& id) { return t.add_scalar(id[0], 0.4); }},
      {{random_tensor({3, 4}, rng)},
       [](Tape& t, const std::vector<int>& id) {
         return t.stack_rows({t.row(id[0], 0), t.row(id[0], 2)});
       }},
  };
  for (const auto& [inputs, make] : op_cases) {
    const uint64_t scalar_seed = rng.next();
    worst = std::max(
        worst, max_rel_error_fd(inputs, [&](Tape& t, const std::vector<int>& id) {
          Xoshiro256 srng(scalar_seed);
          return t.value(scalarize(t, make(t, id), srng))[0];
        }));
  }
  worst = std::max(worst, max_rel_error_fd(
                              {random_tensor({5}, rng)},
                              [](Tape& t, const std::vector<int>& id) {
                                return t.value(t.cross_entropy(id[0], 2))[0];
                              }));

  // Full classify -> cross-entropy composition on a 2-input/4-hidden/3-class
  // instance.
  Hyperparams hp;
  hp.input_dim = 2;
  hp.hidden_dim = 4;
  hp.num_classes = 3;
  hp.encoder_layers = 1;
  hp.attention_dim = 4;
  ParameterSet ps = ParameterSet::init(hp, 1002, Precision::f64);
  FeatureSequence f;
  f.frames = 3;
  f.dim = 2;
  f.values.resize(6);
  for (double& v : f.values) v = rng.uniform(-1.0, 1.0);
  const std::vector<SampleRef> batch = {{&f, 1, 0}};
  const BatchResult base = loss_and_grads(batch, ps, hp);
  const double h = 1e-5;
  for (size_t p = 0; p < ps.named.size(); ++p) {
    Tensor& t = ps.named[p].second;
    for (int64_t j = 0; j < t.size(); ++j) {
      const double keep = t[j];
      t[j] = keep + h;
      const double up = loss_and_grads(batch, ps, hp).mean_loss;
      t[j] = keep - h;
      const double dn = loss_and_grads(batch, ps, hp).mean_loss;
      t[j] = keep;
      const double fd = (up - dn) / (2.0 * h);
      const double an = base.grads[p][j];
      worst = std::max(worst, std::abs(fd - an) /
                                  std::max(std::abs(fd) + std::abs(an), 1e-6));
    }
  }

  char detail[96];
  std::snprintf(detail, sizeof(detail), "max rel err %.2e (tol 1e-4)", worst);
  return {worst <= 1e-4, detail};
}

// ---------------------------------------------------------------------------
// 2. DSP oracles

std::pair<bool, std::string> criterion_dsp_oracles() {
  Xoshiro256 rng(2001);
  const FrameSpec spec;
  double worst_abs = 0.0;

  for (int n : {1024, 2500, 4096}) {
    AudioClip clip;
    clip.sample_rate_hz = 16000;
    clip.samples.resize(n);
    for (double& s : clip.samples) s = rng.uniform(-0.9, 0.9);

    const Spectrogram sg = stft(clip, spec);
    std::vector<double> win(spec.frame_length_samples);
    for (int i = 0; i < spec.frame_length_samples; ++i) {
      win[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / spec.frame_length_samples);
    }
    const Mat mf = mfcc(sg);
    const Mat ch = chromagram(sg);

    for (int t = 0; t < sg.frames; ++t) {
      std::vector<double> frame(spec.fft_size, 0.0);
      for (int i = 0; i < spec.frame_length_samples; ++i) {
        const size_t k = static_cast<size_t>(t) * spec.hop_samples + i;
        if (k < clip.samples.size()) frame[i] = clip.samples[k] * win[i];
      }
      const auto dft = ref::dft(frame);

      // Short-time transform against the O(n^2) DFT.
      for (int k = 0; k < sg.bins; ++k) {
        worst_abs = std::max(worst_abs, std::abs(sg.at(t, k) - dft[k]));
      }

      // Mel + DCT against the direct per-filter oracle.
      std::vector<double> power(sg.bins);
      for (int k = 0; k < sg.bins; ++k) power[k] = std::norm(dft[k]);
      const auto mf_oracle = ref::mfcc_frame(power, 16000, spec.fft_size, 26, 13);
      for (int c = 0; c < 13; ++c) {
        worst_abs = std::max(worst_abs, std::abs(mf.at(t, c) - mf_oracle[c]));
      }

      // Pitch-class folding recomputed from the DFT with the mapping rule.
      double cls[12] = {0};
      for (int k = 1; k < sg.bins; ++k) {
        const double f = static_cast<double>(k) * 16000 / spec.fft_size;
        const long midi = std::lround(69.0 + 12.0 * std::log2(f / 440.0));
        cls[((midi % 12) + 12) % 12] += std::norm(dft[k]);
      }
      double mx = 0.0;
      for (double e : cls) mx = std::max(mx, e);
      for (int c = 0; c < 12; ++c) {
        const double expected = mx > 0.0 ? cls[c] / mx : 0.0;
        worst_abs = std::max(worst_abs, std::abs(ch.at(t, c) - expected));
      }
    }
  }

  // Tonal centroid closed forms.
  double worst_tz = 0.0;
  {
    Mat uniform(1, 12);
    for (int c = 0; c < 12; ++c) uniform.at(0, c) = 1.0;
    for (double v : tonnetz(uniform).v) worst_tz = std::max(worst_tz, std::abs(v));

    Mat onehot(12, 12);
    for (int p = 0; p < 12; ++p) onehot.at(p, p) = 1.0;
    const Mat tz = tonnetz(onehot);
    for (int p = 0; p < 12; ++p) {
      const double ang5 = p * 7.0 * M_PI / 6.0;
      const double ang3m = p * 3.0 * M_PI / 2.0;
      const double ang3M = p * 2.0 * M_PI / 3.0;
      const double expect[6] = {std::sin(ang5),        std::cos(ang5),
                                std::sin(ang3m),       std::cos(ang3m),
                                0.5 * std::sin(ang3M), 0.5 * std::cos(ang3M)};
      for (int d = 0; d < 6; ++d) {
        worst_tz = std::max(worst_tz, std::abs(tz.at(p, d) - expect[d]));
      }
    }
  }

  char detail[96];
  std::snprintf(detail, sizeof(detail),
                "stft/mfcc/chroma %.2e (tol 1e-6), tonnetz %.2e (tol 1e-12)",
                worst_abs, worst_tz);
  return {worst_abs <= 1e-6 && worst_tz <= 1e-12, detail};
}

// ---------------------------------------------------------------------------
// 3. Pure-tone pipeline

std::pair<bool, std::string> criterion_pure_tones() {
  const FrameSpec spec;

  const AudioClip a440 = tone(440.0, 1.0);
  const Spectrogram sg = stft(a440, spec);
  const Mat ch = chromagram(sg);
  const Mat pe440 = pitch_energy(a440, spec);
  int voiced = 0, voiced_a = 0;
  for (int t = 0; t < ch.rows; ++t) {
    if (pe440.at(t, 0) <= 0.0) continue;
    ++voiced;
    int best = 0;
    for (int c = 1; c < 12; ++c) {
      if (ch.at(t, c) > ch.at(t, best)) best = c;
    }
    if (best == 9) ++voiced_a;
  }
  const double frac_a = voiced > 0 ? static_cast<double>(voiced_a) / voiced : 0.0;

  const Mat pe100 = pitch_energy(tone(100.0, 1.0), spec);
  int ok100 = 0;
  for (int t = 0; t < pe100.rows; ++t) {
    if (std::abs(pe100.at(t, 0) - 100.0) <= 5.0) ++ok100;
  }
  const double frac_f0 = static_cast<double>(ok100) / pe100.rows;

  char detail[96];
  std::snprintf(detail, sizeof(detail),
                "chroma A %.1f%% (need 95), f0 within 5 Hz %.1f%% (need 90)",
                100.0 * frac_a, 100.0 * frac_f0);
  return {voiced > 0 && frac_a >= 0.95 && frac_f0 >= 0.90, detail};
}

// ---------------------------------------------------------------------------
// 4. Metric oracle

std::pair<bool, std::string> criterion_metrics() {
  Xoshiro256 rng(4001);
  for (int trial = 0; trial < 1000; ++trial) {
    const int C = 2 + static_cast<int>(rng.bounded(5));
    const int N = 1 + static_cast<int>(rng.bounded(80));
    std::vector<std::string> classes;
    for (int c = 0; c < C; ++c) classes.push_back("k" + std::to_string(c));
    ConfusionMatrix cm(classes);
    std::vector<std::pair<int, int>> pairs;
    const int active = 1 + static_cast<int>(rng.bounded(static_cast<uint64_t>(C)));
    for (int i = 0; i < N; ++i) {
      const int t = static_cast<int>(rng.bounded(static_cast<uint64_t>(active)));
      const int p = static_cast<int>(rng.bounded(static_cast<uint64_t>(C)));
      cm.add(t, p);
      pairs.emplace_back(t, p);
    }

    int64_t hits = 0;
    std::vector<int64_t> row_total(C, 0), row_hit(C, 0);
    for (const auto& [t, p] : pairs) {
      row_total[t]++;
      if (t == p) {
        ++hits;
        row_hit[t]++;
      }
    }
    double recall_sum = 0.0;
    int included = 0;
    for (int c = 0; c < C; ++c) {
      if (row_total[c] == 0) continue;
      recall_sum += static_cast<double>(row_hit[c]) / row_total[c];
      ++included;
    }
    if (accuracy(cm) != static_cast<double>(hits) / N) {
      return {false, "accuracy mismatch at trial " + std::to_string(trial)};
    }
    if (uar(cm) != recall_sum / included) {
      return {false, "uar mismatch at trial " + std::to_string(trial)};
    }
  }
  return {true, "1000 fuzzed cases agree exactly"};
}

// ---------------------------------------------------------------------------
// 5. Checkpoint integrity

std::pair<bool, std::string> criterion_checkpoints() {
  Hyperparams hp;
  hp.input_dim = 8;
  hp.hidden_dim = 6;
  hp.encoder_layers = 2;
  hp.num_classes = 4;
  hp.attention_dim = 5;

  const std::string path = scratch->sub("roundtrip.afck");
  for (uint64_t seed = 1; seed <= 100; ++seed) {
    Checkpoint ck;
    ck.hp = hp;
    ck.params = ParameterSet::init(hp, seed, Precision::f32);
    ck.class_labels = {"a", "b", "c", "d"};
    ck.provenance = {"fixture", 1, seed, "cafe"};
    save_checkpoint(ck, path);
    const Checkpoint back = load_checkpoint(path);
    if (!back.params.bit_equal(ck.params)) {
      return {false, "round-trip not bit-exact at seed " + std::to_string(seed)};
    }
  }

  // Exhaustive single-byte corruption across the payload.
  Checkpoint ck;
  ck.hp = hp;
  ck.params = ParameterSet::init(hp, 424242, Precision::f32);
  ck.class_labels = {"a", "b", "c", "d"};
  ck.provenance = {"fixture", 1, 0, ""};
  save_checkpoint(ck, path);
  std::string bytes = read_file(path);
  int64_t payload_bytes = 0;
  for (const auto& [name, t] : ck.params.named) payload_bytes += t.size() * 4;
  const size_t payload_start = bytes.size() - static_cast<size_t>(payload_bytes);

  Xoshiro256 rng(5001);
  const std::string bad = scratch->sub("corrupt.afck");
  int64_t detected = 0;
  for (size_t pos = payload_start; pos < bytes.size(); ++pos) {
    std::string mutated = bytes;
    mutated[pos] = static_cast<char>(
        static_cast<unsigned char>(mutated[pos]) ^
        static_cast<unsigned char>(1 + rng.bounded(255)));
    std::ofstream f(bad, std::ios::binary);
    f.write(mutated.data(), static_cast<std::streamsize>(mutated.size()));
    f.close();
    try {
      load_checkpoint(bad);
      return {false, "corruption at payload byte " +
                         std::to_string(pos - payload_start) + " not detected"};
    } catch (const Error& e) {
      if (e.code() != Err::ChecksumMismatch) {
        return {false, std::string("unexpected error kind: ") + e.what()};
      }
      ++detected;
    }
  }

  char detail[96];
  std::snprintf(detail, sizeof(detail),
                "100 round-trips bit-exact, %lld/%lld corruptions detected",
                static_cast<long long>(detected),
                static_cast<long long>(payload_bytes));
  return {detected == payload_bytes, detail};
}

// ---------------------------------------------------------------------------
// 6. Transfer partition law

std::pair<bool, std::string> criterion_partition_law() {
  Hyperparams hp;
  hp.input_dim = 8;
  hp.hidden_dim = 6;
  hp.encoder_layers = 2;
  hp.num_classes = 4;
  hp.attention_dim = 5;
  Checkpoint src;
  src.hp = hp;
  src.params = ParameterSet::init(hp, 6001, Precision::f32);
  src.class_labels = {"a", "b", "c", "d"};

  const std::vector<std::string> groups = {"encoder", "attention", "decoder"};
  for (int mask = 0; mask < 8; ++mask) {
    TransferPolicy policy;
    policy.copy_groups.clear();
    for (int g = 0; g < 3; ++g) {
      if (mask & (1 << g)) policy.copy_groups.insert(groups[g]);
    }
    policy.fresh_init_seed = 7000 + mask;
    const ParameterSet out = transfer_parameters(src, hp, policy);
    const ParameterSet fresh =
        ParameterSet::init(hp, policy.fresh_init_seed, Precision::f32);
    for (size_t i = 0; i < out.named.size(); ++i) {
      const bool copied =
          policy.copy_groups.count(ParameterSet::group_of(out.named[i].first)) > 0;
      const Tensor& expected =
          copied ? src.params.named[i].second : fresh.named[i].second;
      if (!out.named[i].second.bit_equal(expected)) {
        return {false, "tensor " + out.named[i].first +
                           " violates the law for mask " + std::to_string(mask)};
      }
    }
  }
  return {true, "all 8 copy subsets are bit-exact partitions"};
}

// ---------------------------------------------------------------------------
// 7. Overfit fixture

std::pair<bool, std::string> criterion_overfit() {
  const std::string corpusdir = scratch->sub("tones40");
  SynthSpec sp;
  sp.profile = SynthProfile::tones;
  sp.clips_per_class = 10;
  sp.seed = 7;
  generate_synthetic_corpus(corpusdir, sp);

  CorpusManifest m = scan_corpus(corpusdir, CorpusId::synthetic, false);
  m = map_labels(m, LabelMap::standard(LabelMode::four_class));
  const std::vector<std::string> classes = canonical_classes(m);

  std::vector<std::string> paths;
  for (const auto& e : m.entries) paths.push_back(e.audio_path);
  const std::vector<FeatureSequence> feats =
      extract_batch(paths, FrameSpec{}, FeatureOptions{}, "", 1);

  std::map<std::string, int> index;
  for (size_t i = 0; i < classes.size(); ++i) index[classes[i]] = static_cast<int>(i);
  std::vector<Sample> data(feats.size());
  for (size_t i = 0; i < feats.size(); ++i) {
    data[i] = {feats[i], index.at(m.entries[i].canonical_label)};
  }

  Hyperparams hp;  // defaults: hidden 128, 2 layers, attention 128
  hp.input_dim = data[0].features.dim;
  hp.num_classes = static_cast<int>(classes.size());
  TrainConfig cfg;  // defaults: batch 16, 1e-3 adam, f32, single thread
  cfg.epochs = 150;
  cfg.seed = 7;
  TrainingLog log;
  train(data, hp, cfg, nullptr, &log);

  int first_epoch = -1;
  for (const TrainingLogRow& r : log.rows) {
    if (r.train_accuracy >= 0.95) {
      first_epoch = r.epoch;
      break;
    }
  }
  const double wall = log.rows.empty() ? 0.0 : log.rows.back().wall_seconds;

  char detail[112];
  std::snprintf(detail, sizeof(detail),
                "40 clips reach 95%% at epoch %d (budget 150), train %.0f s "
                "(budget 300)",
                first_epoch, wall);
  return {first_epoch > 0 && wall < 300.0, detail};
}

// ---------------------------------------------------------------------------
// 8. Transfer improves the low-resource target

std::pair<bool, std::string> criterion_transfer_gain() {
  SynthSpec a;
  a.profile = SynthProfile::contours;
  a.variant = 'a';
  a.clips_per_class = 50;
  a.seed = 100;
  generate_synthetic_corpus(scratch->sub("contA"), a);

  SynthSpec b_train = a;
  b_train.variant = 'b';
  b_train.clips_per_class = 5;
  b_train.seed = 200;
  generate_synthetic_corpus(scratch->sub("contB_train"), b_train);

  SynthSpec b_eval = b_train;
  b_eval.clips_per_class = 25;
  b_eval.seed = 300;
  generate_synthetic_corpus(scratch->sub("contB_eval"), b_eval);

  const ConfigFile cfg = ConfigFile::parse_string(
      "[experiment]\n"
      "regime = transfer\n"
      "out = " + scratch->sub("transfer_out") + "\n"
      "seed = 5\n"
      "[features]\n"
      "cache = true\n"
      "[train]\n"
      "threads = 2\n"
      "[transfer]\n"
      "source_corpus = synthetic\n"
      "source_root = " + scratch->sub("contA") + "\n"
      "target_corpus = synthetic\n"
      "target_train_root = " + scratch->sub("contB_train") + "\n"
      "target_eval_root = " + scratch->sub("contB_eval") + "\n"
      "copy_groups = encoder,attention\n"
      "pretrain_epochs = 40\n"
      "finetune_epochs = 40\n"
      "num_seeds = 5\n"
      "scratch_baseline = true\n");
  run_experiment(cfg);

  const auto report = nlohmann::json::parse(
      read_file(scratch->sub("transfer_out") + "/report.json"));
  const double transferred = report["transfer"]["transferred_uar_mean"];
  const double from_scratch = report["transfer"]["scratch_uar_mean"];
  const double gain = transferred - from_scratch;

  char detail[128];
  std::snprintf(detail, sizeof(detail),
                "mean UAR transferred %.3f vs scratch %.3f, gain %.1f points "
                "(need 5)",
                transferred, from_scratch, 100.0 * gain);
  return {gain >= 0.05, detail};
}

// ---------------------------------------------------------------------------
// 9. Experiment determinism

std::pair<bool, std::string> criterion_determinism() {
  const std::string corpusdir = scratch->sub("tones40");  // from criterion 7
  if (!fs::exists(corpusdir)) {
    SynthSpec sp;
    sp.clips_per_class = 10;
    sp.seed = 7;
    generate_synthetic_corpus(corpusdir, sp);
  }
  const std::string out = scratch->sub("det_out");
  const ConfigFile cfg = ConfigFile::parse_string(
      "[experiment]\nregime = baseline_same_corpus\nout = " + out +
      "\nseed = 11\n"
      "[data]\ncorpus = synthetic\nroot = " + corpusdir + "\n"
      "[features]\nwith_deltas = false\ncache = false\n"
      "[model]\nhidden_dim = 16\nencoder_layers = 1\nattention_dim = 8\n"
      "[train]\nepochs = 3\nbatch_size = 8\n");

  auto strip_wall = [](const std::string& log) {
    std::stringstream in(log), out_ss;
    std::string line;
    while (std::getline(in, line)) {
      const size_t tab = line.rfind('\t');
      out_ss << line.substr(0, tab) << "\n";
    }
    return out_ss.str();
  };

  run_experiment(cfg);
  const std::string r1 = read_file(out + "/report.json");
  const std::string t1 = read_file(out + "/results.txt");
  const std::string c1 = read_file(out + "/model.afck");
  const std::string s1 = read_file(out + "/config_resolved.txt");
  const std::string l1 = strip_wall(read_file(out + "/training_log.txt"));
  fs::remove_all(out);
  run_experiment(cfg);

  const bool same = r1 == read_file(out + "/report.json") &&
                    t1 == read_file(out + "/results.txt") &&
                    c1 == read_file(out + "/model.afck") &&
                    s1 == read_file(out + "/config_resolved.txt") &&
                    l1 == strip_wall(read_file(out + "/training_log.txt"));
  return {same && !r1.empty(),
          same ? "rerun artifacts byte-identical (wall clock excluded)"
               : "rerun artifacts differ"};
}

// ---------------------------------------------------------------------------
// 10. Ingestion checksums

std::pair<bool, std::string> criterion_ingestion() {
  test::make_mock_savee(scratch->sub("savee"));
  test::make_mock_emovo(scratch->sub("emovo"));
  test::make_mock_urdu(scratch->sub("urdu"));
  test::make_mock_iemocap(scratch->sub("iemocap"));

  const size_t savee =
      scan_corpus(scratch->sub("savee"), CorpusId::savee, false).entries.size();
  const size_t emovo =
      scan_corpus(scratch->sub("emovo"), CorpusId::emovo, false).entries.size();
  const size_t urdu =
      scan_corpus(scratch->sub("urdu"), CorpusId::urdu, false).entries.size();
  const size_t iemocap =
      scan_corpus(scratch->sub("iemocap"), CorpusId::iemocap, false).entries.size();

  char detail[96];
  std::snprintf(detail, sizeof(detail), "savee %zu emovo %zu urdu %zu iemocap %zu",
                savee, emovo, urdu, iemocap);
  return {savee == 480 && emovo == 588 && urdu == 400 && iemocap == 5531, detail};
}

}  // namespace

int main() {
  Scratch s;
  scratch = &s;

  run_criterion(1, "gradient correctness", [] {
    const double t0 = now_s();
    auto r = criterion_gradients();
    if (now_s() - t0 >= 10.0) {
      r.first = false;
      r.second += " [over 10 s budget]";
    }
    return r;
  });
  run_criterion(2, "dsp oracles", [] {
    const double t0 = now_s();
    auto r = criterion_dsp_oracles();
    if (now_s() - t0 >= 30.0) {
      r.first = false;
      r.second += " [over 30 s budget]";
    }
    return r;
  });
  run_criterion(3, "pure-tone pipeline", criterion_pure_tones);
  run_criterion(4, "metric oracle", criterion_metrics);
  run_criterion(5, "checkpoint integrity", criterion_checkpoints);
  run_criterion(6, "transfer partition law", criterion_partition_law);
  run_criterion(7, "overfit fixture", criterion_overfit);
  run_criterion(8, "transfer gain over scratch", [] {
    const double t0 = now_s();
    auto r = criterion_transfer_gain();
    if (now_s() - t0 >= 900.0) {
      r.first = false;
      r.second += " [over 15 min budget]";
    }
    return r;
  });
  run_criterion(9, "experiment determinism", criterion_determinism);
  run_criterion(10, "ingestion checksums", criterion_ingestion);

  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures;
}
