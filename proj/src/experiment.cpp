// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "affectlab/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <optional>
#include <set>

#include "affectlab/common.hpp"
#include "affectlab/corpus.hpp"
#include "affectlab/eval.hpp"
#include "affectlab/features.hpp"
#include "affectlab/rng.hpp"
#include "affectlab/seq_model.hpp"
#include "affectlab/transfer.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace affectlab {

namespace {

struct LockGuard {
  fs::path path;

  explicit LockGuard(const fs::path& dir) : path(dir / "LOCK") {
    if (fs::exists(path)) {
      fail(Err::IoError, "output directory is locked by another run: " +
                             path.string());
    }
    std::ofstream f(path);
    if (!f) fail(Err::IoError, "cannot create lock " + path.string());
  }
  ~LockGuard() {
    std::error_code ec;
    fs::remove(path, ec);
  }
};

std::string resolve_root(const std::string& value, const std::string& data_root) {
  if (value.empty() || data_root.empty() || fs::path(value).is_absolute()) {
    return value;
  }
  return (fs::path(data_root) / value).string();
}

FrameSpec frame_spec_from(const ConfigFile& cfg) {
  FrameSpec spec;
  spec.frame_length_samples = static_cast<int>(cfg.get_int("features.frame_length", 400));
  spec.hop_samples = static_cast<int>(cfg.get_int("features.hop", 160));
  spec.fft_size = static_cast<int>(cfg.get_int("features.fft_size", 512));
  const std::string win = cfg.get_str("features.window", "hann");
  if (win == "hann") {
    spec.window = Window::hann;
  } else if (win == "hamming") {
    spec.window = Window::hamming;
  } else {
    fail(Err::ConfigInvalid, "features.window must be hann or hamming");
  }
  spec.validate();
  return spec;
}

FeatureOptions feature_options_from(const ConfigFile& cfg) {
  FeatureOptions opt;
  opt.with_deltas = cfg.get_bool("features.with_deltas", true);
  const std::string norm = cfg.get_str("features.normalize", "none");
  if (norm == "none") {
    opt.normalize = NormalizeMode::none;
  } else if (norm == "per_corpus_z") {
    opt.normalize = NormalizeMode::per_corpus_z;
  } else {
    fail(Err::ConfigInvalid, "features.normalize must be none or per_corpus_z");
  }
  return opt;
}

TrainConfig train_config_from(const ConfigFile& cfg, uint64_t seed, int epochs) {
  TrainConfig tc;
  tc.epochs = epochs;
  tc.batch_size = static_cast<int>(cfg.get_int("train.batch_size", 16));
  tc.lr = cfg.get_double("train.lr", 1e-3);
  tc.seed = seed;
  tc.momentum = cfg.get_double("train.momentum", 0.9);
  tc.clip_norm = cfg.get_double("train.clip_norm", 5.0);
  tc.threads = static_cast<int>(cfg.get_int("train.threads", 1));
  const std::string opt = cfg.get_str("train.optimizer", "adam");
  if (opt == "adam") {
    tc.algo = OptAlgo::adam;
  } else if (opt == "sgd_momentum") {
    tc.algo = OptAlgo::sgd_momentum;
  } else {
    fail(Err::ConfigInvalid, "train.optimizer must be adam or sgd_momentum");
  }
  const std::string prec = cfg.get_str("train.precision", "f32");
  if (prec == "f32") {
    tc.precision = Precision::f32;
  } else if (prec == "f64") {
    tc.precision = Precision::f64;
  } else {
    fail(Err::ConfigInvalid, "train.precision must be f32 or f64");
  }
  for (const std::string& g : cfg.get_list("train.freeze_groups")) {
    tc.freeze_groups.insert(g);
  }
  return tc;
}

LabelMode label_mode_from(const ConfigFile& cfg) {
  const std::string mode = cfg.get_str("data.label_mode", "four_class");
  if (mode == "four_class") return LabelMode::four_class;
  if (mode == "binary_valence") return LabelMode::binary_valence;
  fail(Err::ConfigInvalid, "data.label_mode must be four_class or binary_valence");
}

CorpusId corpus_id_from(const std::string& name) {
  const auto id = corpus_from_name(name);
  if (!id) fail(Err::ConfigInvalid, "unknown corpus '" + name + "'");
  return *id;
}

struct LabeledSet {
  CorpusManifest manifest;
  std::vector<std::string> classes;
  std::vector<Sample> samples;  // aligned with manifest entries
};

LabeledSet build_set(const CorpusManifest& labeled,
                     const std::vector<std::string>& classes,
                     const FrameSpec& spec, const FeatureOptions& opts,
                     const std::string& cache_dir, int threads,
                     const FeatureNormalizer* normalizer) {
  LabeledSet out;
  out.manifest = labeled;
  out.classes = classes;
  std::map<std::string, int> index;
  for (size_t i = 0; i < classes.size(); ++i) index[classes[i]] = static_cast<int>(i);

  std::vector<std::string> paths;
  for (const ManifestEntry& e : labeled.entries) paths.push_back(e.audio_path);
  std::vector<FeatureSequence> feats =
      extract_batch(paths, spec, opts, cache_dir, threads);

  out.samples.resize(feats.size());
  for (size_t i = 0; i < feats.size(); ++i) {
    if (normalizer) normalizer->apply(feats[i]);
    const auto it = index.find(labeled.entries[i].canonical_label);
    if (it == index.end()) {
      fail(Err::ClassSetMismatch,
           "label '" + labeled.entries[i].canonical_label + "' not in class list");
    }
    out.samples[i] = {std::move(feats[i]), it->second};
  }
  return out;
}

Hyperparams hyperparams_from(const ConfigFile& cfg, int input_dim, int num_classes) {
  Hyperparams hp;
  hp.input_dim = input_dim;
  hp.hidden_dim = static_cast<int>(cfg.get_int("model.hidden_dim", 128));
  hp.encoder_layers = static_cast<int>(cfg.get_int("model.encoder_layers", 2));
  hp.attention_dim = static_cast<int>(cfg.get_int("model.attention_dim", 128));
  hp.num_classes = num_classes;
  hp.validate();
  return hp;
}

ordered_json report_json(const EvalReport& r, const std::string& name,
                         const std::string& corpus) {
  ordered_json j;
  j["name"] = name;
  j["corpus"] = corpus;
  j["utterances"] = r.confusion.total();
  j["accuracy"] = r.accuracy;
  j["uar"] = r.uar;
  ordered_json recalls;
  for (const auto& [cls, rec] : r.per_class_recall) recalls[cls] = rec;
  j["per_class_recall"] = recalls;
  j["classes"] = r.confusion.classes;
  ordered_json rows = ordered_json::array();
  const int C = r.confusion.size();
  for (int t = 0; t < C; ++t) {
    ordered_json row = ordered_json::array();
    for (int p = 0; p < C; ++p) row.push_back(r.confusion.at(t, p));
    rows.push_back(row);
  }
  j["confusion"] = rows;
  j["checkpoint_provenance"] = r.checkpoint_provenance;
  return j;
}

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::string run_experiment(const ConfigFile& cfg) {
  const std::string regime = cfg.require_str("experiment.regime");
  if (regime != "baseline_same_corpus" && regime != "cross_corpus" &&
      regime != "transfer") {
    fail(Err::ConfigInvalid, "experiment.regime '" + regime + "' unknown");
  }
  const std::string out_dir = cfg.require_str("experiment.out");
  const uint64_t seed = cfg.get_u64("experiment.seed", 1);
  std::string data_root = cfg.get_str("data.data_root", "");
  if (data_root.empty()) {
    const char* env = std::getenv("AFFECTLAB_DATA");
    if (env) data_root = env;
  }

  fs::create_directories(out_dir);
  LockGuard lock(out_dir);

  {
    std::ofstream f(fs::path(out_dir) / "config_resolved.txt");
    if (!f) fail(Err::IoError, "cannot write config snapshot");
    f << cfg.canonical_text();
  }

  const FrameSpec spec = frame_spec_from(cfg);
  const FeatureOptions fopts = feature_options_from(cfg);
  const int feat_threads = static_cast<int>(cfg.get_int("features.threads", 0));
  const std::string cache_dir =
      cfg.get_bool("features.cache", true)
          ? (fs::path(out_dir) / "feature_cache").string()
          : "";
  const bool allow_partial = cfg.get_bool("data.allow_partial", false);
  const LabelMap lmap = LabelMap::standard(label_mode_from(cfg));
  const std::string config_hash = cfg.hash();

  auto scan_and_map = [&](const std::string& corpus, const std::string& root) {
    const CorpusId id = corpus_id_from(corpus);
    // Synthetic fixtures always pass the count check; published corpora may
    // be partial local copies.
    CorpusManifest m = scan_corpus(resolve_root(root, data_root), id, allow_partial);
    return map_labels(m, lmap);
  };

  ordered_json report;
  report["schema"] = "affectlab-report-v1";
  report["regime"] = regime;
  report["seed"] = seed;
  report["config_hash"] = config_hash;
  ordered_json evaluations = ordered_json::array();
  std::string table;
  table += "name                     corpus        n    accuracy        uar\n";
  table += "----------------------------------------------------------------\n";
  auto add_eval = [&](const EvalReport& r, const std::string& name,
                      const std::string& corpus) {
    evaluations.push_back(report_json(r, name, corpus));
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-24s %-10s %5lld  %10s %10s\n", name.c_str(),
                  corpus.c_str(), static_cast<long long>(r.confusion.total()),
                  fmt6(r.accuracy).c_str(), fmt6(r.uar).c_str());
    table += buf;
  };

  if (regime == "baseline_same_corpus") {
    const std::string corpus = cfg.require_str("data.corpus");
    const CorpusManifest labeled = scan_and_map(corpus, cfg.require_str("data.root"));
    const std::vector<std::string> classes = canonical_classes(labeled);

    const std::string scheme_name = cfg.get_str("data.split", "ratio_80_20");
    SplitScheme scheme;
    if (scheme_name == "ratio_80_20") {
      scheme = SplitScheme::ratio_80_20;
    } else if (scheme_name == "kfold_3") {
      scheme = SplitScheme::kfold_3;
    } else if (scheme_name == "session_holdout") {
      scheme = SplitScheme::session_holdout;
    } else {
      fail(Err::ConfigInvalid, "data.split '" + scheme_name + "' unknown");
    }
    const bool speaker_aware = cfg.get_bool("data.speaker_aware", false);
    const SplitPlan plan =
        make_splits(labeled, scheme, mix_seed(seed, 3), speaker_aware);
    const int rounds = (scheme == SplitScheme::kfold_3) ? 3 : 1;

    double acc_sum = 0.0, uar_sum = 0.0;
    for (int fold = 0; fold < rounds; ++fold) {
      CorpusManifest train_m, test_m;
      if (scheme == SplitScheme::kfold_3) {
        test_m = select_partition(labeled, plan, fold);
        train_m = select_partition(labeled, plan, fold, /*invert=*/true);
      } else {
        train_m = select_partition(labeled, plan, 0);
        test_m = select_partition(labeled, plan, 1);
      }
      if (train_m.entries.empty() || test_m.entries.empty()) {
        fail(Err::EmptyDataset, "split produced an empty partition");
      }

      std::optional<FeatureNormalizer> normalizer;
      LabeledSet train_set = build_set(train_m, classes, spec, fopts, cache_dir,
                                       feat_threads, nullptr);
      if (fopts.normalize == NormalizeMode::per_corpus_z) {
        std::vector<const FeatureSequence*> train_feats;
        for (const Sample& s : train_set.samples) train_feats.push_back(&s.features);
        normalizer = FeatureNormalizer::fit(train_feats);
        for (Sample& s : train_set.samples) normalizer->apply(s.features);
      }

      const int epochs = static_cast<int>(cfg.get_int("train.epochs", 100));
      const Hyperparams hp = hyperparams_from(
          cfg, train_set.samples[0].features.dim, static_cast<int>(classes.size()));
      TrainingLog tlog;
      const TrainConfig tc = train_config_from(cfg, mix_seed(seed, 2 + fold), epochs);
      ParameterSet params = train(train_set.samples, hp, tc, nullptr, &tlog);

      Checkpoint ck;
      ck.hp = hp;
      ck.class_labels = classes;
      ck.normalizer = normalizer;
      ck.params = std::move(params);
      ck.provenance = {corpus, epochs, tc.seed, config_hash};

      const std::string suffix = rounds > 1 ? "_fold" + std::to_string(fold) : "";
      save_checkpoint(ck, (fs::path(out_dir) / ("model" + suffix + ".afck")).string());
      tlog.save((fs::path(out_dir) / ("training_log" + suffix + ".txt")).string());

      const EvalReport r = evaluate(ck, test_m, spec, fopts, cache_dir,
                                    feat_threads, config_hash);
      add_eval(r, rounds > 1 ? "fold" + std::to_string(fold) : "test", corpus);
      acc_sum += r.accuracy;
      uar_sum += r.uar;
    }
    if (rounds > 1) {
      ordered_json summary;
      summary["mean_accuracy"] = acc_sum / rounds;
      summary["mean_uar"] = uar_sum / rounds;
      report["summary"] = summary;
      table += "mean accuracy " + fmt6(acc_sum / rounds) + "  mean uar " +
               fmt6(uar_sum / rounds) + "\n";
    }
  } else if (regime == "cross_corpus") {
    const std::string train_corpus = cfg.require_str("data.train_corpus");
    std::vector<std::pair<std::string, std::string>> tests;
    for (const std::string& item : cfg.get_list("data.test")) {
      const size_t colon = item.find(':');
      if (colon == std::string::npos) {
        fail(Err::ConfigInvalid, "data.test entries must be corpus:root");
      }
      const std::string corpus = item.substr(0, colon);
      if (corpus == train_corpus) {
        fail(Err::ConfigInvalid,
             "cross_corpus test corpus equals training corpus '" + corpus + "'");
      }
      tests.emplace_back(corpus, item.substr(colon + 1));
    }
    if (tests.empty()) fail(Err::ConfigInvalid, "cross_corpus needs data.test");

    const CorpusManifest train_labeled =
        scan_and_map(train_corpus, cfg.require_str("data.train_root"));
    const std::vector<std::string> classes = canonical_classes(train_labeled);

    std::optional<FeatureNormalizer> normalizer;
    LabeledSet train_set = build_set(train_labeled, classes, spec, fopts,
                                     cache_dir, feat_threads, nullptr);
    if (fopts.normalize == NormalizeMode::per_corpus_z) {
      std::vector<const FeatureSequence*> train_feats;
      for (const Sample& s : train_set.samples) train_feats.push_back(&s.features);
      normalizer = FeatureNormalizer::fit(train_feats);
      for (Sample& s : train_set.samples) normalizer->apply(s.features);
    }

    const int epochs = static_cast<int>(cfg.get_int("train.epochs", 100));
    const Hyperparams hp = hyperparams_from(
        cfg, train_set.samples[0].features.dim, static_cast<int>(classes.size()));
    TrainingLog tlog;
    const TrainConfig tc = train_config_from(cfg, mix_seed(seed, 2), epochs);
    ParameterSet params = train(train_set.samples, hp, tc, nullptr, &tlog);

    Checkpoint ck;
    ck.hp = hp;
    ck.class_labels = classes;
    ck.normalizer = normalizer;
    ck.params = std::move(params);
    ck.provenance = {train_corpus, epochs, tc.seed, config_hash};
    save_checkpoint(ck, (fs::path(out_dir) / "model.afck").string());
    tlog.save((fs::path(out_dir) / "training_log.txt").string());

    for (const auto& [corpus, root] : tests) {
      const CorpusManifest test_labeled = scan_and_map(corpus, root);
      const EvalReport r = evaluate(ck, test_labeled, spec, fopts, cache_dir,
                                    feat_threads, config_hash);
      add_eval(r, "cross_" + corpus, corpus);
    }
  } else {  // transfer
    const std::string target_corpus = cfg.require_str("transfer.target_corpus");
    CorpusManifest target_train_m, target_eval_m;
    if (cfg.has("transfer.target_train_root")) {
      target_train_m = scan_and_map(target_corpus,
                                    cfg.require_str("transfer.target_train_root"));
      target_eval_m = scan_and_map(target_corpus,
                                   cfg.require_str("transfer.target_eval_root"));
    } else {
      const CorpusManifest all =
          scan_and_map(target_corpus, cfg.require_str("transfer.target_root"));
      const SplitPlan plan =
          make_splits(all, SplitScheme::ratio_80_20, mix_seed(seed, 3), false);
      target_train_m = select_partition(all, plan, 0);
      target_eval_m = select_partition(all, plan, 1);
    }
    const std::vector<std::string> classes = canonical_classes(target_train_m);

    // Source model: load a checkpoint or pretrain on the source corpus.
    Checkpoint source;
    if (cfg.has("transfer.source_checkpoint")) {
      source = load_checkpoint(resolve_root(
          cfg.require_str("transfer.source_checkpoint"), data_root));
    } else {
      const std::string source_corpus = cfg.require_str("transfer.source_corpus");
      const CorpusManifest source_labeled =
          scan_and_map(source_corpus, cfg.require_str("transfer.source_root"));
      const std::vector<std::string> source_classes = canonical_classes(source_labeled);
      LabeledSet source_set = build_set(source_labeled, source_classes, spec,
                                        fopts, cache_dir, feat_threads, nullptr);
      std::optional<FeatureNormalizer> src_norm;
      if (fopts.normalize == NormalizeMode::per_corpus_z) {
        std::vector<const FeatureSequence*> fp;
        for (const Sample& s : source_set.samples) fp.push_back(&s.features);
        src_norm = FeatureNormalizer::fit(fp);
        for (Sample& s : source_set.samples) src_norm->apply(s.features);
      }
      const int pre_epochs = static_cast<int>(cfg.get_int("transfer.pretrain_epochs", 60));
      const Hyperparams src_hp =
          hyperparams_from(cfg, source_set.samples[0].features.dim,
                           static_cast<int>(source_classes.size()));
      TrainingLog pre_log;
      const TrainConfig pre_tc = train_config_from(cfg, mix_seed(seed, 4), pre_epochs);
      ParameterSet pre_params = train(source_set.samples, src_hp, pre_tc, nullptr, &pre_log);
      source.hp = src_hp;
      source.class_labels = source_classes;
      source.normalizer = src_norm;
      source.params = std::move(pre_params);
      source.provenance = {source_corpus, pre_epochs, pre_tc.seed, config_hash};
      save_checkpoint(source, (fs::path(out_dir) / "pretrained.afck").string());
      pre_log.save((fs::path(out_dir) / "pretrain_log.txt").string());
    }

    TransferPolicy policy;
    policy.copy_groups.clear();
    for (const std::string& g : cfg.get_list("transfer.copy_groups")) {
      policy.copy_groups.insert(g);
    }
    if (!cfg.has("transfer.copy_groups")) {
      policy.copy_groups = {"encoder", "attention"};
    }
    for (const std::string& g : cfg.get_list("transfer.freeze_groups")) {
      policy.freeze_groups.insert(g);
    }

    // The normalizer travels with the encoder; without a copied encoder the
    // fine-tune leg fits its own, like the scratch leg always does.
    const FeatureNormalizer* carried =
        (source.normalizer && policy.copy_groups.count("encoder"))
            ? &*source.normalizer
            : nullptr;
    LabeledSet tgt_train = build_set(target_train_m, classes, spec, fopts,
                                     cache_dir, feat_threads, carried);
    std::optional<FeatureNormalizer> ft_norm;
    if (carried) {
      ft_norm = *carried;
    } else if (fopts.normalize == NormalizeMode::per_corpus_z) {
      std::vector<const FeatureSequence*> fp;
      for (const Sample& s : tgt_train.samples) fp.push_back(&s.features);
      ft_norm = FeatureNormalizer::fit(fp);
      for (Sample& s : tgt_train.samples) ft_norm->apply(s.features);
    }

    const Hyperparams tgt_hp = hyperparams_from(
        cfg, tgt_train.samples[0].features.dim, static_cast<int>(classes.size()));
    const int ft_epochs = static_cast<int>(cfg.get_int("transfer.finetune_epochs", 60));
    const int num_seeds = static_cast<int>(cfg.get_int("transfer.num_seeds", 5));
    const bool scratch_baseline = cfg.get_bool("transfer.scratch_baseline", true);

    ordered_json per_seed = ordered_json::array();
    double uar_transfer_sum = 0.0, uar_scratch_sum = 0.0;
    for (int i = 0; i < num_seeds; ++i) {
      TransferPolicy p = policy;
      p.fresh_init_seed = mix_seed(seed, 100 + i);
      ParameterSet start = transfer_parameters(source, tgt_hp, p);

      TrainConfig ft_tc = train_config_from(cfg, mix_seed(seed, 200 + i), ft_epochs);
      ft_tc.freeze_groups = policy.freeze_groups;
      auto [ft_ck, ft_log] = finetune(
          start, tgt_hp, tgt_train.samples, ft_tc,
          source.provenance.source_corpus + "->" + target_corpus, classes,
          ft_norm);
      ft_ck.provenance.config_hash = config_hash;
      const std::string tag = "seed" + std::to_string(i);
      save_checkpoint(ft_ck,
                      (fs::path(out_dir) / (tag + "_transferred.afck")).string());
      ft_log.save((fs::path(out_dir) / (tag + "_finetune_log.txt")).string());

      const EvalReport rt = evaluate(ft_ck, target_eval_m, spec, fopts,
                                     cache_dir, feat_threads, config_hash);
      add_eval(rt, tag + "_transferred", target_corpus);
      uar_transfer_sum += rt.uar;

      ordered_json row;
      row["seed_index"] = i;
      row["transferred_uar"] = rt.uar;

      if (scratch_baseline) {
        // From-scratch leg: same data and budget, fresh parameters, and its
        // own normalizer when normalization is on.
        std::optional<FeatureNormalizer> scratch_norm;
        LabeledSet scratch_train = tgt_train;
        if (fopts.normalize == NormalizeMode::per_corpus_z) {
          LabeledSet raw = build_set(target_train_m, classes, spec, fopts,
                                     cache_dir, feat_threads, nullptr);
          std::vector<const FeatureSequence*> fp;
          for (const Sample& s : raw.samples) fp.push_back(&s.features);
          scratch_norm = FeatureNormalizer::fit(fp);
          for (Sample& s : raw.samples) scratch_norm->apply(s.features);
          scratch_train = std::move(raw);
        }
        TrainConfig sc_tc = train_config_from(cfg, mix_seed(seed, 300 + i), ft_epochs);
        TrainingLog sc_log;
        ParameterSet sc_params =
            train(scratch_train.samples, tgt_hp, sc_tc, nullptr, &sc_log);
        Checkpoint sc_ck;
        sc_ck.hp = tgt_hp;
        sc_ck.class_labels = classes;
        sc_ck.normalizer = scratch_norm;
        sc_ck.params = std::move(sc_params);
        sc_ck.provenance = {target_corpus + " (scratch)", ft_epochs, sc_tc.seed,
                            config_hash};
        sc_log.save((fs::path(out_dir) / (tag + "_scratch_log.txt")).string());
        const EvalReport rs = evaluate(sc_ck, target_eval_m, spec, fopts,
                                       cache_dir, feat_threads, config_hash);
        add_eval(rs, tag + "_scratch", target_corpus);
        uar_scratch_sum += rs.uar;
        row["scratch_uar"] = rs.uar;
      }
      per_seed.push_back(row);
    }

    ordered_json tj;
    tj["copy_groups"] = std::vector<std::string>(policy.copy_groups.begin(),
                                                 policy.copy_groups.end());
    tj["freeze_groups"] = std::vector<std::string>(policy.freeze_groups.begin(),
                                                   policy.freeze_groups.end());
    tj["num_seeds"] = num_seeds;
    tj["per_seed"] = per_seed;
    tj["transferred_uar_mean"] = uar_transfer_sum / num_seeds;
    if (scratch_baseline) {
      tj["scratch_uar_mean"] = uar_scratch_sum / num_seeds;
      tj["uar_gain"] = (uar_transfer_sum - uar_scratch_sum) / num_seeds;
      table += "transferred uar mean " + fmt6(uar_transfer_sum / num_seeds) +
               "  scratch uar mean " + fmt6(uar_scratch_sum / num_seeds) +
               "  gain " + fmt6((uar_transfer_sum - uar_scratch_sum) / num_seeds) +
               "\n";
    }
    report["transfer"] = tj;
  }

  report["evaluations"] = evaluations;
  for (const std::string& item : cfg.get_list("eval.external_baselines")) {
    report["external_baselines"].push_back(item);
    table += "external baseline " + item + "\n";
  }

  {
    std::ofstream f(fs::path(out_dir) / "report.json");
    if (!f) fail(Err::IoError, "cannot write report.json");
    f << report.dump(2) << "\n";
  }
  {
    std::ofstream f(fs::path(out_dir) / "results.txt");
    if (!f) fail(Err::IoError, "cannot write results.txt");
    f << table;
  }
  return out_dir;
}

}  // namespace affectlab
