// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Subcommands: scan, extract, synth-corpus, train,
// transfer, finetune, evaluate, experiment. Exit codes: 0 success, 2 config
// error, 3 data error, 4 numeric failure, 1 anything else.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include "affectlab/common.hpp"
#include "affectlab/config.hpp"
#include "affectlab/corpus.hpp"
#include "affectlab/eval.hpp"
#include "affectlab/experiment.hpp"
#include "affectlab/features.hpp"
#include "affectlab/rng.hpp"
#include "affectlab/seq_model.hpp"
#include "affectlab/synthetic.hpp"
#include "affectlab/transfer.hpp"

namespace fs = std::filesystem;
using namespace affectlab;

namespace {

int exit_code_for(Err e) {
  switch (e) {
    case Err::ConfigInvalid:
      return 2;
    case Err::NumericFailure:
      return 4;
    case Err::MissingFile:
    case Err::BadMagic:
    case Err::UnsupportedEncoding:
    case Err::TruncatedData:
    case Err::EmptyClip:
    case Err::EmptyCorpus:
    case Err::EmptyDataset:
    case Err::LayoutNotRecognized:
    case Err::EvaluationFileUnparseable:
    case Err::UnknownRawLabel:
    case Err::IngestionChecksum:
    case Err::VersionUnsupported:
    case Err::ChecksumMismatch:
    case Err::ShapeTableCorrupt:
    case Err::ClassSetMismatch:
      return 3;
    default:
      return 1;
  }
}

CorpusId parse_corpus(const std::string& name) {
  const auto id = corpus_from_name(name);
  if (!id) fail(Err::ConfigInvalid, "unknown corpus '" + name + "'");
  return *id;
}

LabelMap parse_label_mode(const std::string& mode) {
  if (mode == "four_class") return LabelMap::standard(LabelMode::four_class);
  if (mode == "binary_valence") return LabelMap::standard(LabelMode::binary_valence);
  fail(Err::ConfigInvalid, "label mode must be four_class or binary_valence");
}

std::string env_data_root() {
  const char* v = std::getenv("AFFECTLAB_DATA");
  return v ? v : "";
}

std::string resolve_root(const std::string& root, const std::string& data_root) {
  const std::string base = data_root.empty() ? env_data_root() : data_root;
  if (root.empty() || base.empty() || fs::path(root).is_absolute()) return root;
  return (fs::path(base) / root).string();
}

struct CommonTrainArgs {
  int epochs = 100;
  int batch_size = 16;
  double lr = 1e-3;
  uint64_t seed = 1;
  int hidden_dim = 128;
  int encoder_layers = 2;
  int attention_dim = 128;
  std::string freeze;
  int threads = 1;
};

TrainConfig to_train_config(const CommonTrainArgs& a) {
  TrainConfig tc;
  tc.epochs = a.epochs;
  tc.batch_size = a.batch_size;
  tc.lr = a.lr;
  tc.seed = a.seed;
  tc.threads = a.threads;
  std::stringstream ss(a.freeze);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) tc.freeze_groups.insert(tok);
  }
  return tc;
}

struct LoadedData {
  CorpusManifest manifest;
  std::vector<std::string> classes;
  std::vector<Sample> samples;
};

LoadedData load_training_data(const std::string& root, const std::string& corpus,
                              const std::string& labels, bool allow_partial,
                              const std::string& cache_dir) {
  LoadedData d;
  const CorpusManifest raw = scan_corpus(root, parse_corpus(corpus), allow_partial);
  d.manifest = map_labels(raw, parse_label_mode(labels));
  d.classes = canonical_classes(d.manifest);
  std::map<std::string, int> index;
  for (size_t i = 0; i < d.classes.size(); ++i) index[d.classes[i]] = (int)i;

  std::vector<std::string> paths;
  for (const auto& e : d.manifest.entries) paths.push_back(e.audio_path);
  FrameSpec spec;
  FeatureOptions opts;
  std::vector<FeatureSequence> feats = extract_batch(paths, spec, opts, cache_dir, 0);
  d.samples.resize(feats.size());
  for (size_t i = 0; i < feats.size(); ++i) {
    d.samples[i] = {std::move(feats[i]), index.at(d.manifest.entries[i].canonical_label)};
  }
  return d;
}

void print_report(const EvalReport& r) {
  std::printf("utterances %lld  accuracy %.6f  uar %.6f\n",
              static_cast<long long>(r.confusion.total()), r.accuracy, r.uar);
  for (const auto& [cls, rec] : r.per_class_recall) {
    std::printf("  recall[%s] = %.6f\n", cls.c_str(), rec);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"speech affect recognition toolkit"};
  app.require_subcommand(1);

  // scan
  auto* scan = app.add_subcommand("scan", "inventory a corpus into a manifest");
  std::string scan_root, scan_corpus_name, scan_labels = "four_class", scan_out;
  std::string data_root;
  bool allow_partial = false;
  scan->add_option("--root", scan_root, "corpus root directory")->required();
  scan->add_option("--corpus", scan_corpus_name, "savee|emovo|urdu|iemocap|synthetic")
      ->required();
  scan->add_option("--labels", scan_labels, "four_class|binary_valence|raw");
  scan->add_option("--out", scan_out, "manifest TSV path");
  scan->add_option("--data-root", data_root, "base directory for relative roots");
  scan->add_flag("--allow-partial", allow_partial, "skip the utterance count check");

  // synth-corpus
  auto* synth = app.add_subcommand("synth-corpus", "generate a synthetic corpus");
  std::string synth_out, synth_profile = "tones";
  std::string synth_variant = "a";
  int synth_clips = 10;
  uint64_t synth_seed = 1;
  synth->add_option("--out", synth_out, "output root")->required();
  synth->add_option("--profile", synth_profile, "tones|contours");
  synth->add_option("--variant", synth_variant, "a|b");
  synth->add_option("--clips-per-class", synth_clips, "clips per affect class");
  synth->add_option("--seed", synth_seed, "generator seed");

  // extract
  auto* extract = app.add_subcommand("extract", "extract features into a cache");
  std::string ex_root, ex_corpus, ex_cache;
  extract->add_option("--root", ex_root, "corpus root")->required();
  extract->add_option("--corpus", ex_corpus, "corpus id")->required();
  extract->add_option("--out", ex_cache, "cache directory")->required();
  extract->add_option("--data-root", data_root, "base directory for relative roots");
  extract->add_flag("--allow-partial", allow_partial);

  // train
  auto* train_cmd = app.add_subcommand("train", "train a model on one corpus");
  std::string tr_root, tr_corpus, tr_labels = "four_class", tr_out, tr_cache;
  CommonTrainArgs tr_args;
  train_cmd->add_option("--root", tr_root)->required();
  train_cmd->add_option("--corpus", tr_corpus)->required();
  train_cmd->add_option("--labels", tr_labels);
  train_cmd->add_option("--out", tr_out, "checkpoint path")->required();
  train_cmd->add_option("--cache", tr_cache, "feature cache directory");
  train_cmd->add_option("--epochs", tr_args.epochs);
  train_cmd->add_option("--batch-size", tr_args.batch_size);
  train_cmd->add_option("--lr", tr_args.lr);
  train_cmd->add_option("--seed", tr_args.seed);
  train_cmd->add_option("--hidden-dim", tr_args.hidden_dim);
  train_cmd->add_option("--encoder-layers", tr_args.encoder_layers);
  train_cmd->add_option("--attention-dim", tr_args.attention_dim);
  train_cmd->add_option("--freeze", tr_args.freeze, "comma-separated groups");
  train_cmd->add_option("--threads", tr_args.threads);
  train_cmd->add_option("--data-root", data_root);
  train_cmd->add_flag("--allow-partial", allow_partial);

  // transfer
  auto* transfer_cmd = app.add_subcommand("transfer", "copy parameter groups");
  std::string tf_source, tf_out, tf_copy = "encoder,attention";
  uint64_t tf_fresh_seed = 1;
  int tf_num_classes = 0;
  transfer_cmd->add_option("--source", tf_source, "source checkpoint")->required();
  transfer_cmd->add_option("--out", tf_out, "output checkpoint")->required();
  transfer_cmd->add_option("--copy", tf_copy, "groups to copy");
  transfer_cmd->add_option("--fresh-seed", tf_fresh_seed);
  transfer_cmd->add_option("--num-classes", tf_num_classes,
                           "target classes (default: source)");

  // finetune
  auto* ft_cmd = app.add_subcommand("finetune", "warm-start training");
  std::string ft_start, ft_root, ft_corpus, ft_labels = "four_class", ft_out, ft_cache;
  CommonTrainArgs ft_args;
  ft_cmd->add_option("--start", ft_start, "starting checkpoint")->required();
  ft_cmd->add_option("--root", ft_root)->required();
  ft_cmd->add_option("--corpus", ft_corpus)->required();
  ft_cmd->add_option("--labels", ft_labels);
  ft_cmd->add_option("--out", ft_out, "checkpoint path")->required();
  ft_cmd->add_option("--cache", ft_cache);
  ft_cmd->add_option("--epochs", ft_args.epochs);
  ft_cmd->add_option("--batch-size", ft_args.batch_size);
  ft_cmd->add_option("--lr", ft_args.lr);
  ft_cmd->add_option("--seed", ft_args.seed);
  ft_cmd->add_option("--freeze", ft_args.freeze);
  ft_cmd->add_option("--threads", ft_args.threads);
  ft_cmd->add_option("--data-root", data_root);
  ft_cmd->add_flag("--allow-partial", allow_partial);

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "score a checkpoint on a corpus");
  std::string ev_ckpt, ev_root, ev_corpus, ev_labels = "four_class", ev_cache;
  eval_cmd->add_option("--checkpoint", ev_ckpt)->required();
  eval_cmd->add_option("--root", ev_root)->required();
  eval_cmd->add_option("--corpus", ev_corpus)->required();
  eval_cmd->add_option("--labels", ev_labels);
  eval_cmd->add_option("--cache", ev_cache);
  eval_cmd->add_option("--data-root", data_root);
  eval_cmd->add_flag("--allow-partial", allow_partial);

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "run a config end to end");
  std::string exp_config, exp_out;
  std::optional<uint64_t> exp_seed;
  exp_cmd->add_option("--config", exp_config, "config file")->required();
  exp_cmd->add_option("--out", exp_out, "override experiment.out");
  exp_cmd->add_option("--seed", exp_seed, "override experiment.seed");
  exp_cmd->add_option("--data-root", data_root, "override data.data_root");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*scan) {
      CorpusManifest m = scan_corpus(resolve_root(scan_root, data_root),
                                     parse_corpus(scan_corpus_name), allow_partial);
      if (scan_labels != "raw") m = map_labels(m, parse_label_mode(scan_labels));
      std::map<std::string, int> counts;
      for (const auto& e : m.entries) {
        counts[e.canonical_label.empty() ? e.raw_label : e.canonical_label]++;
      }
      std::printf("%s: %zu utterances\n", scan_corpus_name.c_str(), m.entries.size());
      for (const auto& [label, n] : counts) {
        std::printf("  %-12s %d\n", label.c_str(), n);
      }
      if (!scan_out.empty()) save_manifest_tsv(scan_out, m);
    } else if (*synth) {
      SynthSpec sp;
      sp.profile = synth_profile == "contours" ? SynthProfile::contours
                                               : SynthProfile::tones;
      if (synth_profile != "tones" && synth_profile != "contours") {
        fail(Err::ConfigInvalid, "profile must be tones or contours");
      }
      sp.variant = synth_variant.empty() ? 'a' : synth_variant[0];
      sp.clips_per_class = synth_clips;
      sp.seed = synth_seed;
      generate_synthetic_corpus(synth_out, sp);
      std::printf("wrote %d clips under %s\n", 4 * synth_clips, synth_out.c_str());
    } else if (*extract) {
      const CorpusManifest m = scan_corpus(resolve_root(ex_root, data_root),
                                           parse_corpus(ex_corpus), allow_partial);
      std::vector<std::string> paths;
      for (const auto& e : m.entries) paths.push_back(e.audio_path);
      FrameSpec spec;
      FeatureOptions opts;
      const auto feats = extract_batch(paths, spec, opts, ex_cache, 0);
      std::printf("extracted %zu sequences (dim %d) into %s\n", feats.size(),
                  feats.empty() ? 0 : feats[0].dim, ex_cache.c_str());
    } else if (*train_cmd) {
      LoadedData d = load_training_data(resolve_root(tr_root, data_root), tr_corpus,
                                        tr_labels, allow_partial, tr_cache);
      Hyperparams hp;
      hp.input_dim = d.samples[0].features.dim;
      hp.hidden_dim = tr_args.hidden_dim;
      hp.encoder_layers = tr_args.encoder_layers;
      hp.attention_dim = tr_args.attention_dim;
      hp.num_classes = static_cast<int>(d.classes.size());
      TrainingLog log;
      const TrainConfig tc = to_train_config(tr_args);
      ParameterSet params = train(d.samples, hp, tc, nullptr, &log);
      Checkpoint ck;
      ck.hp = hp;
      ck.class_labels = d.classes;
      ck.params = std::move(params);
      ck.provenance = {tr_corpus, tc.epochs, tc.seed, ""};
      save_checkpoint(ck, tr_out);
      log.save(tr_out + ".log.txt");
      std::printf("trained %d epochs on %zu utterances -> %s\n", tc.epochs,
                  d.samples.size(), tr_out.c_str());
      if (!log.rows.empty()) {
        std::printf("final loss %.6f accuracy %.4f\n", log.rows.back().mean_loss,
                    log.rows.back().train_accuracy);
      }
    } else if (*transfer_cmd) {
      const Checkpoint source = load_checkpoint(tf_source);
      TransferPolicy policy;
      policy.copy_groups.clear();
      std::stringstream ss(tf_copy);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) policy.copy_groups.insert(tok);
      }
      policy.fresh_init_seed = tf_fresh_seed;
      Hyperparams hp = source.hp;
      if (tf_num_classes > 0) hp.num_classes = tf_num_classes;
      Checkpoint out;
      out.hp = hp;
      out.class_labels = (hp.num_classes == source.hp.num_classes)
                             ? source.class_labels
                             : std::vector<std::string>{};
      if (policy.copy_groups.count("encoder")) out.normalizer = source.normalizer;
      out.params = transfer_parameters(source, hp, policy);
      out.provenance = {source.provenance.source_corpus + " (transferred)", 0,
                        tf_fresh_seed, source.provenance.config_hash};
      save_checkpoint(out, tf_out);
      std::printf("transferred %zu groups -> %s\n", policy.copy_groups.size(),
                  tf_out.c_str());
    } else if (*ft_cmd) {
      const Checkpoint start = load_checkpoint(ft_start);
      LoadedData d = load_training_data(resolve_root(ft_root, data_root), ft_corpus,
                                        ft_labels, allow_partial, ft_cache);
      if (static_cast<int>(d.classes.size()) != start.hp.num_classes) {
        fail(Err::ClassSetMismatch, "fine-tune data has " +
                                        std::to_string(d.classes.size()) +
                                        " classes, checkpoint expects " +
                                        std::to_string(start.hp.num_classes));
      }
      // Label indices follow the checkpoint's class order when it has one.
      if (!start.class_labels.empty() && d.classes != start.class_labels) {
        fail(Err::ClassSetMismatch,
             "fine-tune class set does not match the checkpoint classes");
      }
      if (start.normalizer) {
        for (Sample& s : d.samples) start.normalizer->apply(s.features);
      }
      const TrainConfig tc = to_train_config(ft_args);
      auto [ck, log] = finetune(start.params, start.hp, d.samples, tc,
                                start.provenance.source_corpus + "->" + ft_corpus,
                                d.classes, start.normalizer);
      save_checkpoint(ck, ft_out);
      log.save(ft_out + ".log.txt");
      std::printf("fine-tuned %d epochs -> %s\n", tc.epochs, ft_out.c_str());
    } else if (*eval_cmd) {
      const Checkpoint ck = load_checkpoint(ev_ckpt);
      CorpusManifest m = scan_corpus(resolve_root(ev_root, data_root),
                                     parse_corpus(ev_corpus), allow_partial);
      m = map_labels(m, parse_label_mode(ev_labels));
      FrameSpec spec;
      FeatureOptions opts;
      const EvalReport r = evaluate(ck, m, spec, opts, ev_cache, 0, "");
      print_report(r);
    } else if (*exp_cmd) {
      ConfigFile cfg = ConfigFile::parse_file(exp_config);
      if (!exp_out.empty()) cfg.set("experiment.out", exp_out);
      if (exp_seed) cfg.set("experiment.seed", std::to_string(*exp_seed));
      if (!data_root.empty()) cfg.set("data.data_root", data_root);
      const std::string out = run_experiment(cfg);
      std::printf("experiment complete: %s\n", out.c_str());
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
