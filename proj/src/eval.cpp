// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "affectlab/eval.hpp"

#include <algorithm>

#include "affectlab/common.hpp"
#include "affectlab/seq_model.hpp"

namespace affectlab {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> cls)
    : classes(std::move(cls)),
      counts(classes.size() * classes.size(), 0) {}

void ConfusionMatrix::add(int true_class, int predicted_class) {
  const int C = size();
  if (true_class < 0 || true_class >= C || predicted_class < 0 ||
      predicted_class >= C) {
    fail(Err::IndexOutOfRange, "confusion matrix index");
  }
  counts[static_cast<size_t>(true_class) * C + predicted_class]++;
}

int64_t ConfusionMatrix::at(int true_class, int predicted_class) const {
  return counts[static_cast<size_t>(true_class) * size() + predicted_class];
}

int64_t ConfusionMatrix::total() const {
  int64_t t = 0;
  for (int64_t c : counts) t += c;
  return t;
}

double accuracy(const ConfusionMatrix& cm) {
  const int64_t t = cm.total();
  if (t == 0) fail(Err::AllClassesEmpty, "confusion matrix has no entries");
  int64_t diag = 0;
  for (int c = 0; c < cm.size(); ++c) diag += cm.at(c, c);
  return static_cast<double>(diag) / static_cast<double>(t);
}

double uar(const ConfusionMatrix& cm) {
  double sum = 0.0;
  int included = 0;
  for (int c = 0; c < cm.size(); ++c) {
    int64_t row = 0;
    for (int p = 0; p < cm.size(); ++p) row += cm.at(c, p);
    if (row == 0) continue;
    sum += static_cast<double>(cm.at(c, c)) / static_cast<double>(row);
    ++included;
  }
  if (included == 0) fail(Err::AllClassesEmpty, "no class has true instances");
  return sum / included;
}

std::map<std::string, double> per_class_recall(const ConfusionMatrix& cm) {
  std::map<std::string, double> out;
  for (int c = 0; c < cm.size(); ++c) {
    int64_t row = 0;
    for (int p = 0; p < cm.size(); ++p) row += cm.at(c, p);
    if (row == 0) continue;
    out[cm.classes[c]] =
        static_cast<double>(cm.at(c, c)) / static_cast<double>(row);
  }
  return out;
}

EvalReport evaluate(const Checkpoint& ck, const CorpusManifest& test_manifest,
                    const FrameSpec& spec, const FeatureOptions& options,
                    const std::string& cache_dir, int threads,
                    const std::string& config_hash) {
  if (test_manifest.entries.empty()) {
    fail(Err::EmptyDataset, "evaluation manifest is empty");
  }

  std::map<std::string, int> class_index;
  for (size_t i = 0; i < ck.class_labels.size(); ++i) {
    class_index[ck.class_labels[i]] = static_cast<int>(i);
  }
  for (const ManifestEntry& e : test_manifest.entries) {
    if (e.canonical_label.empty() || !class_index.count(e.canonical_label)) {
      fail(Err::ClassSetMismatch,
           "label '" + e.canonical_label + "' of " + e.audio_path +
               " is not among the checkpoint classes");
    }
  }

  std::vector<std::string> paths;
  paths.reserve(test_manifest.entries.size());
  for (const ManifestEntry& e : test_manifest.entries) paths.push_back(e.audio_path);
  std::vector<FeatureSequence> feats =
      extract_batch(paths, spec, options, cache_dir, threads);

  EvalReport report;
  report.confusion = ConfusionMatrix(ck.class_labels);
  report.config_hash = config_hash;
  report.checkpoint_provenance = ck.provenance.summary();

  for (size_t i = 0; i < feats.size(); ++i) {
    if (ck.normalizer) ck.normalizer->apply(feats[i]);
    const Tensor probs = classify(feats[i], ck.params, ck.hp);
    const int predicted = argmax_class(probs);
    const int truth = class_index.at(test_manifest.entries[i].canonical_label);
    report.confusion.add(truth, predicted);
  }

  report.accuracy = accuracy(report.confusion);
  report.uar = uar(report.confusion);
  report.per_class_recall = per_class_recall(report.confusion);
  return report;
}

}  // namespace affectlab
