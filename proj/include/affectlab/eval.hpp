// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "affectlab/checkpoint.hpp"
#include "affectlab/corpus.hpp"
#include "affectlab/features.hpp"

namespace affectlab {

struct ConfusionMatrix {
  std::vector<std::string> classes;
  std::vector<int64_t> counts;  // row-major, rows = true, columns = predicted

  explicit ConfusionMatrix(std::vector<std::string> cls = {});
  void add(int true_class, int predicted_class);
  int64_t at(int true_class, int predicted_class) const;
  int64_t total() const;
  int size() const { return static_cast<int>(classes.size()); }
};

double accuracy(const ConfusionMatrix& cm);

// Mean per-class recall. Classes with zero true instances are excluded from
// the mean; a matrix with no true instances at all is an error.
double uar(const ConfusionMatrix& cm);

// Recall for every class that has true instances.
std::map<std::string, double> per_class_recall(const ConfusionMatrix& cm);

struct EvalReport {
  double accuracy = 0.0;
  double uar = 0.0;
  std::map<std::string, double> per_class_recall;
  ConfusionMatrix confusion;
  std::string config_hash;
  std::string checkpoint_provenance;
};

// Runs the classifier over every manifest entry; argmax decisions with ties
// broken toward the lowest class index. The manifest's canonical labels
// must be a subset of the checkpoint's class list.
EvalReport evaluate(const Checkpoint& ck, const CorpusManifest& test_manifest,
                    const FrameSpec& spec, const FeatureOptions& options,
                    const std::string& cache_dir = "", int threads = 0,
                    const std::string& config_hash = "");

}  // namespace affectlab
