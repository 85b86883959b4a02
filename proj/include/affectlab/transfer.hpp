// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "affectlab/checkpoint.hpp"
#include "affectlab/seq_model.hpp"

namespace affectlab {

// Which parameter groups to copy from the source checkpoint and which to
// keep frozen during fine-tuning. Freezing a freshly initialized group is
// allowed. The default mirrors the most effective setting: copy encoder and
// attention, reinitialize the decoder, freeze nothing.
struct TransferPolicy {
  std::set<std::string> copy_groups = {"encoder", "attention"};
  std::set<std::string> freeze_groups = {};
  uint64_t fresh_init_seed = 0;
};

// Copied groups come out bit-equal to the source; every other tensor is
// bit-equal to the deterministic fresh initialization from fresh_init_seed.
// num_classes may differ from the source only when the decoder is not
// copied.
ParameterSet transfer_parameters(const Checkpoint& source,
                                 const Hyperparams& target_hp,
                                 const TransferPolicy& policy);

// Warm-start training on the low-resource set. Frozen groups are bit-equal
// before and after; zero epochs returns the start parameters unchanged.
std::pair<Checkpoint, TrainingLog> finetune(
    const ParameterSet& start, const Hyperparams& hp,
    const std::vector<Sample>& low_resource_train, const TrainConfig& cfg,
    const std::string& provenance_chain,
    const std::vector<std::string>& class_labels,
    const std::optional<FeatureNormalizer>& normalizer);

}  // namespace affectlab
