// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "affectlab/transfer.hpp"

#include "affectlab/common.hpp"

namespace affectlab {

namespace {
void check_group_names(const std::set<std::string>& groups, const char* what) {
  for (const std::string& g : groups) {
    if (g != "encoder" && g != "attention" && g != "decoder") {
      fail(Err::ConfigInvalid, std::string(what) + " names unknown group '" + g + "'");
    }
  }
}
}  // namespace

ParameterSet transfer_parameters(const Checkpoint& source,
                                 const Hyperparams& target_hp,
                                 const TransferPolicy& policy) {
  target_hp.validate();
  check_group_names(policy.copy_groups, "copy_groups");
  check_group_names(policy.freeze_groups, "freeze_groups");

  if (policy.copy_groups.count("decoder") &&
      source.hp.num_classes != target_hp.num_classes) {
    fail(Err::DecoderClassMismatch,
         "cannot copy decoder across class counts " +
             std::to_string(source.hp.num_classes) + " -> " +
             std::to_string(target_hp.num_classes));
  }

  ParameterSet fresh =
      ParameterSet::init(target_hp, policy.fresh_init_seed, Precision::f32);

  for (auto& [name, tensor] : fresh.named) {
    if (!policy.copy_groups.count(ParameterSet::group_of(name))) continue;
    const Tensor* src = source.params.find(name);
    if (!src) {
      fail(Err::GroupShapeMismatch, "source checkpoint lacks tensor '" + name + "'");
    }
    if (src->shape() != tensor.shape()) {
      fail(Err::GroupShapeMismatch, "tensor '" + name + "' shape " +
                                        src->shape_str() + " does not match target " +
                                        tensor.shape_str());
    }
    tensor = *src;
  }
  return fresh;
}

std::pair<Checkpoint, TrainingLog> finetune(
    const ParameterSet& start, const Hyperparams& hp,
    const std::vector<Sample>& low_resource_train, const TrainConfig& cfg,
    const std::string& provenance_chain,
    const std::vector<std::string>& class_labels,
    const std::optional<FeatureNormalizer>& normalizer) {
  TrainingLog log;
  ParameterSet trained = train(low_resource_train, hp, cfg, &start, &log);

  Checkpoint ck;
  ck.hp = hp;
  ck.class_labels = class_labels;
  ck.normalizer = normalizer;
  ck.params = std::move(trained);
  ck.provenance.source_corpus = provenance_chain;
  ck.provenance.epochs = cfg.epochs;
  ck.provenance.seed = cfg.seed;
  ck.provenance.config_hash = "";
  return {std::move(ck), std::move(log)};
}

}  // namespace affectlab
