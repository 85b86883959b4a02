// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0
//
// On-disk model snapshot. Binary format, little-endian, version 1:
//
//   magic 'AFCK' | u32 version | u32 crc32(payload)
//   hyperparams: 5 x u32 (input_dim, hidden_dim, encoder_layers,
//                         num_classes, attention_dim)
//   provenance: str source_corpus | u32 epochs | u64 seed | str config_hash
//   classes:   u32 count | count x str   (ordered label list)
//   normalizer: u8 present | [u32 dim | dim x f64 mean | dim x f64 std]
//   table:     u32 count | count x (str name | u32 ndim | ndim x u32)
//              entries sorted by name, names unique
//   payload:   concatenated f32 tensor values in table order
//
// str = u32 length + bytes. The CRC covers the payload bytes, so any
// single-byte payload corruption is detected. Tensor values are float32 on
// disk; the in-memory float storage width makes save/load the identity on
// payload bytes. A human-readable provenance sidecar is written next to the
// checkpoint as <path>.provenance.txt.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "affectlab/features.hpp"
#include "affectlab/seq_model.hpp"

namespace affectlab {

struct Provenance {
  std::string source_corpus;
  int epochs = 0;
  uint64_t seed = 0;
  std::string config_hash;

  std::string summary() const;
};

struct Checkpoint {
  int format_version = 1;
  Hyperparams hp;
  std::vector<std::string> class_labels;
  std::optional<FeatureNormalizer> normalizer;
  ParameterSet params;
  Provenance provenance;
};

void save_checkpoint(const Checkpoint& ck, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

uint32_t crc32_ieee(const void* data, size_t n, uint32_t seed = 0);

}  // namespace affectlab
