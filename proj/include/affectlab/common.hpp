// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace affectlab {

enum class Err {
  // io / decoding
  MissingFile,
  BadMagic,
  UnsupportedEncoding,
  TruncatedData,
  IoError,
  // clips / dsp
  EmptyClip,
  NegativeChroma,
  // tensors / model
  ShapeMismatch,
  IndexOutOfRange,
  NonScalarLoss,
  DimensionMismatch,
  EmptyBatch,
  LabelOutOfRange,
  EmptyDataset,
  NumericFailure,
  // checkpoints / transfer
  ShapeTableCorrupt,
  VersionUnsupported,
  ChecksumMismatch,
  GroupShapeMismatch,
  DecoderClassMismatch,
  // corpora
  LayoutNotRecognized,
  EmptyCorpus,
  EvaluationFileUnparseable,
  UnknownRawLabel,
  TooFewPerClass,
  IngestionChecksum,
  // evaluation / config
  ClassSetMismatch,
  AllClassesEmpty,
  ConfigInvalid,
};

const char* err_name(Err e);

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& msg);
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] void fail(Err code, const std::string& msg);

// 64-bit FNV-1a. Used for config hashes and feature cache keys.
uint64_t fnv1a64(const void* data, size_t n,
                 uint64_t seed = 1469598103934665603ull);
uint64_t fnv1a64(const std::string& s,
                 uint64_t seed = 1469598103934665603ull);
std::string hex64(uint64_t v);

}  // namespace affectlab
