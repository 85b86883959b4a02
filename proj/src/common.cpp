// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "affectlab/common.hpp"

#include <cstdio>

namespace affectlab {

const char* err_name(Err e) {
  switch (e) {
    case Err::MissingFile: return "MissingFile";
    case Err::BadMagic: return "BadMagic";
    case Err::UnsupportedEncoding: return "UnsupportedEncoding";
    case Err::TruncatedData: return "TruncatedData";
    case Err::IoError: return "IoError";
    case Err::EmptyClip: return "EmptyClip";
    case Err::NegativeChroma: return "NegativeChroma";
    case Err::ShapeMismatch: return "ShapeMismatch";
    case Err::IndexOutOfRange: return "IndexOutOfRange";
    case Err::NonScalarLoss: return "NonScalarLoss";
    case Err::DimensionMismatch: return "DimensionMismatch";
    case Err::EmptyBatch: return "EmptyBatch";
    case Err::LabelOutOfRange: return "LabelOutOfRange";
    case Err::EmptyDataset: return "EmptyDataset";
    case Err::NumericFailure: return "NumericFailure";
    case Err::ShapeTableCorrupt: return "ShapeTableCorrupt";
    case Err::VersionUnsupported: return "VersionUnsupported";
    case Err::ChecksumMismatch: return "ChecksumMismatch";
    case Err::GroupShapeMismatch: return "GroupShapeMismatch";
    case Err::DecoderClassMismatch: return "DecoderClassMismatch";
    case Err::LayoutNotRecognized: return "LayoutNotRecognized";
    case Err::EmptyCorpus: return "EmptyCorpus";
    case Err::EvaluationFileUnparseable: return "EvaluationFileUnparseable";
    case Err::UnknownRawLabel: return "UnknownRawLabel";
    case Err::TooFewPerClass: return "TooFewPerClass";
    case Err::IngestionChecksum: return "IngestionChecksum";
    case Err::ClassSetMismatch: return "ClassSetMismatch";
    case Err::AllClassesEmpty: return "AllClassesEmpty";
    case Err::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

Error::Error(Err code, const std::string& msg)
    : std::runtime_error(std::string(err_name(code)) + ": " + msg),
      code_(code) {}

void fail(Err code, const std::string& msg) { throw Error(code, msg); }

uint64_t fnv1a64(const void* data, size_t n, uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  uint64_t h = seed;
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

uint64_t fnv1a64(const std::string& s, uint64_t seed) {
  return fnv1a64(s.data(), s.size(), seed);
}

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace affectlab
