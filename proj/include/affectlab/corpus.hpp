// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Corpus adapters normalize four published speech-affect corpora plus the
// synthetic generator output into one manifest shape. Expected layouts:
//
//   savee:   root/<speaker>/<code><nn>.wav, codes a d f h n sa su
//   emovo:   root/**/<code>-<actor>-<sentence>.wav,
//            codes dis gio neu pau rab sor tri
//   urdu:    root/<Affect>/<file>.wav, affect dirs Angry Happy Neutral Sad;
//            speaker is the first underscore field of the file name
//   iemocap: root/Session<k>/dialog/EmoEvaluation/<dialog>.txt with
//            bracketed utterance lines; audio resolved to
//            Session<k>/sentences/wav/<dialog>/<utt>.wav. Only utterances
//            whose majority label is in the studied set (ang hap exc sad
//            neu) are kept; xxx and other labels are dropped.
//   synthetic: root/<affect>/<file>.wav, affect dirs anger happy neutral sad
//
// Raw labels are normalized to lowercase words (anger, sad, neutral, happy,
// joy, excited, surprise, fear, disgust). Scans verify the published
// utterance counts (480 / 588 / 400 / 5531) unless allow_partial is set.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace affectlab {

enum class CorpusId { savee, emovo, urdu, iemocap, synthetic };

const char* corpus_name(CorpusId id);
std::optional<CorpusId> corpus_from_name(const std::string& name);

struct ManifestEntry {
  std::string audio_path;
  std::string raw_label;
  std::string canonical_label;  // empty until map_labels
  std::string speaker_id;
  std::string session_id;  // empty when the corpus has no sessions
};

struct CorpusManifest {
  CorpusId corpus_id = CorpusId::synthetic;
  std::vector<ManifestEntry> entries;  // sorted by audio_path
};

CorpusManifest scan_corpus(const std::string& root, CorpusId id,
                           bool allow_partial = false);

enum class LabelMode { four_class, binary_valence };

// four_class keeps {anger, sadness, neutral, happiness} with happy/joy/
// excited merged into happiness; binary_valence folds onto negative/positive
// and drops neutral.
struct LabelMap {
  LabelMode mode = LabelMode::four_class;
  std::map<std::string, std::string> mapping;
  std::set<std::string> drop;

  static LabelMap standard(LabelMode mode);
};

CorpusManifest map_labels(const CorpusManifest& manifest, const LabelMap& map);

// Ordered list of canonical labels present in a labeled manifest.
std::vector<std::string> canonical_classes(const CorpusManifest& manifest);

enum class SplitScheme { ratio_80_20, kfold_3, session_holdout };

struct SplitPlan {
  SplitScheme scheme = SplitScheme::ratio_80_20;
  uint64_t seed = 0;
  int num_partitions = 2;
  // ratio_80_20 / session_holdout: 0 = train, 1 = eval.
  // kfold_3: the fold in which the entry is the test item.
  std::vector<int> assignment;
};

SplitPlan make_splits(const CorpusManifest& manifest, SplitScheme scheme,
                      uint64_t seed, bool speaker_aware = false);

CorpusManifest select_partition(const CorpusManifest& manifest,
                                const SplitPlan& plan, int partition,
                                bool invert = false);

// UTF-8 TSV: corpus_id, audio_path, raw_label, canonical_label, speaker_id,
// session_id.
void save_manifest_tsv(const std::string& path, const CorpusManifest& manifest);
CorpusManifest load_manifest_tsv(const std::string& path);

}  // namespace affectlab
