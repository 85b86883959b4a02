// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "affectlab/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "affectlab/common.hpp"
#include "affectlab/rng.hpp"

namespace fs = std::filesystem;

namespace affectlab {

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool is_wav(const fs::path& p) { return lower(p.extension().string()) == ".wav"; }

std::vector<fs::path> sorted_dir_entries(const fs::path& root) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(root)) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

void check_root(const std::string& root) {
  if (!fs::exists(root)) fail(Err::MissingFile, "corpus root does not exist: " + root);
  if (!fs::is_directory(root)) {
    fail(Err::LayoutNotRecognized, "corpus root is not a directory: " + root);
  }
}

CorpusManifest scan_savee(const std::string& root) {
  CorpusManifest m;
  m.corpus_id = CorpusId::savee;
  const std::map<std::string, std::string> codes = {
      {"a", "anger"},  {"d", "disgust"}, {"f", "fear"},    {"h", "happy"},
      {"n", "neutral"}, {"sa", "sad"},   {"su", "surprise"}};
  for (const fs::path& spk_dir : sorted_dir_entries(root)) {
    if (!fs::is_directory(spk_dir)) continue;
    for (const fs::path& f : sorted_dir_entries(spk_dir)) {
      if (!fs::is_regular_file(f) || !is_wav(f)) continue;
      const std::string stem = lower(f.stem().string());
      size_t i = 0;
      while (i < stem.size() && std::isalpha(static_cast<unsigned char>(stem[i]))) ++i;
      const std::string code = stem.substr(0, i);
      const auto it = codes.find(code);
      if (it == codes.end() || i == stem.size()) {
        fail(Err::LayoutNotRecognized, "unexpected file name: " + f.string());
      }
      m.entries.push_back({f.string(), it->second, "", spk_dir.filename().string(), ""});
    }
  }
  return m;
}

CorpusManifest scan_emovo(const std::string& root) {
  CorpusManifest m;
  m.corpus_id = CorpusId::emovo;
  const std::map<std::string, std::string> codes = {
      {"dis", "disgust"}, {"gio", "joy"},      {"neu", "neutral"},
      {"pau", "fear"},    {"rab", "anger"},    {"sor", "surprise"},
      {"tri", "sad"}};
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file() && is_wav(e.path())) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const fs::path& f : files) {
    const std::string stem = lower(f.stem().string());
    std::vector<std::string> parts;
    std::stringstream ss(stem);
    std::string tok;
    while (std::getline(ss, tok, '-')) parts.push_back(tok);
    if (parts.size() != 3 || !codes.count(parts[0])) {
      fail(Err::LayoutNotRecognized, "unexpected file name: " + f.string());
    }
    m.entries.push_back({f.string(), codes.at(parts[0]), "", parts[1], ""});
  }
  return m;
}

CorpusManifest scan_affect_dirs(const std::string& root, CorpusId id,
                                const std::map<std::string, std::string>& dirs) {
  CorpusManifest m;
  m.corpus_id = id;
  for (const fs::path& affect_dir : sorted_dir_entries(root)) {
    if (!fs::is_directory(affect_dir)) continue;
    const auto it = dirs.find(lower(affect_dir.filename().string()));
    if (it == dirs.end()) {
      fail(Err::LayoutNotRecognized,
           "unexpected affect directory: " + affect_dir.string());
    }
    for (const fs::path& f : sorted_dir_entries(affect_dir)) {
      if (!fs::is_regular_file(f) || !is_wav(f)) continue;
      const std::string stem = f.stem().string();
      const size_t us = stem.find('_');
      std::string speaker = (us == std::string::npos) ? stem : stem.substr(0, us);
      // Synthetic file names carry the speaker as a spk<k> field.
      if (id == CorpusId::synthetic) {
        const size_t at = stem.rfind("spk");
        speaker = (at == std::string::npos) ? stem : stem.substr(at);
      }
      m.entries.push_back({f.string(), it->second, "", speaker, ""});
    }
  }
  return m;
}

// The studied label set; anything else (xxx, fru, sur, fea, dis, oth, ...)
// is discarded at scan time.
const std::map<std::string, std::string> kIemocapLabels = {
    {"ang", "anger"}, {"hap", "happy"}, {"exc", "excited"},
    {"sad", "sad"},   {"neu", "neutral"}};

CorpusManifest scan_iemocap(const std::string& root) {
  CorpusManifest m;
  m.corpus_id = CorpusId::iemocap;
  bool any_session = false;
  for (const fs::path& sess_dir : sorted_dir_entries(root)) {
    if (!fs::is_directory(sess_dir)) continue;
    const std::string dname = sess_dir.filename().string();
    if (dname.rfind("Session", 0) != 0) continue;
    const std::string session = dname.substr(7);
    any_session = true;

    const fs::path eval_dir = sess_dir / "dialog" / "EmoEvaluation";
    if (!fs::is_directory(eval_dir)) {
      fail(Err::LayoutNotRecognized, "missing EmoEvaluation under " + sess_dir.string());
    }
    for (const fs::path& ef : sorted_dir_entries(eval_dir)) {
      if (!fs::is_regular_file(ef) || lower(ef.extension().string()) != ".txt") continue;
      std::ifstream in(ef);
      if (!in) fail(Err::IoError, "cannot read " + ef.string());
      std::string line;
      int line_no = 0;
      while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] != '[') continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, '\t')) fields.push_back(tok);
        if (fields.size() < 3 || fields[1].empty()) {
          fail(Err::EvaluationFileUnparseable,
               ef.string() + " line " + std::to_string(line_no));
        }
        const std::string& utt = fields[1];
        const std::string label = lower(fields[2]);
        const auto it = kIemocapLabels.find(label);
        if (it == kIemocapLabels.end()) continue;  // xxx / out-of-study label

        const size_t us = utt.rfind('_');
        if (us == std::string::npos || us + 1 >= utt.size()) {
          fail(Err::EvaluationFileUnparseable,
               ef.string() + " line " + std::to_string(line_no));
        }
        const std::string dialog = utt.substr(0, us);
        const char gender = utt[us + 1];
        const std::string speaker = "Ses" + session + "_" + gender;
        const fs::path wav =
            sess_dir / "sentences" / "wav" / dialog / (utt + ".wav");
        m.entries.push_back({wav.string(), it->second, "", speaker, session});
      }
    }
  }
  if (!any_session) {
    fail(Err::LayoutNotRecognized, "no Session directories under " + root);
  }
  return m;
}

const std::map<CorpusId, int> kExpectedCounts = {
    {CorpusId::savee, 480},
    {CorpusId::emovo, 588},
    {CorpusId::urdu, 400},
    {CorpusId::iemocap, 5531},
};

}  // namespace

const char* corpus_name(CorpusId id) {
  switch (id) {
    case CorpusId::savee: return "savee";
    case CorpusId::emovo: return "emovo";
    case CorpusId::urdu: return "urdu";
    case CorpusId::iemocap: return "iemocap";
    case CorpusId::synthetic: return "synthetic";
  }
  return "unknown";
}

std::optional<CorpusId> corpus_from_name(const std::string& name) {
  for (CorpusId id : {CorpusId::savee, CorpusId::emovo, CorpusId::urdu,
                      CorpusId::iemocap, CorpusId::synthetic}) {
    if (name == corpus_name(id)) return id;
  }
  return std::nullopt;
}

CorpusManifest scan_corpus(const std::string& root, CorpusId id,
                           bool allow_partial) {
  check_root(root);
  CorpusManifest m;
  switch (id) {
    case CorpusId::savee:
      m = scan_savee(root);
      break;
    case CorpusId::emovo:
      m = scan_emovo(root);
      break;
    case CorpusId::urdu:
      m = scan_affect_dirs(root, CorpusId::urdu,
                           {{"angry", "anger"},
                            {"happy", "happy"},
                            {"neutral", "neutral"},
                            {"sad", "sad"}});
      break;
    case CorpusId::iemocap:
      m = scan_iemocap(root);
      break;
    case CorpusId::synthetic:
      m = scan_affect_dirs(root, CorpusId::synthetic,
                           {{"anger", "anger"},
                            {"happy", "happy"},
                            {"neutral", "neutral"},
                            {"sad", "sad"}});
      break;
  }
  if (m.entries.empty()) fail(Err::EmptyCorpus, "no utterances found under " + root);
  std::sort(m.entries.begin(), m.entries.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) {
              return a.audio_path < b.audio_path;
            });
  for (size_t i = 1; i < m.entries.size(); ++i) {
    if (m.entries[i].audio_path == m.entries[i - 1].audio_path) {
      fail(Err::LayoutNotRecognized,
           "duplicate audio path " + m.entries[i].audio_path);
    }
  }

  const auto it = kExpectedCounts.find(id);
  if (it != kExpectedCounts.end() && !allow_partial &&
      static_cast<int>(m.entries.size()) != it->second) {
    fail(Err::IngestionChecksum,
         std::string(corpus_name(id)) + " yielded " +
             std::to_string(m.entries.size()) + " utterances, expected " +
             std::to_string(it->second) + " (use allow_partial for subsets)");
  }
  return m;
}

LabelMap LabelMap::standard(LabelMode mode) {
  LabelMap lm;
  lm.mode = mode;
  if (mode == LabelMode::four_class) {
    lm.mapping = {{"anger", "anger"},     {"sad", "sadness"},
                  {"neutral", "neutral"}, {"happy", "happiness"},
                  {"joy", "happiness"},   {"excited", "happiness"}};
    lm.drop = {"surprise", "fear", "disgust"};
  } else {
    lm.mapping = {{"anger", "negative"},   {"sad", "negative"},
                  {"fear", "negative"},    {"disgust", "negative"},
                  {"happy", "positive"},   {"joy", "positive"},
                  {"excited", "positive"}, {"surprise", "positive"}};
    lm.drop = {"neutral"};
  }
  return lm;
}

CorpusManifest map_labels(const CorpusManifest& manifest, const LabelMap& map) {
  CorpusManifest out;
  out.corpus_id = manifest.corpus_id;
  for (const ManifestEntry& e : manifest.entries) {
    // Already canonical entries pass through untouched (idempotence).
    if (!e.canonical_label.empty()) {
      out.entries.push_back(e);
      continue;
    }
    const auto it = map.mapping.find(e.raw_label);
    if (it != map.mapping.end()) {
      ManifestEntry kept = e;
      kept.canonical_label = it->second;
      out.entries.push_back(std::move(kept));
      continue;
    }
    if (!map.drop.count(e.raw_label)) {
      fail(Err::UnknownRawLabel, std::string(corpus_name(manifest.corpus_id)) +
                                     " label '" + e.raw_label + "'");
    }
  }
  return out;
}

std::vector<std::string> canonical_classes(const CorpusManifest& manifest) {
  std::set<std::string> s;
  for (const ManifestEntry& e : manifest.entries) {
    if (!e.canonical_label.empty()) s.insert(e.canonical_label);
  }
  return {s.begin(), s.end()};
}

SplitPlan make_splits(const CorpusManifest& manifest, SplitScheme scheme,
                      uint64_t seed, bool speaker_aware) {
  const int N = static_cast<int>(manifest.entries.size());
  if (N == 0) fail(Err::EmptyDataset, "split of empty manifest");

  SplitPlan plan;
  plan.scheme = scheme;
  plan.seed = seed;
  plan.assignment.assign(N, 0);

  if (scheme == SplitScheme::session_holdout) {
    plan.num_partitions = 2;
    for (int i = 0; i < N; ++i) {
      const std::string& s = manifest.entries[i].session_id;
      if (s.empty()) {
        fail(Err::ConfigInvalid, "session_holdout needs session ids");
      }
      plan.assignment[i] = (s == "1" || s == "2" || s == "3") ? 0 : 1;
    }
    return plan;
  }

  // Class-keyed index lists, iterated in sorted class order.
  std::map<std::string, std::vector<int>> per_class;
  for (int i = 0; i < N; ++i) {
    const ManifestEntry& e = manifest.entries[i];
    const std::string& label =
        e.canonical_label.empty() ? e.raw_label : e.canonical_label;
    per_class[label].push_back(i);
  }

  Xoshiro256 rng(mix_seed(seed, 17));

  if (scheme == SplitScheme::kfold_3) {
    plan.num_partitions = 3;
    for (auto& [label, idx] : per_class) {
      if (static_cast<int>(idx.size()) < 3) {
        fail(Err::TooFewPerClass, "class '" + label + "' has " +
                                      std::to_string(idx.size()) +
                                      " entries, need >= 3 for 3 folds");
      }
      rng.shuffle(idx);
      for (size_t j = 0; j < idx.size(); ++j) {
        plan.assignment[idx[j]] = static_cast<int>(j % 3);
      }
    }
    return plan;
  }

  plan.num_partitions = 2;
  if (!speaker_aware) {
    for (auto& [label, idx] : per_class) {
      rng.shuffle(idx);
      const int n_test = static_cast<int>(std::llround(0.2 * idx.size()));
      for (int j = 0; j < n_test; ++j) plan.assignment[idx[j]] = 1;
    }
    return plan;
  }

  // Speaker-aware: whole speakers go to the eval side until it holds about
  // 20% of the utterances. Stratification is then only approximate.
  std::map<std::string, std::vector<int>> per_speaker;
  for (int i = 0; i < N; ++i) per_speaker[manifest.entries[i].speaker_id].push_back(i);
  std::vector<std::string> speakers;
  for (const auto& [spk, idx] : per_speaker) speakers.push_back(spk);
  rng.shuffle(speakers);
  int in_test = 0;
  for (const std::string& spk : speakers) {
    if (in_test >= static_cast<int>(std::llround(0.2 * N))) break;
    for (int i : per_speaker[spk]) plan.assignment[i] = 1;
    in_test += static_cast<int>(per_speaker[spk].size());
  }
  return plan;
}

CorpusManifest select_partition(const CorpusManifest& manifest,
                                const SplitPlan& plan, int partition,
                                bool invert) {
  if (plan.assignment.size() != manifest.entries.size()) {
    fail(Err::DimensionMismatch, "split plan does not match manifest");
  }
  CorpusManifest out;
  out.corpus_id = manifest.corpus_id;
  for (size_t i = 0; i < manifest.entries.size(); ++i) {
    const bool match = plan.assignment[i] == partition;
    if (match != invert) out.entries.push_back(manifest.entries[i]);
  }
  return out;
}

void save_manifest_tsv(const std::string& path, const CorpusManifest& manifest) {
  std::ofstream f(path);
  if (!f) fail(Err::IoError, "cannot write " + path);
  for (const ManifestEntry& e : manifest.entries) {
    f << corpus_name(manifest.corpus_id) << '\t' << e.audio_path << '\t'
      << e.raw_label << '\t' << e.canonical_label << '\t' << e.speaker_id
      << '\t' << e.session_id << '\n';
  }
}

CorpusManifest load_manifest_tsv(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(Err::MissingFile, "cannot open manifest " + path);
  CorpusManifest m;
  std::string line;
  int line_no = 0;
  bool first = true;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, '\t')) fields.push_back(tok);
    fields.resize(6);
    const auto id = corpus_from_name(fields[0]);
    if (!id || fields[1].empty()) {
      fail(Err::LayoutNotRecognized,
           "bad manifest line " + std::to_string(line_no) + " in " + path);
    }
    if (first) {
      m.corpus_id = *id;
      first = false;
    }
    m.entries.push_back({fields[1], fields[2], fields[3], fields[4], fields[5]});
  }
  if (m.entries.empty()) fail(Err::EmptyCorpus, "empty manifest " + path);
  return m;
}

}  // namespace affectlab
