// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "affectlab/checkpoint.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

#include "affectlab/common.hpp"

namespace affectlab {

namespace {

constexpr char kMagic[4] = {'A', 'F', 'C', 'K'};
constexpr uint32_t kVersion = 1;
constexpr uint32_t kMaxStr = 4096;
constexpr uint32_t kMaxTensors = 4096;
constexpr uint32_t kMaxRank = 4;

struct Writer {
  std::vector<unsigned char> bytes;

  void u8(uint8_t v) { bytes.push_back(v); }
  void u32(uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes.push_back((v >> (8 * i)) & 0xff);
  }
  void u64(uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes.push_back((v >> (8 * i)) & 0xff);
  }
  void f32(float v) {
    uint32_t u;
    std::memcpy(&u, &v, 4);
    u32(u);
  }
  void f64(double v) {
    uint64_t u;
    std::memcpy(&u, &v, 8);
    u64(u);
  }
  void str(const std::string& s) {
    u32(static_cast<uint32_t>(s.size()));
    bytes.insert(bytes.end(), s.begin(), s.end());
  }
};

struct Reader {
  const unsigned char* p;
  size_t n;
  size_t pos = 0;
  std::string path;

  void need(size_t k) {
    if (pos + k > n) {
      fail(Err::TruncatedData, "checkpoint ends early at byte " +
                                   std::to_string(pos) + " in " + path);
    }
  }
  uint8_t u8() {
    need(1);
    return p[pos++];
  }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(p[pos + i]) << (8 * i);
    pos += 4;
    return v;
  }
  uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[pos + i]) << (8 * i);
    pos += 8;
    return v;
  }
  float f32() {
    const uint32_t u = u32();
    float v;
    std::memcpy(&v, &u, 4);
    return v;
  }
  double f64() {
    const uint64_t u = u64();
    double v;
    std::memcpy(&v, &u, 8);
    return v;
  }
  std::string str() {
    const uint32_t len = u32();
    if (len > kMaxStr) {
      fail(Err::ShapeTableCorrupt, "string of " + std::to_string(len) +
                                       " bytes in " + path);
    }
    need(len);
    std::string s(reinterpret_cast<const char*>(p + pos), len);
    pos += len;
    return s;
  }
};

uint32_t crc_table_entry(uint32_t i) {
  uint32_t c = i;
  for (int k = 0; k < 8; ++k) {
    c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : (c >> 1);
  }
  return c;
}

}  // namespace

uint32_t crc32_ieee(const void* data, size_t n, uint32_t seed) {
  static uint32_t table[256];
  static bool init = [] {
    for (uint32_t i = 0; i < 256; ++i) table[i] = crc_table_entry(i);
    return true;
  }();
  (void)init;
  const auto* p = static_cast<const unsigned char*>(data);
  uint32_t c = seed ^ 0xFFFFFFFFu;
  for (size_t i = 0; i < n; ++i) c = table[(c ^ p[i]) & 0xFF] ^ (c >> 8);
  return c ^ 0xFFFFFFFFu;
}

std::string Provenance::summary() const {
  return "source_corpus=" + source_corpus + " epochs=" + std::to_string(epochs) +
         " seed=" + std::to_string(seed) + " config_hash=" + config_hash;
}

void save_checkpoint(const Checkpoint& ck, const std::string& path) {
  // Name-sorted tensor table so identical models hash identically.
  std::vector<const std::pair<std::string, Tensor>*> sorted;
  for (const auto& nt : ck.params.named) sorted.push_back(&nt);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto* a, const auto* b) { return a->first < b->first; });

  std::vector<unsigned char> payload;
  payload.reserve(1024);
  for (const auto* nt : sorted) {
    const Tensor& t = nt->second;
    for (int64_t i = 0; i < t.size(); ++i) {
      const float f = static_cast<float>(t[i]);
      uint32_t u;
      std::memcpy(&u, &f, 4);
      for (int b = 0; b < 4; ++b) payload.push_back((u >> (8 * b)) & 0xff);
    }
  }

  Writer w;
  w.bytes.insert(w.bytes.end(), kMagic, kMagic + 4);
  w.u32(kVersion);
  w.u32(crc32_ieee(payload.data(), payload.size()));
  w.u32(static_cast<uint32_t>(ck.hp.input_dim));
  w.u32(static_cast<uint32_t>(ck.hp.hidden_dim));
  w.u32(static_cast<uint32_t>(ck.hp.encoder_layers));
  w.u32(static_cast<uint32_t>(ck.hp.num_classes));
  w.u32(static_cast<uint32_t>(ck.hp.attention_dim));
  w.str(ck.provenance.source_corpus);
  w.u32(static_cast<uint32_t>(ck.provenance.epochs));
  w.u64(ck.provenance.seed);
  w.str(ck.provenance.config_hash);
  w.u32(static_cast<uint32_t>(ck.class_labels.size()));
  for (const std::string& c : ck.class_labels) w.str(c);
  w.u8(ck.normalizer ? 1 : 0);
  if (ck.normalizer) {
    const auto& nz = *ck.normalizer;
    w.u32(static_cast<uint32_t>(nz.mean.size()));
    for (double m : nz.mean) w.f64(m);
    for (double s : nz.stdev) w.f64(s);
  }
  w.u32(static_cast<uint32_t>(sorted.size()));
  for (const auto* nt : sorted) {
    w.str(nt->first);
    const auto& shape = nt->second.shape();
    w.u32(static_cast<uint32_t>(shape.size()));
    for (int d : shape) w.u32(static_cast<uint32_t>(d));
  }
  w.bytes.insert(w.bytes.end(), payload.begin(), payload.end());

  std::ofstream f(path, std::ios::binary);
  if (!f) fail(Err::IoError, "cannot write checkpoint " + path);
  f.write(reinterpret_cast<const char*>(w.bytes.data()),
          static_cast<std::streamsize>(w.bytes.size()));
  if (!f) fail(Err::IoError, "write failed for " + path);

  std::ofstream sidecar(path + ".provenance.txt");
  if (sidecar) {
    sidecar << "format_version=" << kVersion << "\n"
            << ck.provenance.summary() << "\n"
            << "classes=";
    for (size_t i = 0; i < ck.class_labels.size(); ++i) {
      sidecar << (i ? "," : "") << ck.class_labels[i];
    }
    sidecar << "\ntensors=" << sorted.size() << "\n";
  }
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(Err::MissingFile, "cannot open checkpoint " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)),
                                   std::istreambuf_iterator<char>());
  Reader r{bytes.data(), bytes.size(), 0, path};

  r.need(4);
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    fail(Err::BadMagic, "not a checkpoint file: " + path);
  }
  r.pos = 4;
  const uint32_t version = r.u32();
  if (version != kVersion) {
    fail(Err::VersionUnsupported, "checkpoint version " + std::to_string(version) +
                                      " unsupported (expected " +
                                      std::to_string(kVersion) + "): " + path);
  }
  const uint32_t crc_expected = r.u32();

  Checkpoint ck;
  ck.format_version = static_cast<int>(version);
  ck.hp.input_dim = static_cast<int>(r.u32());
  ck.hp.hidden_dim = static_cast<int>(r.u32());
  ck.hp.encoder_layers = static_cast<int>(r.u32());
  ck.hp.num_classes = static_cast<int>(r.u32());
  ck.hp.attention_dim = static_cast<int>(r.u32());
  ck.provenance.source_corpus = r.str();
  ck.provenance.epochs = static_cast<int>(r.u32());
  ck.provenance.seed = r.u64();
  ck.provenance.config_hash = r.str();

  const uint32_t n_classes = r.u32();
  if (n_classes > kMaxStr) fail(Err::ShapeTableCorrupt, "class list in " + path);
  for (uint32_t i = 0; i < n_classes; ++i) ck.class_labels.push_back(r.str());

  if (r.u8()) {
    FeatureNormalizer nz;
    const uint32_t dim = r.u32();
    if (dim == 0 || dim > 100000) {
      fail(Err::ShapeTableCorrupt, "normalizer dim in " + path);
    }
    nz.mean.resize(dim);
    nz.stdev.resize(dim);
    for (uint32_t i = 0; i < dim; ++i) nz.mean[i] = r.f64();
    for (uint32_t i = 0; i < dim; ++i) nz.stdev[i] = r.f64();
    ck.normalizer = std::move(nz);
  }

  const uint32_t n_tensors = r.u32();
  if (n_tensors > kMaxTensors) {
    fail(Err::ShapeTableCorrupt, "tensor table of " + std::to_string(n_tensors) +
                                     " entries in " + path);
  }
  struct Entry {
    std::string name;
    std::vector<int> shape;
    int64_t count;
  };
  std::vector<Entry> table;
  int64_t total = 0;
  std::string prev_name;
  for (uint32_t i = 0; i < n_tensors; ++i) {
    Entry e;
    e.name = r.str();
    if (e.name.empty() || (i > 0 && e.name <= prev_name)) {
      fail(Err::ShapeTableCorrupt, "tensor names not unique/sorted in " + path);
    }
    prev_name = e.name;
    ParameterSet::group_of(e.name);  // must belong to a known group
    const uint32_t ndim = r.u32();
    if (ndim == 0 || ndim > kMaxRank) {
      fail(Err::ShapeTableCorrupt, "tensor '" + e.name + "' rank " +
                                       std::to_string(ndim) + " in " + path);
    }
    e.count = 1;
    for (uint32_t d = 0; d < ndim; ++d) {
      const uint32_t dim = r.u32();
      if (dim == 0 || dim > (1u << 24)) {
        fail(Err::ShapeTableCorrupt, "tensor '" + e.name + "' dims in " + path);
      }
      e.shape.push_back(static_cast<int>(dim));
      e.count *= dim;
    }
    total += e.count;
    table.push_back(std::move(e));
  }

  // The table must describe exactly the parameters the stored hyperparams
  // imply, otherwise the file is self-inconsistent.
  auto expected = ParameterSet::expected_shapes(ck.hp);
  if (expected.size() != table.size()) {
    fail(Err::ShapeTableCorrupt, "tensor table size mismatch in " + path);
  }
  std::sort(expected.begin(), expected.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (size_t i = 0; i < table.size(); ++i) {
    if (table[i].name != expected[i].first || table[i].shape != expected[i].second) {
      fail(Err::ShapeTableCorrupt,
           "tensor '" + table[i].name + "' does not match hyperparameters in " + path);
    }
  }

  const size_t payload_bytes = static_cast<size_t>(total) * 4;
  r.need(payload_bytes);
  const unsigned char* payload = bytes.data() + r.pos;
  if (r.pos + payload_bytes != bytes.size()) {
    fail(Err::ShapeTableCorrupt, "trailing bytes after payload in " + path);
  }
  const uint32_t crc_actual = crc32_ieee(payload, payload_bytes);
  if (crc_actual != crc_expected) {
    fail(Err::ChecksumMismatch, "payload checksum mismatch in " + path);
  }

  // Values keyed by name, then laid out in declared parameter order.
  std::vector<std::vector<double>> values(table.size());
  size_t off = 0;
  for (size_t i = 0; i < table.size(); ++i) {
    values[i].resize(static_cast<size_t>(table[i].count));
    for (int64_t j = 0; j < table[i].count; ++j) {
      uint32_t u = 0;
      for (int b = 0; b < 4; ++b) {
        u |= static_cast<uint32_t>(payload[off + b]) << (8 * b);
      }
      off += 4;
      float fv;
      std::memcpy(&fv, &u, 4);
      values[i][static_cast<size_t>(j)] = static_cast<double>(fv);
    }
  }

  for (const auto& [name, shape] : ParameterSet::expected_shapes(ck.hp)) {
    const auto it = std::lower_bound(
        table.begin(), table.end(), name,
        [](const Entry& e, const std::string& n) { return e.name < n; });
    const size_t idx = static_cast<size_t>(it - table.begin());
    ck.params.named.emplace_back(
        name, Tensor::from_values(shape, std::move(values[idx]), Precision::f32));
  }
  return ck;
}

}  // namespace affectlab
