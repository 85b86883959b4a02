// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace affectlab {

// key = value lines grouped under [section] headers; '#' starts a comment.
// Keys flatten to "section.key". README documents the full key set.
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text);

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  std::string get_str(const std::string& key, const std::string& dflt) const;
  std::string require_str(const std::string& key) const;
  int64_t get_int(const std::string& key, int64_t dflt) const;
  uint64_t get_u64(const std::string& key, uint64_t dflt) const;
  double get_double(const std::string& key, double dflt) const;
  bool get_bool(const std::string& key, bool dflt) const;
  std::vector<std::string> get_list(const std::string& key) const;  // comma-split

  // Sorted key=value rendering; its hash identifies the resolved run.
  std::string canonical_text() const;
  std::string hash() const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace affectlab
