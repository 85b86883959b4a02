// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "affectlab/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "affectlab/common.hpp"

namespace affectlab {

namespace {
std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}
}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(Err::MissingFile, "cannot open config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_string(ss.str());
}

ConfigFile ConfigFile::parse_string(const std::string& text) {
  ConfigFile cfg;
  std::stringstream ss(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        fail(Err::ConfigInvalid, "bad section header at line " + std::to_string(line_no));
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      fail(Err::ConfigInvalid, "expected key = value at line " + std::to_string(line_no));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      fail(Err::ConfigInvalid, "empty key at line " + std::to_string(line_no));
    }
    cfg.kv_[section.empty() ? key : section + "." + key] = value;
  }
  return cfg;
}

bool ConfigFile::has(const std::string& key) const { return kv_.count(key) > 0; }

void ConfigFile::set(const std::string& key, const std::string& value) {
  kv_[key] = value;
}

std::string ConfigFile::get_str(const std::string& key, const std::string& dflt) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? dflt : it->second;
}

std::string ConfigFile::require_str(const std::string& key) const {
  const auto it = kv_.find(key);
  if (it == kv_.end() || it->second.empty()) {
    fail(Err::ConfigInvalid, "missing required key '" + key + "'");
  }
  return it->second;
}

int64_t ConfigFile::get_int(const std::string& key, int64_t dflt) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return dflt;
  try {
    size_t used = 0;
    const int64_t v = std::stoll(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    fail(Err::ConfigInvalid, "key '" + key + "': expected integer, got '" +
                                 it->second + "'");
  }
}

uint64_t ConfigFile::get_u64(const std::string& key, uint64_t dflt) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return dflt;
  try {
    size_t used = 0;
    const uint64_t v = std::stoull(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    fail(Err::ConfigInvalid, "key '" + key + "': expected unsigned integer, got '" +
                                 it->second + "'");
  }
}

double ConfigFile::get_double(const std::string& key, double dflt) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return dflt;
  try {
    size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    fail(Err::ConfigInvalid, "key '" + key + "': expected number, got '" +
                                 it->second + "'");
  }
}

bool ConfigFile::get_bool(const std::string& key, bool dflt) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return dflt;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(Err::ConfigInvalid, "key '" + key + "': expected boolean, got '" + v + "'");
}

std::vector<std::string> ConfigFile::get_list(const std::string& key) const {
  std::vector<std::string> out;
  const auto it = kv_.find(key);
  if (it == kv_.end()) return out;
  std::stringstream ss(it->second);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

std::string ConfigFile::canonical_text() const {
  std::string out;
  for (const auto& [k, v] : kv_) {
    out += k;
    out += " = ";
    out += v;
    out += "\n";
  }
  return out;
}

std::string ConfigFile::hash() const { return hex64(fnv1a64(canonical_text())); }

}  // namespace affectlab
