// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Builders for directory trees that mimic each supported corpus layout.
// Scale 1 reproduces the published utterance counts (480 / 588 / 400 /
// 5531); smaller trees for fast unit tests use the *_small variants with
// the partial-copy flag on scan.

#pragma once

#include <string>

namespace affectlab::test {

// 4 speakers x 120 clips (15 per affect code, 30 neutral).
void make_mock_savee(const std::string& root);

// 6 actors x 7 affects x 14 sentences.
void make_mock_emovo(const std::string& root);

// 4 affect directories x 100 clips.
void make_mock_urdu(const std::string& root);

// 5 sessions of evaluation files carrying the studied five-label subset
// (1103 ang, 595 hap, 1041 exc, 1084 sad, 1708 neu) plus discarded xxx and
// frustration lines.
void make_mock_iemocap(const std::string& root);

// Reduced trees for unit tests.
void make_mock_savee_small(const std::string& root, int per_code);
void make_mock_urdu_small(const std::string& root, int per_affect);
void make_mock_iemocap_small(const std::string& root);

}  // namespace affectlab::test
