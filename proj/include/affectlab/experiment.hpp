// Copyright 2026 AffectLab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "affectlab/config.hpp"

namespace affectlab {

// Executes one experiment config end to end and writes into the output
// directory:
//   config_resolved.txt   canonical key=value snapshot of the resolved run
//   report.json           machine-readable metrics
//   results.txt           the same numbers as a text table
//   *_log.txt             per-epoch training logs
//   *.afck                checkpoints with provenance sidecars
// Reruns with an identical config produce byte-identical artifacts except
// for the wall-time column of the logs. A LOCK file guards the directory
// against concurrent runs.
//
// Regimes: baseline_same_corpus, cross_corpus, transfer.
std::string run_experiment(const ConfigFile& cfg);

}  // namespace affectlab
