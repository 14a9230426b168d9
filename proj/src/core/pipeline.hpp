// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "core/experiment.hpp"
#include "core/synth.hpp"

namespace kpic {

inline constexpr const char* kVersion = "0.1.0";

/// Resolved command configuration. Built from the flat string key/value map
/// the C API exposes; unknown keys and malformed values are config errors.
struct RunOptions {
  std::map<std::string, std::string> raw;  // echoed into manifests

  std::filesystem::path kpi_dir;
  std::filesystem::path catalog_file;  // empty = built-in default catalog
  std::filesystem::path flags_file;
  std::filesystem::path out_dir;
  size_t resample_len = 128;
  SweepConfig sweep;
  bool dump_matrices = false;
  std::vector<std::string> select_kpis;          // validation command
  std::filesystem::path experiment2_json_path;   // compare command
  SynthSpec synth;

  static RunOptions parse(const std::map<std::string, std::string>& kv);
};

// Each command validates its inputs, runs the corresponding pipeline stages,
// writes the documented artifacts plus `<command>_manifest.json` under the
// output directory, and removes partially written files on failure.
void run_synth(const RunOptions& opts);
void run_ingest(const RunOptions& opts);
void run_preprocess(const RunOptions& opts);
void run_experiment1(const RunOptions& opts);
void run_experiment2(const RunOptions& opts);
void run_compare(const RunOptions& opts);
void run_validation(const RunOptions& opts);

}  // namespace kpic
