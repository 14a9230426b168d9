// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace kpic {

/// Parameters for a planted-groups monitoring dataset.
struct SynthSpec {
  size_t n_jobs = 300;
  size_t groups = 3;
  std::vector<double> proportions;  // empty = uniform; else one weight per group
  // probabilities over the node-count buckets {2-5, 6-10, 11-15, 16-20, >20}
  std::array<double, 5> node_buckets{1.0, 0.0, 0.0, 0.0, 0.0};
  Catalog kpis;                          // empty = the default 11-KPI catalog
  std::vector<std::string> signal_kpis;  // empty = every KPI carries structure
  double duration_min = 600.0;           // seconds
  double duration_max = 3600.0;
  double sample_interval = 30.0;
  double noise_sigma = 0.05;
  size_t n_operational = 0;
  size_t n_missing_kpi = 0;
  size_t n_single_node = 0;
  uint64_t seed = 0;
};

struct SynthData {
  Catalog catalog;
  std::map<std::string, std::vector<KpiRecord>> records;  // KPI name -> records
  std::map<std::string, bool> flags;                      // job -> operational
  std::map<std::string, int> ground_truth;                // job -> planted group
};

/// Deterministic generator: each group gets a distinct waveform per signal
/// KPI (frequency, phase and burst position vary by group); jobs sample their
/// group's waveform per node with Gaussian noise and a small per-node phase
/// jitter. Non-signal KPIs are noise around a shared baseline. The requested
/// numbers of operational / missing-KPI / single-node jobs are injected as
/// disjoint sets.
SynthData generate(const SynthSpec& spec);

/// Writes the ingest input files (per-KPI CSVs, catalog.json, flags.csv) plus
/// ground_truth.csv into a directory.
std::vector<std::filesystem::path> write_dataset(const SynthData& data,
                                                 const std::filesystem::path& dir);

}  // namespace kpic
