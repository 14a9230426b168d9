// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <map>
#include <string>

#include "core/experiment.hpp"
#include "core/ingest.hpp"

namespace kpic {

// All serializers are byte-deterministic: doubles go through shortest
// round-trip formatting and JSON objects keep insertion order.

std::string filter_report_json(const FilterReport& report);
std::string node_histogram_csv(const std::array<size_t, 5>& buckets);
std::string retained_table_csv(const std::array<size_t, 6>& buckets);

/// Rows = configurations, columns = per-index optimal (K, score).
std::string experiment1_csv(const SweepResult& sweep);
std::string experiment1_json(const SweepResult& sweep);

/// Rows = KPI x index, columns = configurations (catalog order).
std::string experiment2_csv(const std::map<std::string, SweepResult>& per_kpi, const Catalog& order);
std::string experiment2_json(const std::map<std::string, SweepResult>& per_kpi, const Catalog& order);

std::string comparison_json(const KpiRanking& ranking);

/// Rows = configurations, per-KPI blocks of per-index (K, score) columns.
std::string validation_csv(const ValidationResult& result, const std::vector<std::string>& order);
std::string validation_json(const ValidationResult& result, const std::vector<std::string>& order);

/// Long-format (method, index, K, score) series for external plotting.
std::string plot_csv(const SweepResult& sweep);
std::string plot_csv_per_kpi(const std::map<std::string, SweepResult>& per_kpi,
                             const std::vector<std::string>& order);

/// Rebuilds the per-KPI sweep map (labels + optima + score series) from
/// experiment2 JSON, for the standalone comparison command.
std::map<std::string, SweepResult> sweeps_from_experiment2_json(const std::string& text);

}  // namespace kpic
