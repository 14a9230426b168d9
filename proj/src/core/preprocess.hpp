// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/matrix.hpp"
#include "core/types.hpp"

namespace kpic {

/// One job's samples for one KPI resampled onto a fixed-length time grid.
/// Rows are grid points, columns are nodes (sorted by node id).
struct TimeNodeMatrix {
  std::string job_id;
  KpiId kpi;
  int64_t span_begin = 0;
  int64_t span_end = 0;
  std::vector<double> grid;           // T points, normalized to [0,1]
  std::vector<std::string> node_ids;  // M >= 2, sorted, distinct
  std::vector<uint8_t> zero_variance;  // per-column flag set by standardize
  Matrix values;                      // T x M

  size_t t_len() const { return values.rows; }
  size_t node_count() const { return values.cols; }
};

/// Builds a T x M matrix from one (job, KPI) record set. Each node's samples
/// are sorted, duplicate timestamps averaged, and linearly interpolated onto
/// T points uniformly spaced over the records' [min_ts, max_ts]; outside a
/// node's own sample range the nearest sample is held. Nodes with fewer than
/// two distinct timestamps are dropped; fewer than two surviving nodes or a
/// zero time span is a degenerate-job error.
TimeNodeMatrix assemble_matrix(const std::vector<KpiRecord>& records, size_t grid_len);

/// Rescales every column to sample mean 0 and population variance 1.
/// Constant columns become all zeros and are flagged.
TimeNodeMatrix standardize(TimeNodeMatrix m);

}  // namespace kpic
