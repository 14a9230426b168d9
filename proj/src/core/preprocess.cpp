// SPDX-License-Identifier: Apache-2.0
#include "core/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "core/error.hpp"

namespace kpic {

namespace {

struct Sample {
  int64_t ts;
  double value;
};

// Sort by (ts, value) and average duplicate timestamps. Sorting on both keys
// makes the result independent of input record order.
std::vector<Sample> collapse(std::vector<Sample> samples) {
  std::sort(samples.begin(), samples.end(),
            [](const Sample& a, const Sample& b) { return a.ts != b.ts ? a.ts < b.ts : a.value < b.value; });
  std::vector<Sample> out;
  size_t i = 0;
  while (i < samples.size()) {
    size_t j = i;
    double sum = 0.0;
    while (j < samples.size() && samples[j].ts == samples[i].ts) sum += samples[j++].value;
    out.push_back({samples[i].ts, sum / static_cast<double>(j - i)});
    i = j;
  }
  return out;
}

// Clamped linear interpolation over a node's own samples.
double interpolate(const std::vector<Sample>& s, double t) {
  if (t <= static_cast<double>(s.front().ts)) return s.front().value;
  if (t >= static_cast<double>(s.back().ts)) return s.back().value;
  size_t hi = 1;
  while (static_cast<double>(s[hi].ts) < t) ++hi;
  const auto& a = s[hi - 1];
  const auto& b = s[hi];
  double w = (t - static_cast<double>(a.ts)) / static_cast<double>(b.ts - a.ts);
  return a.value + w * (b.value - a.value);
}

}  // namespace

TimeNodeMatrix assemble_matrix(const std::vector<KpiRecord>& records, size_t grid_len) {
  if (records.empty()) fail(Errc::InvalidArg, "assemble_matrix: no records");
  if (grid_len < 2) fail(Errc::InvalidArg, "assemble_matrix: grid length must be >= 2");

  std::map<std::string, std::vector<Sample>> by_node;
  for (const auto& r : records) by_node[r.node_id].push_back({r.timestamp, r.value});

  std::map<std::string, std::vector<Sample>> usable;
  for (auto& [node, samples] : by_node) {
    auto merged = collapse(std::move(samples));
    if (merged.size() >= 2) usable.emplace(node, std::move(merged));
  }
  const std::string& job = records.front().job_id;
  if (usable.size() < 2)
    fail(Errc::Degenerate, "job " + job + ": fewer than 2 usable nodes");

  int64_t min_ts = INT64_MAX, max_ts = INT64_MIN;
  for (const auto& [node, samples] : usable) {
    min_ts = std::min(min_ts, samples.front().ts);
    max_ts = std::max(max_ts, samples.back().ts);
  }
  if (min_ts == max_ts) fail(Errc::Degenerate, "job " + job + ": zero time span");

  TimeNodeMatrix m;
  m.job_id = job;
  m.span_begin = min_ts;
  m.span_end = max_ts;
  m.grid.resize(grid_len);
  m.values = Matrix(grid_len, usable.size());
  for (const auto& [node, samples] : usable) m.node_ids.push_back(node);
  m.zero_variance.assign(usable.size(), 0);

  double span = static_cast<double>(max_ts - min_ts);
  for (size_t i = 0; i < grid_len; ++i)
    m.grid[i] = static_cast<double>(i) / static_cast<double>(grid_len - 1);

  size_t col = 0;
  for (const auto& [node, samples] : usable) {
    for (size_t i = 0; i < grid_len; ++i) {
      double t = static_cast<double>(min_ts) + m.grid[i] * span;
      m.values.at(i, col) = interpolate(samples, t);
    }
    ++col;
  }
  return m;
}

TimeNodeMatrix standardize(TimeNodeMatrix m) {
  const size_t t = m.values.rows;
  const size_t cols = m.values.cols;
  for (size_t c = 0; c < cols; ++c) {
    double lo = m.values.at(0, c), hi = lo, sum = 0.0;
    for (size_t i = 0; i < t; ++i) {
      double v = m.values.at(i, c);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += v;
    }
    if (lo == hi) {
      for (size_t i = 0; i < t; ++i) m.values.at(i, c) = 0.0;
      m.zero_variance[c] = 1;
      continue;
    }
    double mean = sum / static_cast<double>(t);
    double var = 0.0;
    for (size_t i = 0; i < t; ++i) {
      double d = m.values.at(i, c) - mean;
      var += d * d;
    }
    var /= static_cast<double>(t);  // population variance
    double inv = 1.0 / std::sqrt(var);
    for (size_t i = 0; i < t; ++i) m.values.at(i, c) = (m.values.at(i, c) - mean) * inv;
    m.zero_variance[c] = 0;
  }
  return m;
}

}  // namespace kpic
