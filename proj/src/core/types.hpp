// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace kpic {

enum class KpiCategory {
  CpuUsage,
  NetworkTraffic,
  Ipmi,
  SystemLoad,
  MemoryUsage,
};

const char* to_string(KpiCategory c);
KpiCategory category_from_string(const std::string& s);

/// One monitored metric stream, identified by its exact collector name.
struct KpiId {
  std::string name;
  KpiCategory category = KpiCategory::CpuUsage;

  bool operator==(const KpiId& o) const { return name == o.name && category == o.category; }
};

/// Ordered KPI catalog; the order fixes feature-vector layout and report columns.
using Catalog = std::vector<KpiId>;

/// The 11 canonical KPIs collected per node on the monitored cluster.
Catalog default_catalog();

/// One monitored sample: (timestamp, job, node, value) for one KPI.
struct KpiRecord {
  int64_t timestamp = 0;  // seconds since epoch
  std::string job_id;
  std::string node_id;
  double value = 0.0;
};

}  // namespace kpic
