// SPDX-License-Identifier: Apache-2.0
#include "core/types.hpp"

#include "core/error.hpp"

namespace kpic {

const char* to_string(KpiCategory c) {
  switch (c) {
    case KpiCategory::CpuUsage: return "cpu_usage";
    case KpiCategory::NetworkTraffic: return "network_traffic";
    case KpiCategory::Ipmi: return "ipmi";
    case KpiCategory::SystemLoad: return "system_load";
    case KpiCategory::MemoryUsage: return "memory_usage";
  }
  return "unknown";
}

KpiCategory category_from_string(const std::string& s) {
  if (s == "cpu_usage") return KpiCategory::CpuUsage;
  if (s == "network_traffic") return KpiCategory::NetworkTraffic;
  if (s == "ipmi") return KpiCategory::Ipmi;
  if (s == "system_load") return KpiCategory::SystemLoad;
  if (s == "memory_usage") return KpiCategory::MemoryUsage;
  fail(Errc::Format, "unknown KPI category: " + s);
}

Catalog default_catalog() {
  return {
      {"aggregation.cpu-average.percent.idle", KpiCategory::CpuUsage},
      {"aggregation.cpu-average.percent.system", KpiCategory::CpuUsage},
      {"aggregation.cpu-average.percent.wait", KpiCategory::CpuUsage},
      {"interface.bond0.if_octets.rx", KpiCategory::NetworkTraffic},
      {"interface.bond0.if_octets.tx", KpiCategory::NetworkTraffic},
      {"ipmi.CPU1_Temp", KpiCategory::Ipmi},
      {"ipmi.CPU2_Temp", KpiCategory::Ipmi},
      {"ipmi.PW_consumption", KpiCategory::Ipmi},
      {"ipmi.System_Temp", KpiCategory::Ipmi},
      {"load.load.shortterm", KpiCategory::SystemLoad},
      {"memory.cached.memory", KpiCategory::MemoryUsage},
  };
}

}  // namespace kpic
