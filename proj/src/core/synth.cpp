// SPDX-License-Identifier: Apache-2.0
#include "core/synth.hpp"

#include <cmath>
#include <fstream>

#include "core/csv.hpp"
#include "core/dataset.hpp"
#include "core/error.hpp"
#include "core/rng.hpp"

namespace kpic {

namespace {

constexpr double kTwoPi = 6.283185307179586477;

void validate_spec(const SynthSpec& spec) {
  if (spec.n_jobs == 0) fail(Errc::Config, "synth: n_jobs must be > 0");
  if (spec.groups == 0) fail(Errc::Config, "synth: groups must be >= 1");
  if (!spec.proportions.empty()) {
    if (spec.proportions.size() != spec.groups)
      fail(Errc::Config, "synth: proportions must list one weight per group");
    double sum = 0.0;
    for (double p : spec.proportions) {
      if (p < 0.0) fail(Errc::Config, "synth: negative group proportion");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) fail(Errc::Config, "synth: proportions must sum to 1");
  }
  double bucket_sum = 0.0;
  for (double p : spec.node_buckets) {
    if (p < 0.0) fail(Errc::Config, "synth: negative node-bucket probability");
    bucket_sum += p;
  }
  if (bucket_sum <= 0.0) fail(Errc::Config, "synth: node-bucket probabilities sum to zero");
  if (spec.sample_interval <= 0.0) fail(Errc::Config, "synth: sample_interval must be > 0");
  if (spec.duration_min < 2.0 * spec.sample_interval)
    fail(Errc::Config, "synth: duration_min must cover at least two samples");
  if (spec.duration_max < spec.duration_min)
    fail(Errc::Config, "synth: duration_max below duration_min");
  if (spec.noise_sigma < 0.0) fail(Errc::Config, "synth: negative noise_sigma");
  if (spec.n_operational + spec.n_missing_kpi + spec.n_single_node > spec.n_jobs)
    fail(Errc::Config, "synth: injected job counts exceed n_jobs");
}

size_t sample_group(const SynthSpec& spec, Rng& rng) {
  if (spec.proportions.empty()) return static_cast<size_t>(rand_index(rng, spec.groups));
  double r = rand_unit(rng);
  double cum = 0.0;
  for (size_t g = 0; g < spec.groups; ++g) {
    cum += spec.proportions[g];
    if (r < cum) return g;
  }
  return spec.groups - 1;
}

size_t sample_node_count(const SynthSpec& spec, Rng& rng) {
  static constexpr size_t lo[5] = {2, 6, 11, 16, 21};
  static constexpr size_t hi[5] = {5, 10, 15, 20, 43};
  double total = 0.0;
  for (double p : spec.node_buckets) total += p;
  double r = rand_unit(rng) * total;
  double cum = 0.0;
  size_t bucket = 4;
  for (size_t b = 0; b < 5; ++b) {
    cum += spec.node_buckets[b];
    if (r < cum) {
      bucket = b;
      break;
    }
  }
  return lo[bucket] + static_cast<size_t>(rand_index(rng, hi[bucket] - lo[bucket] + 1));
}

// Group waveforms differ in frequency, phase and burst position, all of which
// survive per-column standardization (amplitude does not).
double waveform(size_t group, size_t kpi_idx, double u, double phase) {
  double freq = 1.0 + static_cast<double>((group + kpi_idx) % 6);
  double base_phase = kTwoPi * static_cast<double>(group % 4) / 4.0;
  double amp = 1.0 + 0.6 * static_cast<double>((group + 2 * kpi_idx) % 3);
  double v = amp * std::sin(kTwoPi * freq * u + base_phase + phase);
  double center = 0.1 + 0.7 * static_cast<double>((3 * group + kpi_idx) % 5) / 4.0;
  double z = (u - center) / 0.07;
  v += 2.0 * std::exp(-z * z);
  return v;
}

std::string padded_id(const char* prefix, size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%05zu", prefix, i);
  return buf;
}

}  // namespace

SynthData generate(const SynthSpec& spec) {
  validate_spec(spec);
  SynthData data;
  data.catalog = spec.kpis.empty() ? default_catalog() : spec.kpis;

  std::vector<uint8_t> is_signal(data.catalog.size(), spec.signal_kpis.empty() ? 1 : 0);
  for (const auto& name : spec.signal_kpis) {
    bool found = false;
    for (size_t q = 0; q < data.catalog.size(); ++q)
      if (data.catalog[q].name == name) {
        is_signal[q] = 1;
        found = true;
      }
    if (!found) fail(Errc::Config, "synth: signal KPI not in catalog: " + name);
  }
  for (const auto& kpi : data.catalog) data.records[kpi.name];  // fixed file set

  for (size_t i = 0; i < spec.n_jobs; ++i) {
    Rng rng(mix_seed(spec.seed, i));
    const std::string job = padded_id("job_", i);

    const bool missing_kpi = i < spec.n_missing_kpi;
    const bool single_node = !missing_kpi && i < spec.n_missing_kpi + spec.n_single_node;
    const bool operational =
        !missing_kpi && !single_node && i < spec.n_missing_kpi + spec.n_single_node + spec.n_operational;

    size_t group = sample_group(spec, rng);
    data.ground_truth[job] = static_cast<int>(group);
    data.flags[job] = operational;

    size_t nodes = single_node ? 1 : sample_node_count(spec, rng);
    double duration = spec.duration_min + rand_unit(rng) * (spec.duration_max - spec.duration_min);
    size_t samples = static_cast<size_t>(duration / spec.sample_interval) + 1;
    int64_t start = 1600000000 + static_cast<int64_t>((i * 7919) % 1000000);
    size_t skip_kpi = missing_kpi ? i % data.catalog.size() : data.catalog.size();

    for (size_t q = 0; q < data.catalog.size(); ++q) {
      if (q == skip_kpi) continue;
      auto& sink = data.records[data.catalog[q].name];
      for (size_t m = 0; m < nodes; ++m) {
        const std::string node = padded_id("node_", m);
        double jitter = (rand_unit(rng) - 0.5) * 0.3;
        for (size_t s = 0; s < samples; ++s) {
          double u = static_cast<double>(s) / static_cast<double>(samples - 1);
          double value = is_signal[q] ? waveform(group, q, u, jitter) : 5.0;
          value += spec.noise_sigma * rand_normal(rng);
          int64_t ts = start + static_cast<int64_t>(static_cast<double>(s) * spec.sample_interval);
          sink.push_back({ts, job, node, value});
        }
      }
    }
  }
  return data;
}

std::vector<std::filesystem::path> write_dataset(const SynthData& data,
                                                 const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(Errc::Io, "cannot create dataset directory: " + dir.string());

  std::vector<fs::path> written;
  auto emit = [&](const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::Io, "cannot write " + path.string());
    out << content;
    if (!out) fail(Errc::Io, "failed writing " + path.string());
    written.push_back(path);
  };

  for (const auto& kpi : data.catalog) {
    std::string body = "timestamp,job_id,node_id,value\n";
    for (const auto& r : data.records.at(kpi.name)) {
      body += fmt_int(r.timestamp);
      body += ',';
      body += r.job_id;
      body += ',';
      body += r.node_id;
      body += ',';
      body += fmt_double(r.value);
      body += '\n';
    }
    emit(dir / (kpi.name + ".csv"), body);
  }

  emit(dir / "catalog.json", catalog_to_json(data.catalog));

  std::string flags = "job_id,operational\n";
  for (const auto& [job, op] : data.flags) flags += job + "," + (op ? "true" : "false") + "\n";
  emit(dir / "flags.csv", flags);

  std::string truth = "job_id,group\n";
  for (const auto& [job, g] : data.ground_truth) truth += job + "," + fmt_int(g) + "\n";
  emit(dir / "ground_truth.csv", truth);
  return written;
}

}  // namespace kpic
