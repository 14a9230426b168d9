// SPDX-License-Identifier: Apache-2.0
#include "kpicluster.h"

#include <cstring>
#include <map>
#include <string>

#include "core/cluster.hpp"
#include "core/error.hpp"
#include "core/pipeline.hpp"
#include "core/preprocess.hpp"
#include "core/reduce.hpp"
#include "core/validate.hpp"

namespace {

thread_local std::string g_last_error;

kpic_status status_of(kpic::Errc c) {
  switch (c) {
    case kpic::Errc::InvalidArg: return KPIC_ERR_INVALID_ARG;
    case kpic::Errc::Io: return KPIC_ERR_IO;
    case kpic::Errc::Format: return KPIC_ERR_FORMAT;
    case kpic::Errc::Config: return KPIC_ERR_CONFIG;
    case kpic::Errc::Degenerate: return KPIC_ERR_DEGENERATE;
    case kpic::Errc::UndefinedIndex: return KPIC_ERR_UNDEFINED_INDEX;
    case kpic::Errc::Internal: return KPIC_ERR_INTERNAL;
  }
  return KPIC_ERR_INTERNAL;
}

template <typename Fn>
kpic_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return KPIC_OK;
  } catch (const kpic::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return KPIC_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return KPIC_ERR_INTERNAL;
  }
}

kpic::Metric to_metric(kpic_metric m) {
  switch (m) {
    case KPIC_METRIC_EUCLIDEAN: return kpic::Metric::Euclidean;
    case KPIC_METRIC_MANHATTAN: return kpic::Metric::Manhattan;
    case KPIC_METRIC_COSINE: return kpic::Metric::Cosine;
  }
  kpic::fail(kpic::Errc::InvalidArg, "bad metric value");
}

kpic::Linkage to_linkage(kpic_linkage l) {
  switch (l) {
    case KPIC_LINKAGE_WARD: return kpic::Linkage::Ward;
    case KPIC_LINKAGE_AVERAGE: return kpic::Linkage::Average;
    case KPIC_LINKAGE_COMPLETE: return kpic::Linkage::Complete;
    case KPIC_LINKAGE_SINGLE: return kpic::Linkage::Single;
  }
  kpic::fail(kpic::Errc::InvalidArg, "bad linkage value");
}

kpic::Matrix wrap_matrix(const double* x, size_t n, size_t d) {
  if (x == nullptr || n == 0 || d == 0)
    kpic::fail(kpic::Errc::InvalidArg, "null or empty input matrix");
  kpic::Matrix m(n, d);
  std::memcpy(m.data.data(), x, n * d * sizeof(double));
  return m;
}

std::vector<int> wrap_labels(const int* labels, size_t n) {
  if (labels == nullptr) kpic::fail(kpic::Errc::InvalidArg, "null labels");
  return std::vector<int>(labels, labels + n);
}

}  // namespace

struct kpic_config {
  std::map<std::string, std::string> kv;
};

struct kpic_dendrogram {
  kpic::Dendrogram tree;
};

extern "C" {

const char* kpic_version(void) { return kpic::kVersion; }

const char* kpic_status_name(kpic_status s) {
  switch (s) {
    case KPIC_OK: return "ok";
    case KPIC_ERR_INVALID_ARG: return "invalid_argument";
    case KPIC_ERR_IO: return "io";
    case KPIC_ERR_FORMAT: return "format";
    case KPIC_ERR_CONFIG: return "config";
    case KPIC_ERR_DEGENERATE: return "degenerate";
    case KPIC_ERR_UNDEFINED_INDEX: return "undefined_index";
    case KPIC_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* kpic_last_error(void) { return g_last_error.c_str(); }

kpic_config* kpic_config_new(void) { return new (std::nothrow) kpic_config(); }

void kpic_config_free(kpic_config* cfg) { delete cfg; }

kpic_status kpic_config_set(kpic_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    if (cfg == nullptr || key == nullptr || value == nullptr)
      kpic::fail(kpic::Errc::InvalidArg, "null config, key or value");
    cfg->kv[key] = value;
  });
}

#define KPIC_RUN_IMPL(name, fn)                                              \
  kpic_status name(const kpic_config* cfg) {                                 \
    return guarded([&] {                                                     \
      if (cfg == nullptr) kpic::fail(kpic::Errc::InvalidArg, "null config"); \
      fn(kpic::RunOptions::parse(cfg->kv));                                  \
    });                                                                      \
  }

KPIC_RUN_IMPL(kpic_run_synth, kpic::run_synth)
KPIC_RUN_IMPL(kpic_run_ingest, kpic::run_ingest)
KPIC_RUN_IMPL(kpic_run_preprocess, kpic::run_preprocess)
KPIC_RUN_IMPL(kpic_run_experiment1, kpic::run_experiment1)
KPIC_RUN_IMPL(kpic_run_experiment2, kpic::run_experiment2)
KPIC_RUN_IMPL(kpic_run_compare, kpic::run_compare)
KPIC_RUN_IMPL(kpic_run_validation, kpic::run_validation)

#undef KPIC_RUN_IMPL

kpic_status kpic_distance(const double* a, const double* b, size_t d, kpic_metric metric,
                          double* out) {
  return guarded([&] {
    if (a == nullptr || b == nullptr || out == nullptr)
      kpic::fail(kpic::Errc::InvalidArg, "null argument");
    *out = kpic::distance({a, d}, {b, d}, to_metric(metric));
  });
}

kpic_status kpic_silhouette(const double* x, size_t n, size_t d, const int* labels, size_t k,
                            kpic_metric metric, double* out_mean) {
  return guarded([&] {
    if (out_mean == nullptr) kpic::fail(kpic::Errc::InvalidArg, "null output");
    auto m = wrap_matrix(x, n, d);
    auto l = wrap_labels(labels, n);
    *out_mean = kpic::silhouette(m, l, k, to_metric(metric)).first;
  });
}

kpic_status kpic_calinski_harabasz(const double* x, size_t n, size_t d, const int* labels,
                                   size_t k, double* out) {
  return guarded([&] {
    if (out == nullptr) kpic::fail(kpic::Errc::InvalidArg, "null output");
    auto m = wrap_matrix(x, n, d);
    auto l = wrap_labels(labels, n);
    *out = kpic::calinski_harabasz(m, l, k).value;
  });
}

kpic_status kpic_davies_bouldin(const double* x, size_t n, size_t d, const int* labels, size_t k,
                                double* out) {
  return guarded([&] {
    if (out == nullptr) kpic::fail(kpic::Errc::InvalidArg, "null output");
    auto m = wrap_matrix(x, n, d);
    auto l = wrap_labels(labels, n);
    *out = kpic::davies_bouldin(m, l, k);
  });
}

kpic_status kpic_kmeans(const double* x, size_t n, size_t d, size_t k, uint64_t seed,
                        unsigned restarts, unsigned max_iter, double tol, int* out_labels,
                        double* out_inertia) {
  return guarded([&] {
    if (out_labels == nullptr) kpic::fail(kpic::Errc::InvalidArg, "null output labels");
    auto m = wrap_matrix(x, n, d);
    kpic::KMeansOptions opts{seed, restarts, max_iter, tol};
    kpic::KMeansResult result = kpic::kmeans(m, k, opts);
    std::memcpy(out_labels, result.labels.data(), n * sizeof(int));
    if (out_inertia != nullptr) *out_inertia = result.inertia;
  });
}

kpic_status kpic_agglomerative(const double* x, size_t n, size_t d, kpic_metric metric,
                               kpic_linkage linkage, kpic_dendrogram** out) {
  return guarded([&] {
    if (out == nullptr) kpic::fail(kpic::Errc::InvalidArg, "null output");
    auto m = wrap_matrix(x, n, d);
    auto tree = kpic::agglomerative(m, to_metric(metric), to_linkage(linkage));
    *out = new kpic_dendrogram{std::move(tree)};
  });
}

size_t kpic_dendrogram_leaves(const kpic_dendrogram* dg) {
  return dg == nullptr ? 0 : dg->tree.leaves;
}

kpic_status kpic_dendrogram_merge(const kpic_dendrogram* dg, size_t step, size_t* left,
                                  size_t* right, double* height, size_t* size) {
  return guarded([&] {
    if (dg == nullptr) kpic::fail(kpic::Errc::InvalidArg, "null dendrogram");
    if (step >= dg->tree.merges.size()) kpic::fail(kpic::Errc::InvalidArg, "merge step out of range");
    const kpic::Merge& m = dg->tree.merges[step];
    if (left != nullptr) *left = m.left;
    if (right != nullptr) *right = m.right;
    if (height != nullptr) *height = m.height;
    if (size != nullptr) *size = m.size;
  });
}

kpic_status kpic_dendrogram_cut(const kpic_dendrogram* dg, size_t k, int* out_labels) {
  return guarded([&] {
    if (dg == nullptr || out_labels == nullptr)
      kpic::fail(kpic::Errc::InvalidArg, "null dendrogram or output");
    auto labels = kpic::cut_dendrogram(dg->tree, k);
    std::memcpy(out_labels, labels.data(), labels.size() * sizeof(int));
  });
}

void kpic_dendrogram_free(kpic_dendrogram* dg) { delete dg; }

kpic_status kpic_pca2(const double* x, size_t t, size_t m, double* out_scores,
                      double* out_retained) {
  return guarded([&] {
    kpic::TimeNodeMatrix tn;
    tn.job_id = "anonymous";
    tn.values = wrap_matrix(x, t, m);
    tn.grid.resize(t);
    for (size_t i = 0; i < t; ++i) tn.grid[i] = t > 1 ? static_cast<double>(i) / static_cast<double>(t - 1) : 0.0;
    for (size_t c = 0; c < m; ++c) tn.node_ids.push_back("n" + std::to_string(c));
    tn.zero_variance.assign(m, 0);
    kpic::PcaResult r = kpic::pca2(kpic::standardize(std::move(tn)));
    if (out_scores != nullptr)
      std::memcpy(out_scores, r.scores.data.data(), t * 2 * sizeof(double));
    if (out_retained != nullptr) *out_retained = r.retained;
  });
}

}  // extern "C"
