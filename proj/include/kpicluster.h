/* SPDX-License-Identifier: Apache-2.0 */
/*
 * kpicluster — clustering toolkit for multi-node job KPI time series.
 *
 * C interface of the shared library: an opaque string key/value config,
 * pipeline commands that write their artifacts to disk, and direct numeric
 * entry points for the clustering and validation primitives. All functions
 * return KPIC_OK on success; on failure kpic_last_error() holds a
 * thread-local message describing what went wrong.
 */
#ifndef KPICLUSTER_H
#define KPICLUSTER_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kpic_status {
  KPIC_OK = 0,
  KPIC_ERR_INVALID_ARG = 1,
  KPIC_ERR_IO = 2,
  KPIC_ERR_FORMAT = 3,
  KPIC_ERR_CONFIG = 4,
  KPIC_ERR_DEGENERATE = 5,
  KPIC_ERR_UNDEFINED_INDEX = 6,
  KPIC_ERR_INTERNAL = 7
} kpic_status;

typedef enum kpic_metric {
  KPIC_METRIC_EUCLIDEAN = 0,
  KPIC_METRIC_MANHATTAN = 1,
  KPIC_METRIC_COSINE = 2
} kpic_metric;

typedef enum kpic_linkage {
  KPIC_LINKAGE_WARD = 0,
  KPIC_LINKAGE_AVERAGE = 1,
  KPIC_LINKAGE_COMPLETE = 2,
  KPIC_LINKAGE_SINGLE = 3
} kpic_linkage;

const char* kpic_version(void);
const char* kpic_status_name(kpic_status s);

/* Message for the most recent failing call on this thread ("" if none). */
const char* kpic_last_error(void);

/*
 * Run configuration: a flat string key/value store. Keys mirror the CLI
 * flags (kpi_dir, catalog, flags, out, resample_len, k_min, k_max,
 * algorithms, metrics, linkages, indices, seed, restarts, jobs_parallel,
 * dump_matrices, select_kpis, experiment2_json, synth_*). Unknown keys are
 * rejected when a command runs.
 */
typedef struct kpic_config kpic_config;

kpic_config* kpic_config_new(void);
void kpic_config_free(kpic_config* cfg);
kpic_status kpic_config_set(kpic_config* cfg, const char* key, const char* value);

/*
 * Pipeline commands. Each validates the config, runs its stage, writes the
 * documented artifacts plus `<command>_manifest.json` under the `out`
 * directory, and removes partial outputs when it fails.
 */
kpic_status kpic_run_synth(const kpic_config* cfg);
kpic_status kpic_run_ingest(const kpic_config* cfg);
kpic_status kpic_run_preprocess(const kpic_config* cfg);
kpic_status kpic_run_experiment1(const kpic_config* cfg);
kpic_status kpic_run_experiment2(const kpic_config* cfg);
kpic_status kpic_run_compare(const kpic_config* cfg);
kpic_status kpic_run_validation(const kpic_config* cfg);

/*
 * Direct numeric entry points. `x` is a row-major n x d matrix; `labels`
 * assigns each row a cluster in [0, k).
 */
kpic_status kpic_distance(const double* a, const double* b, size_t d, kpic_metric metric,
                          double* out);
kpic_status kpic_silhouette(const double* x, size_t n, size_t d, const int* labels, size_t k,
                            kpic_metric metric, double* out_mean);
kpic_status kpic_calinski_harabasz(const double* x, size_t n, size_t d, const int* labels,
                                   size_t k, double* out);
kpic_status kpic_davies_bouldin(const double* x, size_t n, size_t d, const int* labels, size_t k,
                                double* out);

/* Seeded k-means++ with restarts; fills n labels and the final inertia. */
kpic_status kpic_kmeans(const double* x, size_t n, size_t d, size_t k, uint64_t seed,
                        unsigned restarts, unsigned max_iter, double tol, int* out_labels,
                        double* out_inertia);

typedef struct kpic_dendrogram kpic_dendrogram;

kpic_status kpic_agglomerative(const double* x, size_t n, size_t d, kpic_metric metric,
                               kpic_linkage linkage, kpic_dendrogram** out);
size_t kpic_dendrogram_leaves(const kpic_dendrogram* dg);
/* step in [0, n-2]; subtree ids: leaves are 0..n-1, step s creates id n+s. */
kpic_status kpic_dendrogram_merge(const kpic_dendrogram* dg, size_t step, size_t* left,
                                  size_t* right, double* height, size_t* size);
kpic_status kpic_dendrogram_cut(const kpic_dendrogram* dg, size_t k, int* out_labels);
void kpic_dendrogram_free(kpic_dendrogram* dg);

/*
 * Standardizes a raw t x m (time x nodes) matrix column-wise and reduces it
 * to two principal components. out_scores receives t*2 values, row-major
 * [pc1_0, pc2_0, pc1_1, pc2_1, ...]; out_retained the retained-variance
 * ratio in [0, 1]. Either output may be NULL.
 */
kpic_status kpic_pca2(const double* x, size_t t, size_t m, double* out_scores,
                      double* out_retained);

#ifdef __cplusplus
}
#endif

#endif /* KPICLUSTER_H */
