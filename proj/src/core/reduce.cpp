// SPDX-License-Identifier: Apache-2.0
#include "core/reduce.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace kpic {

PcaResult pca2(const TimeNodeMatrix& m) {
  const size_t t = m.t_len();
  const size_t nodes = m.node_count();
  if (t < 2 || nodes < 2) fail(Errc::InvalidArg, "pca2: need T >= 2 and M >= 2");
  for (double v : m.values.data)
    if (!std::isfinite(v)) fail(Errc::InvalidArg, "pca2: non-finite input for job " + m.job_id);

  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMajor> x(m.values.data.data(), static_cast<Eigen::Index>(t),
                               static_cast<Eigen::Index>(nodes));

  Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(t);
  cov = ((cov + cov.transpose()) * 0.5).eval();  // enforce exact symmetry

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) fail(Errc::Internal, "pca2: eigendecomposition failed");

  PcaResult out;
  out.job_id = m.job_id;
  out.kpi = m.kpi;
  out.eigenvalues.resize(nodes);
  for (size_t i = 0; i < nodes; ++i) {
    // solver returns ascending order
    double ev = solver.eigenvalues()(static_cast<Eigen::Index>(nodes - 1 - i));
    out.eigenvalues[i] = std::max(ev, 0.0);
  }

  Eigen::MatrixXd comps(nodes, 2);
  comps.col(0) = solver.eigenvectors().col(static_cast<Eigen::Index>(nodes - 1));
  comps.col(1) = solver.eigenvectors().col(static_cast<Eigen::Index>(nodes - 2));
  for (int c = 0; c < 2; ++c) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < comps.rows(); ++i) {
      double mag = std::abs(comps(i, c));
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    if (comps(arg, c) < 0.0) comps.col(c) = -comps.col(c);
  }

  out.components = Matrix(nodes, 2);
  for (size_t i = 0; i < nodes; ++i)
    for (size_t c = 0; c < 2; ++c) out.components.at(i, c) = comps(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));

  Eigen::MatrixXd scores = x * comps;
  out.scores = Matrix(t, 2);
  for (size_t i = 0; i < t; ++i)
    for (size_t c = 0; c < 2; ++c) out.scores.at(i, c) = scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));

  double total = 0.0;
  for (double ev : out.eigenvalues) total += ev;
  out.retained = total > 0.0 ? std::clamp((out.eigenvalues[0] + out.eigenvalues[1]) / total, 0.0, 1.0)
                             : 1.0;  // an all-constant matrix loses nothing
  return out;
}

std::array<size_t, 6> retained_info_table(const std::vector<double>& per_job_retained) {
  std::array<size_t, 6> buckets{};
  for (double r : per_job_retained) {
    if (r >= 0.95)
      ++buckets[0];
    else if (r >= 0.90)
      ++buckets[1];
    else if (r >= 0.85)
      ++buckets[2];
    else if (r >= 0.80)
      ++buckets[3];
    else if (r >= 0.75)
      ++buckets[4];
    else
      ++buckets[5];
  }
  return buckets;
}

std::vector<double> mean_retained_per_job(
    const std::map<std::string, std::map<std::string, PcaResult>>& pca_by_job) {
  std::vector<double> out;
  out.reserve(pca_by_job.size());
  for (const auto& [job, by_kpi] : pca_by_job) {
    double sum = 0.0;
    for (const auto& [kpi, res] : by_kpi) sum += res.retained;
    out.push_back(by_kpi.empty() ? 0.0 : sum / static_cast<double>(by_kpi.size()));
  }
  return out;
}

FeatureVector flatten_job(const std::map<std::string, PcaResult>& results, const Catalog& selection) {
  FeatureVector fv;
  size_t t_len = 0;
  for (const auto& kpi : selection) {
    auto it = results.find(kpi.name);
    if (it == results.end()) fail(Errc::InvalidArg, "flatten_job: missing PCA result for KPI " + kpi.name);
    const PcaResult& r = it->second;
    if (fv.job_id.empty()) fv.job_id = r.job_id;
    if (t_len == 0)
      t_len = r.scores.rows;
    else if (r.scores.rows != t_len)
      fail(Errc::InvalidArg, "flatten_job: mismatched score lengths for job " + r.job_id);
    fv.kpis.push_back(kpi.name);
    for (size_t c = 0; c < 2; ++c)
      for (size_t i = 0; i < t_len; ++i) fv.data.push_back(r.scores.at(i, c));
  }
  return fv;
}

}  // namespace kpic
