// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <map>

#include "core/error.hpp"
#include "core/preprocess.hpp"
#include "core/rng.hpp"
#include "doctest.h"

using namespace kpic;

namespace {

std::vector<KpiRecord> two_node_fixture() {
  // n1 ramps 0..10, n2 is constant 7
  return {
      {0, "j1", "n1", 0.0}, {10, "j1", "n1", 10.0},
      {0, "j1", "n2", 7.0}, {10, "j1", "n2", 7.0},
  };
}

}  // namespace

TEST_CASE("assemble: linear interpolation hits the midpoint") {
  auto m = assemble_matrix(two_node_fixture(), 3);
  REQUIRE(m.t_len() == 3);
  REQUIRE(m.node_count() == 2);
  CHECK(m.node_ids == std::vector<std::string>{"n1", "n2"});
  CHECK(m.values.at(0, 0) == doctest::Approx(0.0));
  CHECK(m.values.at(1, 0) == doctest::Approx(5.0));
  CHECK(m.values.at(2, 0) == doctest::Approx(10.0));
  CHECK(m.grid == std::vector<double>{0.0, 0.5, 1.0});
}

TEST_CASE("assemble: constant series stay constant on any grid") {
  std::vector<KpiRecord> records{
      {0, "j1", "n1", 7.0}, {30, "j1", "n1", 7.0},
      {0, "j1", "n2", 7.0}, {30, "j1", "n2", 7.0},
  };
  auto m = assemble_matrix(records, 4);
  REQUIRE(m.t_len() == 4);
  for (size_t i = 0; i < 4; ++i)
    for (size_t c = 0; c < 2; ++c) CHECK(m.values.at(i, c) == 7.0);
}

TEST_CASE("assemble: extrapolation clamps to the node's own range") {
  // job span [0,10] via n1; n2 sampled only on [2,8]
  std::vector<KpiRecord> records{
      {0, "j1", "n1", 0.0}, {10, "j1", "n1", 0.0},
      {2, "j1", "n2", 4.0}, {8, "j1", "n2", 16.0},
  };
  auto m = assemble_matrix(records, 3);
  CHECK(m.values.at(0, 1) == 4.0);   // clamped to the t=2 sample
  CHECK(m.values.at(1, 1) == doctest::Approx(10.0));
  CHECK(m.values.at(2, 1) == 16.0);  // clamped to the t=8 sample
}

TEST_CASE("assemble: nodes with fewer than two samples are dropped") {
  auto records = two_node_fixture();
  records.push_back({5, "j1", "n3", 99.0});
  auto m = assemble_matrix(records, 3);
  CHECK(m.node_count() == 2);
  CHECK(std::find(m.node_ids.begin(), m.node_ids.end(), "n3") == m.node_ids.end());
}

TEST_CASE("assemble: duplicate timestamps are averaged") {
  std::vector<KpiRecord> records{
      {0, "j1", "n1", 2.0}, {0, "j1", "n1", 4.0}, {10, "j1", "n1", 6.0},
      {0, "j1", "n2", 1.0}, {10, "j1", "n2", 1.0},
  };
  auto m = assemble_matrix(records, 2);
  CHECK(m.values.at(0, 0) == doctest::Approx(3.0));
}

TEST_CASE("assemble: degenerate jobs are rejected") {
  SUBCASE("fewer than two usable nodes") {
    std::vector<KpiRecord> records{
        {0, "j1", "n1", 1.0}, {10, "j1", "n1", 2.0}, {5, "j1", "n2", 3.0}};
    CHECK_THROWS_AS(assemble_matrix(records, 3), Error);
  }
  SUBCASE("zero time span") {
    std::vector<KpiRecord> records{
        {5, "j1", "n1", 1.0}, {5, "j1", "n1", 2.0},
        {5, "j1", "n2", 3.0}, {5, "j1", "n2", 4.0}};
    CHECK_THROWS_AS(assemble_matrix(records, 3), Error);
  }
  SUBCASE("no records") { CHECK_THROWS_AS(assemble_matrix({}, 3), Error); }
}

TEST_CASE("standardize: hand-computed column") {
  std::vector<KpiRecord> records{
      {0, "j1", "n1", 1.0}, {5, "j1", "n1", 2.0}, {10, "j1", "n1", 3.0},
      {0, "j1", "n2", 0.0}, {5, "j1", "n2", 1.0}, {10, "j1", "n2", 0.0},
  };
  auto m = standardize(assemble_matrix(records, 3));
  // (x - 2) / sqrt(2/3)
  CHECK(m.values.at(0, 0) == doctest::Approx(-1.2247448714).epsilon(1e-9));
  CHECK(m.values.at(1, 0) == doctest::Approx(0.0));
  CHECK(m.values.at(2, 0) == doctest::Approx(1.2247448714).epsilon(1e-9));
  CHECK_FALSE(m.zero_variance[0]);
}

TEST_CASE("standardize: constant columns map to zeros and are flagged") {
  std::vector<KpiRecord> records{
      {0, "j1", "n1", 5.0}, {10, "j1", "n1", 5.0},
      {0, "j1", "n2", 1.0}, {10, "j1", "n2", 2.0},
  };
  auto m = standardize(assemble_matrix(records, 3));
  for (size_t i = 0; i < 3; ++i) CHECK(m.values.at(i, 0) == 0.0);
  CHECK(m.zero_variance[0] == 1);
  CHECK(m.zero_variance[1] == 0);
}

TEST_CASE("standardize: idempotent within 1e-10") {
  Rng rng(7);
  TimeNodeMatrix m;
  m.job_id = "j1";
  m.values = Matrix(32, 3);
  for (double& v : m.values.data) v = rand_normal(rng) * 11.0 + 3.0;
  m.grid.assign(32, 0.0);
  m.node_ids = {"a", "b", "c"};
  m.zero_variance.assign(3, 0);

  auto once = standardize(m);
  auto twice = standardize(once);
  for (size_t i = 0; i < once.values.data.size(); ++i)
    CHECK(std::abs(once.values.data[i] - twice.values.data[i]) <= 1e-10);
}

TEST_CASE("property: standardized columns have mean 0 and variance 1") {
  Rng rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    size_t t = 8 + rand_index(rng, 40);
    size_t nodes = 2 + rand_index(rng, 5);
    std::vector<KpiRecord> records;
    for (size_t c = 0; c < nodes; ++c)
      for (size_t s = 0; s < t; ++s)
        records.push_back({static_cast<int64_t>(s * 7), "j", "n" + std::to_string(c),
                           rand_normal(rng) * 100.0 + 50.0});
    auto m = standardize(assemble_matrix(records, 16));
    for (size_t c = 0; c < m.node_count(); ++c) {
      if (m.zero_variance[c]) continue;
      double mean = 0.0;
      for (size_t i = 0; i < m.t_len(); ++i) mean += m.values.at(i, c);
      mean /= static_cast<double>(m.t_len());
      double var = 0.0;
      for (size_t i = 0; i < m.t_len(); ++i) {
        double d = m.values.at(i, c) - mean;
        var += d * d;
      }
      var /= static_cast<double>(m.t_len());
      CHECK(std::abs(mean) <= 1e-10);
      CHECK(std::abs(var - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("property: assembly is invariant under record order") {
  Rng rng(5150);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<KpiRecord> records;
    size_t nodes = 2 + rand_index(rng, 4);
    for (size_t c = 0; c < nodes; ++c) {
      size_t samples = 2 + rand_index(rng, 20);
      for (size_t s = 0; s < samples; ++s)
        records.push_back({static_cast<int64_t>(rand_index(rng, 50)), "j",
                           "n" + std::to_string(c), rand_normal(rng)});
    }
    TimeNodeMatrix base;
    bool degenerate = false;
    try {
      base = assemble_matrix(records, 9);
    } catch (const Error&) {
      degenerate = true;  // random duplicate timestamps may starve nodes
    }
    auto shuffled = records;
    for (size_t i = shuffled.size(); i > 1; --i)
      std::swap(shuffled[i - 1], shuffled[rand_index(rng, i)]);
    if (degenerate) {
      CHECK_THROWS_AS(assemble_matrix(shuffled, 9), Error);
      continue;
    }
    auto again = assemble_matrix(shuffled, 9);
    CHECK(again.values == base.values);
    CHECK(again.node_ids == base.node_ids);
    CHECK(again.grid == base.grid);
  }
}

TEST_CASE("property: interpolated values stay inside each node's sample range") {
  Rng rng(31337);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<KpiRecord> records;
    std::map<std::string, std::pair<double, double>> bounds;
    for (size_t c = 0; c < 3; ++c) {
      std::string node = "n" + std::to_string(c);
      double lo = 1e300, hi = -1e300;
      for (size_t s = 0; s < 12; ++s) {
        double v = rand_normal(rng) * 10.0;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        records.push_back({static_cast<int64_t>(s * 3 + rand_index(rng, 2)), "j", node, v});
      }
      bounds[node] = {lo, hi};
    }
    TimeNodeMatrix m;
    try {
      m = assemble_matrix(records, 17);
    } catch (const Error&) {
      continue;
    }
    for (size_t c = 0; c < m.node_count(); ++c) {
      auto [lo, hi] = bounds[m.node_ids[c]];
      for (size_t i = 0; i < m.t_len(); ++i) {
        CHECK(m.values.at(i, c) >= lo - 1e-12);
        CHECK(m.values.at(i, c) <= hi + 1e-12);
      }
    }
  }
}
