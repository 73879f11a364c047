// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <map>
#include <set>
#include <sstream>

#include "hetccl/bench.hpp"
#include "hetccl/error.hpp"

using namespace hetccl;
using namespace hetccl::bench;

TEST(Bench, ParseSizes) {
  EXPECT_EQ(parse_sizes("1024:8192:x2"), (std::vector<Bytes>{1024, 2048, 4096, 8192}));
  EXPECT_EQ(parse_sizes("1:100:x10"), (std::vector<Bytes>{1, 10, 100}));
  EXPECT_EQ(parse_sizes("5,7,1000"), (std::vector<Bytes>{5, 7, 1000}));
  for (const char* bad : {"", "4,2", "1:10", "0:8:x2", "a,b", "8:4:x2", "1:8:x1", "3,3"}) {
    EXPECT_THROW(parse_sizes(bad), Error) << bad;
  }
}

TEST(Bench, ScenarioNames) {
  for (Scenario s : kAllScenarios) EXPECT_EQ(parse_scenario(to_string(s)), s);
  EXPECT_THROW(parse_scenario("mixed"), Error);
}

TEST(Bench, ScenarioMembers) {
  const ClusterTopology t = default_cluster();
  EXPECT_EQ(scenario_members(t, Scenario::kHomoA, 8)->size(), 8u);
  EXPECT_FALSE(scenario_members(t, Scenario::kHomoA, 12).has_value());
  EXPECT_FALSE(scenario_members(t, Scenario::kHet, 3).has_value());
  const auto het = *scenario_members(t, Scenario::kHet, 4);
  EXPECT_EQ(t.node(het[0].node).platform, Platform::kCuda);
  EXPECT_EQ(t.node(het[1].node).platform, Platform::kCuda);
  EXPECT_EQ(t.node(het[2].node).platform, Platform::kHip);
  EXPECT_EQ(scenario_members(t, Scenario::kHet, 16)->size(), 16u);
}

TEST(Bench, P2pHetBoundedBySlower) {
  const ClusterTopology t = default_cluster();
  P2pSweepSpec spec;
  spec.sizes = parse_sizes("1024:1073741824:x4");
  const auto rows = run_p2p_sweep(t, spec);
  std::map<std::tuple<Scenario, PathKind, Bytes>, P2pRow> by;
  for (const auto& r : rows) by[{r.scenario, r.path, r.size}] = r;
  EXPECT_EQ(rows.size(), spec.sizes.size() * 3 * 2);
  for (Bytes s : spec.sizes) {
    const auto& a = by.at({Scenario::kHomoA, PathKind::kRdma, s});
    const auto& b = by.at({Scenario::kHomoB, PathKind::kRdma, s});
    const auto& h = by.at({Scenario::kHet, PathKind::kRdma, s});
    EXPECT_EQ(h.bandwidth, std::min(a.bandwidth, b.bandwidth)) << s;
    for (Scenario sc : kAllScenarios) {
      const auto& rd = by.at({sc, PathKind::kRdma, s});
      const auto& st = by.at({sc, PathKind::kStaged, s});
      EXPECT_GE(st.duration, rd.duration);
      EXPECT_EQ(rd.bandwidth, static_cast<double>(s) / rd.duration);
    }
  }
  spec.include_rdma = false;
  for (const auto& r : run_p2p_sweep(t, spec)) EXPECT_EQ(r.path, PathKind::kStaged);
}

TEST(Bench, CollectiveSweepShape) {
  const ClusterTopology t = default_cluster();
  CollectiveSweepSpec spec;
  spec.sizes = {1 << 20};
  spec.worlds = {1, 2, 4, 8, 12, 16};
  const auto rows = run_collective_sweep(t, spec);
  std::map<Scenario, std::set<int>> worlds;
  for (const auto& r : rows) {
    worlds[r.scenario].insert(r.world);
    if (r.world == 1) {
      EXPECT_TRUE(r.degenerate);
      EXPECT_EQ(r.duration, 0.0);
    } else {
      EXPECT_FALSE(r.degenerate);
      EXPECT_EQ(r.algbw, static_cast<double>(r.size) / r.duration);
    }
  }
  EXPECT_EQ(worlds[Scenario::kHomoA], (std::set<int>{1, 2, 4, 8}));
  EXPECT_EQ(worlds[Scenario::kHet], (std::set<int>{2, 4, 8, 12, 16}));
  EXPECT_EQ(rows.size(), 6u * (4 + 4 + 5));
}

TEST(Bench, CsvDeterministic) {
  const ClusterTopology t = default_cluster();
  CollectiveSweepSpec spec;
  spec.sizes = {4096, 1 << 16};
  spec.worlds = {2, 8};
  std::ostringstream a;
  std::ostringstream b;
  write_csv(a, run_collective_sweep(t, spec));
  write_csv(b, run_collective_sweep(t, spec));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')).find("op"), 0u);
}

TEST(Bench, TrainSpeedupTrend) {
  const ClusterTopology t = default_cluster();
  double prev = 2.0;
  for (const ModelDesc& m : model_presets()) {
    TrainSpec spec;
    spec.model = m;
    const TrainReport r = run_train_sim(t, spec);
    EXPECT_LE(r.speedup_vs_uniform, prev) << m.name;
    EXPECT_LT(r.speedup_vs_uniform, 1.5);
    prev = r.speedup_vs_uniform;
    ASSERT_TRUE(r.efficiency.has_value());
    EXPECT_LE(*r.efficiency, 1.0);
    EXPECT_GT(*r.efficiency, 0.0);
    EXPECT_GT(r.profiling_overhead, 0.0);
  }
}

TEST(Bench, TrainZeroComm) {
  const ClusterTopology t = default_cluster();
  TrainSpec spec;
  spec.model = find_model("llama-1b");
  spec.no_comm = true;
  const TrainReport r = run_train_sim(t, spec);
  EXPECT_EQ(r.speedup_vs_uniform, 1.5);
  EXPECT_EQ(*r.efficiency, 1.0);
  spec.scenario = Scenario::kHomoA;
  EXPECT_FALSE(run_train_sim(t, spec).efficiency.has_value());
}
