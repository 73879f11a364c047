// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "hetccl/balancer.hpp"
#include "hetccl/collectives.hpp"
#include "hetccl/topology.hpp"
#include "hetccl/types.hpp"

namespace hetccl::bench {

/// homoA: platform A (cuda) only, homoB: platform B (hip) only, het: both.
enum class Scenario { kHomoA, kHomoB, kHet };

inline constexpr Scenario kAllScenarios[] = {Scenario::kHomoA, Scenario::kHomoB,
                                             Scenario::kHet};

std::string_view to_string(Scenario s);
Scenario parse_scenario(std::string_view name);

/// "lo:hi:xF" (geometric, factor F) or a comma list. Sizes must be positive
/// and strictly increasing. Throws ParseError.
std::vector<Bytes> parse_sizes(std::string_view text);

/// Ranks of a collective scenario at `world` ranks, or nullopt when the
/// topology cannot host it. Homogeneous scenarios take the platform's
/// first `world` devices in node order. The het scenario needs an even
/// world and takes world/2 devices of each platform, cuda ranks first.
std::optional<std::vector<DeviceId>> scenario_members(const ClusterTopology& topology,
                                                      Scenario scenario, int world);

struct P2pSweepSpec {
  std::vector<Bytes> sizes;
  std::vector<Scenario> scenarios{std::begin(kAllScenarios), std::end(kAllScenarios)};
  bool include_rdma = true;
  std::uint64_t seed = 1;
  /// Sizes up to this bound also move a random payload and verify it.
  Bytes payload_check_limit = 1 << 20;
};

struct P2pRow {
  Scenario scenario = Scenario::kHet;
  PathKind path = PathKind::kRdma;
  Bytes size = 0;
  Seconds duration = 0.0;
  double bandwidth = 0.0;  // size / duration
};

/// Device 0 of the first two nodes of the platform (homo) or of the first
/// node of each platform (het). One row per (scenario, path, size): rdma and
/// staged, or staged only without include_rdma. Throws InvalidArgument when
/// a scenario's endpoints do not exist and SelfCheckFailed on payload
/// corruption.
std::vector<P2pRow> run_p2p_sweep(const ClusterTopology& topology,
                                  const P2pSweepSpec& spec);

struct CollectiveSweepSpec {
  std::vector<Bytes> sizes;
  std::vector<CollectiveOp> ops{std::begin(kAllCollectiveOps), std::end(kAllCollectiveOps)};
  std::vector<int> worlds{2, 4, 8, 12, 16};
  std::vector<Scenario> scenarios{std::begin(kAllScenarios), std::end(kAllScenarios)};
  std::uint64_t seed = 1;
  bool self_check = true;
  int self_check_trials = 3;
};

struct CollectiveRow {
  CollectiveOp op = CollectiveOp::kAllReduce;
  Scenario scenario = Scenario::kHet;
  int world = 0;
  Bytes size = 0;  // collective_size_bytes convention
  Seconds duration = 0.0;
  double algbw = 0.0;
  double busbw = 0.0;
  bool degenerate = false;
};

/// Rows for every feasible (op, scenario, world, size). Before any timing,
/// each (op, scenario, world) cell runs random payloads through the library
/// and compares them with the reference semantics; a mismatch throws
/// SelfCheckFailed.
std::vector<CollectiveRow> run_collective_sweep(const ClusterTopology& topology,
                                                const CollectiveSweepSpec& spec);

struct TrainSpec {
  ModelDesc model;
  int zero_stage = 3;
  Scenario scenario = Scenario::kHet;
  bool balance = true;
  bool no_comm = false;
  int warmup_steps = 3;
};

struct TrainReport {
  std::string model;
  int zero_stage = 0;
  Scenario scenario = Scenario::kHet;
  bool balance = true;
  int world = 0;
  int batch = 0;
  StepReport step;
  /// Balanced over uniform throughput on the same ranks.
  double speedup_vs_uniform = 1.0;
  /// Het runs only: throughput over the sum of the two homogeneous runs,
  /// each on one platform's devices with the batch scaled by rank count.
  std::optional<double> efficiency;
  Seconds profiling_overhead = 0.0;
};

/// The het scenario uses every device; homogeneous ones use every device of
/// their platform with the batch scaled to their share of ranks.
TrainReport run_train_sim(const ClusterTopology& topology, const TrainSpec& spec);

/// CSV with a header row; numbers use "%.12g".
void write_csv(std::ostream& out, const std::vector<P2pRow>& rows);
void write_csv(std::ostream& out, const std::vector<CollectiveRow>& rows);
void write_csv(std::ostream& out, const std::vector<TrainReport>& rows);

std::string format_number(double v);

}  // namespace hetccl::bench
