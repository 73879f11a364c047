// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hetccl/collectives.hpp"
#include "hetccl/communicator.hpp"
#include "hetccl/topology.hpp"
#include "hetccl/types.hpp"

namespace hetccl {

struct SpeedProfile {
  std::vector<double> speeds;  // tokens per second, one per rank
  Seconds profiling_duration = 0.0;
};

struct Assignment {
  int total = 0;
  std::vector<int> per_rank;
};

/// Real-valued shares B * s_i / sum(s).
std::vector<double> proportional_shares(int total, std::span<const double> speeds);

/// Integer split of `total` samples that minimizes max_i(b_i / s_i). Starts
/// from the floors of the proportional shares and hands each remaining
/// sample to the rank whose ratio grows least, ties to the lower rank.
/// Throws ZeroBatch for total < 1 and InvalidArgument for empty or
/// non-positive speeds.
Assignment assign_microbatches(int total, std::span<const double> speeds);

/// Equal split; the first total % ranks ranks take one extra sample.
Assignment uniform_assignment(int total, int ranks);

struct ModelDesc {
  std::string name;
  double params = 0.0;
  int dtype_bytes = 2;
  int seq_len = 1024;
  int batch = 1;  // global samples per step

  double param_bytes() const { return params * dtype_bytes; }
};

/// gpt-125m, gpt-355m, llama-1b, llama-3b.
const std::vector<ModelDesc>& model_presets();
/// Preset by name; ParseError when unknown.
const ModelDesc& find_model(std::string_view name);
/// {"params": n, "dtype_bytes": 2|4, "seq_len": n, "batch_B": n} with an
/// optional "name". Throws ParseError / MissingField.
ModelDesc parse_model_desc(std::string_view json);

struct ScheduledCollective {
  CollectiveOp op = CollectiveOp::kAllReduce;
  double bytes = 0.0;  // collective_size_bytes convention
};

/// Collectives issued once per training step.
///   stage 1: all_gather(parameters) + all_reduce(gradients)
///   stage 3: all_gather(parameters) twice + reduce_scatter(gradients)
struct ZeroSchedule {
  int stage = 0;
  std::vector<ScheduledCollective> collectives;

  /// Throws InvalidArgument unless stage is 1 or 3.
  static ZeroSchedule for_model(const ModelDesc& model, int stage);
  /// A step without communication.
  static ZeroSchedule none() { return {}; }

  double total_bytes(CollectiveOp op) const;
};

struct StepReport {
  Seconds compute_time = 0.0;
  Seconds comm_time = 0.0;
  Seconds step_time = 0.0;
  double tokens = 0.0;
  double throughput = 0.0;  // tokens / step_time
  std::vector<CollectiveReport> collectives;
};

/// One data-parallel step on `comm`. Rank i processes b_i * seq_len tokens
/// at its node's speed; the schedule's collectives then run through
/// `collectives`. Throws RankMismatch when the assignment does not cover
/// exactly the communicator's ranks.
StepReport simulate_step(const Assignment& assignment, int seq_len,
                         const ZeroSchedule& schedule, Communicator& comm,
                         Collectives& collectives, const ClusterTopology& topology);

/// Speeds of the communicator's ranks taken from the topology, with the
/// cost of `warmup_steps` uniform steps as the profiling duration.
/// InvalidArgument when warmup_steps < 1.
SpeedProfile simulate_profiling(const ModelDesc& model, const ZeroSchedule& schedule,
                                Communicator& comm, Collectives& collectives,
                                const ClusterTopology& topology, int warmup_steps);

/// het.throughput / (homo_a.throughput + homo_b.throughput).
double efficiency(const StepReport& het, const StepReport& homo_a,
                  const StepReport& homo_b);

}  // namespace hetccl
