// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hetccl/communicator.hpp"
#include "hetccl/device_memory.hpp"
#include "hetccl/platform_registry.hpp"
#include "hetccl/topology.hpp"
#include "hetccl/transport.hpp"
#include "hetccl/types.hpp"

namespace hetccl {

enum class CollectiveOp {
  kAllReduce,
  kAllGather,
  kReduceScatter,
  kReduce,
  kBroadcast,
  kAllToAll,
};

inline constexpr CollectiveOp kAllCollectiveOps[] = {
    CollectiveOp::kAllReduce, CollectiveOp::kAllGather, CollectiveOp::kReduceScatter,
    CollectiveOp::kReduce,    CollectiveOp::kBroadcast, CollectiveOp::kAllToAll,
};

std::string_view to_string(CollectiveOp op);
CollectiveOp parse_collective_op(std::string_view name);
bool is_reducing(CollectiveOp op);
bool is_rooted(CollectiveOp op);

struct CollectiveSpec {
  CollectiveOp op = CollectiveOp::kAllReduce;
  DataType dtype = DataType::kF32;
  std::optional<ReduceOp> combiner;  // reducing ops only
  std::optional<int> root;           // rooted ops only

  /// Checks the combiner/root shape and that root < world_size.
  void validate(int world_size) const;
};

/// Pipeline chunk used by broadcast and reduce chains.
inline constexpr double kPipelineChunkBytes = 1024.0 * 1024.0;

/// Analytic ring (or chain) time of a single-link collective over n ranks.
/// `size_bytes` follows the bus-bandwidth convention of the op (see
/// collective_size_bytes). With chunk c = size / n:
///   all_reduce                 2(n-1)(alpha + c/beta)
///   all_gather, reduce_scatter  (n-1)(alpha + c/beta)
///   all_to_all                  (n-1)(alpha + c/beta)
///   broadcast, reduce          (n-1 + m-1)(alpha + size/m/beta),
///                              m = ceil(size / kPipelineChunkBytes)
Seconds ring_time(int n_ranks, double size_bytes, const LinkModel& link,
                  CollectiveOp op);

/// Multiplier from algorithm bandwidth (size / time) to bus bandwidth:
/// all_reduce 2(n-1)/n; all_gather, reduce_scatter, all_to_all (n-1)/n;
/// broadcast, reduce 1.
double bus_bandwidth_factor(CollectiveOp op, int n_ranks);

/// Size S used for timing and bandwidth, from the per-rank send bytes:
/// all_gather counts the gathered output (world * send), every other op the
/// per-rank send buffer.
double collective_size_bytes(CollectiveOp op, double send_bytes, int world_size);

struct PhaseTiming {
  std::string name;
  Seconds duration = 0.0;
};

struct CollectiveReport {
  CollectiveOp op = CollectiveOp::kAllReduce;
  int world_size = 0;
  double bytes = 0.0;
  Seconds completion_time = 0.0;
  double algbw = 0.0;  // bytes / completion_time, 0 when degenerate
  double busbw = 0.0;
  std::vector<PhaseTiming> phases;

  bool degenerate() const { return !(completion_time > 0.0); }
};

struct CollectiveResult {
  std::vector<DeviceBuffer> outputs;
  CollectiveReport report;
};

struct BackendResult {
  std::vector<DeviceBuffer> outputs;
  Seconds duration = 0.0;
};

struct CollectiveOptions {
  bool prefer_rdma = true;
};

/// Collectives over a communicator.
///
/// A communicator that is one vendor group hands the whole operation to
/// backend_collective, the vendor-library analog. Otherwise the operation
/// runs hierarchically: vendor-local phases inside each group through the
/// backend, cross-group phases as point-to-point rings through Transport.
///
/// Results are computed by folding inputs in ascending global rank order
/// with the platform kernels, so every schedule yields the same bytes as a
/// flat reduction. Timing follows the hierarchical schedule on the ranks'
/// virtual clocks:
///   all_reduce      local reduce_scatter, cross reduce_scatter + all_gather,
///                   local all_gather
///   reduce_scatter  local reduce_scatter, cross reduce_scatter
///   all_gather      cross all_gather, local all_gather
///   all_to_all      local all_to_all, cross direct exchange
///   broadcast       cross pipelined chain from the root, local broadcast
///   reduce          local reduce, cross pipelined chain into the root
/// Cross phases run one ring per lane (lane j pairs the j-th rank of every
/// group), steps are bulk-synchronous, and flows sharing a NIC direction are
/// serialized.
class Collectives {
 public:
  Collectives(const PlatformRegistry& registry, MemoryManager& memory,
              Transport& transport, CollectiveOptions options = {})
      : registry_(&registry), memory_(&memory), transport_(&transport),
        options_(options) {}

  /// Single-platform, single-node ring collective on the group's PCIe link.
  /// The root, if any, is an index into `buffers`.
  BackendResult backend_collective(const CollectiveSpec& spec,
                                   std::span<const DeviceBuffer> buffers);

  /// `send[r]` must live on rank r's device.
  CollectiveResult run(Communicator& comm, const CollectiveSpec& spec,
                       std::span<const DeviceBuffer> send);

  CollectiveResult all_reduce(Communicator& comm, std::span<const DeviceBuffer> send,
                              DataType dtype, ReduceOp op);
  CollectiveResult all_gather(Communicator& comm, std::span<const DeviceBuffer> send,
                              DataType dtype);
  CollectiveResult reduce_scatter(Communicator& comm, std::span<const DeviceBuffer> send,
                                  DataType dtype, ReduceOp op);
  CollectiveResult reduce(Communicator& comm, std::span<const DeviceBuffer> send,
                          DataType dtype, ReduceOp op, int root);
  CollectiveResult broadcast(Communicator& comm, std::span<const DeviceBuffer> send,
                             DataType dtype, int root);
  CollectiveResult all_to_all(Communicator& comm, std::span<const DeviceBuffer> send,
                              DataType dtype);

  /// Timing only: advances the communicator's clocks as `op` over `size_bytes`
  /// (collective_size_bytes convention) would.
  CollectiveReport simulate(Communicator& comm, CollectiveOp op, double size_bytes,
                            int root = 0);

  std::uint64_t backend_calls() const noexcept { return backend_calls_.load(); }
  void reset_counters() noexcept { backend_calls_.store(0); }
  const CollectiveOptions& options() const noexcept { return options_; }

 private:
  CollectiveReport schedule(Communicator& comm, CollectiveOp op, double size_bytes,
                            int root);
  Seconds local_phase(Communicator& comm, CollectiveOp op,
                      std::span<const double> group_bytes);
  Seconds run_steps(Communicator& comm, const std::vector<std::vector<Flow>>& steps);

  const PlatformRegistry* registry_;
  MemoryManager* memory_;
  Transport* transport_;
  CollectiveOptions options_;
  std::atomic<std::uint64_t> backend_calls_{0};
};

}  // namespace hetccl
