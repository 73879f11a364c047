// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hetccl/device_memory.hpp"
#include "hetccl/topology.hpp"
#include "hetccl/types.hpp"

namespace hetccl {

/// One rank's view of the simulated cluster: where it lives and how far its
/// virtual clock has advanced. The clock never moves backwards.
class Endpoint {
 public:
  Endpoint(int rank, DeviceId device, Platform platform, Seconds clock = 0.0)
      : rank_(rank), device_(device), platform_(platform), clock_(clock) {}

  int rank() const noexcept { return rank_; }
  DeviceId device_id() const noexcept { return device_; }
  int node() const noexcept { return device_.node; }
  int device() const noexcept { return device_.device; }
  Platform platform() const noexcept { return platform_; }
  Seconds clock() const noexcept { return clock_; }

  void advance_to(Seconds t) noexcept {
    if (t > clock_) clock_ = t;
  }

 private:
  int rank_;
  DeviceId device_;
  Platform platform_;
  Seconds clock_;
};

struct TransferReport {
  /// Payload size. Schedule-derived flows may carry fractional sizes.
  double bytes = 0.0;
  PathKind path_used = PathKind::kIntranode;
  Seconds start = 0.0;
  Seconds duration = 0.0;
  Seconds src_clock_after = 0.0;
  Seconds dst_clock_after = 0.0;
};

/// bytes / duration. Requires duration > 0.
double measured_bandwidth(const TransferReport& report);

/// A timing-only transfer between endpoints[src] and endpoints[dst].
struct Flow {
  std::size_t src = 0;
  std::size_t dst = 0;
  double bytes = 0.0;
};

/// Point-to-point transfers between ranks.
///
/// send_recv moves real payload bytes: RDMA copies straight between device
/// buffers, the staged path bounces through host buffers on both nodes, and
/// same-node transfers use a device-to-device copy. It is a blocking
/// rendezvous: the transfer starts at max(src clock, dst clock) and both
/// clocks end at start + duration.
///
/// exchange() times a batch of concurrent flows without payload. Flows that
/// share a NIC direction (transmit on the source node, receive on the
/// destination node) are serialized in batch order.
class Transport {
 public:
  Transport(const ClusterTopology& topology, MemoryManager& memory)
      : topology_(&topology), memory_(&memory) {}

  TransferReport send_recv(Endpoint& src, const DeviceBuffer& src_buf,
                           Endpoint& dst, DeviceBuffer& dst_buf, Bytes size,
                           bool prefer_rdma = true);

  std::vector<TransferReport> exchange(std::span<Endpoint> endpoints,
                                       std::span<const Flow> flows,
                                       bool prefer_rdma = true);

  /// Path a transfer between the two endpoints takes. `rdma_ready` says
  /// whether both sides have registered buffers.
  PathKind select_path(const Endpoint& src, const Endpoint& dst,
                       bool prefer_rdma, bool rdma_ready) const;
  PathModel model(const Endpoint& src, const Endpoint& dst, PathKind kind) const;

  /// Number of point-to-point transfers issued (send_recv calls plus flows).
  std::uint64_t transfer_count() const noexcept { return transfers_.load(); }
  void reset_counters() noexcept { transfers_.store(0); }

  const ClusterTopology& topology() const noexcept { return *topology_; }

 private:
  void check_buffer(const Endpoint& ep, const DeviceBuffer& buf) const;

  const ClusterTopology* topology_;
  MemoryManager* memory_;
  std::atomic<std::uint64_t> transfers_{0};
};

}  // namespace hetccl
