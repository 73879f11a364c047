// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hetccl/platform_registry.hpp"
#include "hetccl/topology.hpp"
#include "hetccl/types.hpp"

namespace hetccl {

/// Token returned by memory-region registration. Valid only for transfers
/// through the NIC of node `nic`.
struct RegionKey {
  std::uint64_t key = 0;
  int nic = 0;
  friend bool operator==(const RegionKey&, const RegionKey&) = default;
};

/// Device allocation tagged with the platform and node that own it.
class DeviceBuffer {
 public:
  std::uint64_t id() const noexcept { return id_; }
  Platform platform() const noexcept { return platform_; }
  int node() const noexcept { return node_; }
  Bytes size() const noexcept { return payload_.size(); }

  std::span<std::byte> bytes() noexcept { return payload_; }
  std::span<const std::byte> bytes() const noexcept { return payload_; }

  const std::optional<RegionKey>& region() const noexcept { return region_; }
  bool rdma_eligible() const noexcept { return region_.has_value(); }

 private:
  friend class MemoryManager;
  DeviceBuffer(std::uint64_t id, Platform platform, int node,
               std::vector<std::byte> payload)
      : id_(id), platform_(platform), node_(node), payload_(std::move(payload)) {}

  std::uint64_t id_;
  Platform platform_;
  int node_;
  std::vector<std::byte> payload_;
  std::optional<RegionKey> region_;
};

/// Pinned host memory used as a staging area.
class HostBuffer {
 public:
  std::uint64_t id() const noexcept { return id_; }
  int node() const noexcept { return node_; }
  Bytes size() const noexcept { return payload_.size(); }
  std::span<std::byte> bytes() noexcept { return payload_; }
  std::span<const std::byte> bytes() const noexcept { return payload_; }

 private:
  friend class MemoryManager;
  HostBuffer(std::uint64_t id, int node, Bytes size)
      : id_(id), node_(node), payload_(size, std::byte{0}) {}

  std::uint64_t id_;
  int node_;
  std::vector<std::byte> payload_;
};

/// Allocation, registration and host<->device copies. Device calls go
/// through the platform registry; copy durations come from the node's PCIe
/// link model. Safe to call from several rank workers at once.
class MemoryManager {
 public:
  MemoryManager(const PlatformRegistry& registry, const ClusterTopology& topology)
      : registry_(&registry), topology_(&topology) {}

  /// Zero-initialized buffer.
  DeviceBuffer alloc(Platform platform, int node, Bytes size);
  DeviceBuffer alloc(DeviceId device, Bytes size);
  HostBuffer alloc_host(int node, Bytes size);
  void release(DeviceBuffer&& buffer);

  /// Binds the buffer to its node's NIC. Registering twice returns the
  /// existing key.
  RegionKey register_region(DeviceBuffer& buffer);

  Seconds copy_h2d(const HostBuffer& src, DeviceBuffer& dst, Bytes size);
  Seconds copy_d2h(const DeviceBuffer& src, HostBuffer& dst, Bytes size);
  /// Same platform and same node only; cross-vendor traffic uses Transport.
  Seconds copy_d2d(const DeviceBuffer& src, DeviceBuffer& dst, Bytes size);

  const PlatformRegistry& registry() const noexcept { return *registry_; }
  const ClusterTopology& topology() const noexcept { return *topology_; }

 private:
  Seconds pcie_time(int node, Bytes size) const;
  static void check_extent(Bytes size, Bytes src_size, Bytes dst_size);

  const PlatformRegistry* registry_;
  const ClusterTopology* topology_;
  std::atomic<std::uint64_t> next_id_{1};
  std::atomic<std::uint64_t> next_key_{1};
};

}  // namespace hetccl
