// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "hetccl/topology.hpp"
#include "hetccl/transport.hpp"
#include "hetccl/types.hpp"

namespace hetccl {

/// Ranks that share a node (and therefore a platform). Vendor-local phases
/// of a collective run inside one group on the node's PCIe link.
struct VendorGroup {
  int node = 0;
  Platform platform = Platform::kCuda;
  std::vector<int> ranks;  // global ranks, ascending
  LinkModel link;
};

/// An ordered set of ranks with its vendor-group partition. Rank order is
/// the order of `members` at creation and is the global combine order.
class Communicator {
 public:
  static Communicator create(const ClusterTopology& topology,
                             std::span<const DeviceId> members);

  int world_size() const noexcept { return static_cast<int>(ranks_.size()); }
  const std::vector<Endpoint>& ranks() const noexcept { return ranks_; }
  std::span<Endpoint> endpoints() noexcept { return ranks_; }
  const Endpoint& rank(int r) const { return ranks_.at(static_cast<std::size_t>(r)); }

  const std::vector<VendorGroup>& groups() const noexcept { return groups_; }
  int group_of(int rank) const { return group_of_.at(static_cast<std::size_t>(rank)); }
  bool single_group() const noexcept { return groups_.size() == 1; }

  Seconds max_clock() const;
  /// Advances every rank to the latest clock and returns it.
  Seconds barrier();

 private:
  Communicator() = default;

  std::vector<Endpoint> ranks_;
  std::vector<VendorGroup> groups_;
  std::vector<int> group_of_;
};

}  // namespace hetccl
