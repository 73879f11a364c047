// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "hetccl/communicator.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "hetccl/error.hpp"

namespace hetccl {

Communicator Communicator::create(const ClusterTopology& topology,
                                  std::span<const DeviceId> members) {
  if (members.empty()) {
    throw Error(Errc::kInvalidArgument, "communicator needs at least one rank");
  }
  Communicator comm;
  std::set<DeviceId> seen;
  std::map<int, std::size_t> group_index;
  for (std::size_t r = 0; r < members.size(); ++r) {
    const DeviceId d = members[r];
    if (!topology.contains(d)) {
      throw Error(Errc::kInvalidArgument, "device " + std::to_string(d.device) +
                                              " on node " + std::to_string(d.node) +
                                              " is not in the topology");
    }
    if (!seen.insert(d).second) {
      throw Error(Errc::kInvalidArgument, "device listed twice");
    }
    const NodeSpec& node = topology.node(d.node);
    const int rank = static_cast<int>(r);
    comm.ranks_.emplace_back(rank, d, node.platform);
    auto [it, inserted] = group_index.emplace(d.node, comm.groups_.size());
    if (inserted) comm.groups_.push_back(VendorGroup{d.node, node.platform, {}, node.pcie});
    comm.groups_[it->second].ranks.push_back(rank);
    comm.group_of_.push_back(static_cast<int>(it->second));
  }
  return comm;
}

Seconds Communicator::max_clock() const {
  Seconds t = 0.0;
  for (const Endpoint& e : ranks_) t = std::max(t, e.clock());
  return t;
}

Seconds Communicator::barrier() {
  const Seconds t = max_clock();
  for (Endpoint& e : ranks_) e.advance_to(t);
  return t;
}

}  // namespace hetccl
