// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "hetccl/collectives.hpp"
#include "hetccl/sim_backends.hpp"

namespace testing_support {

/// `cuda_nodes` CUDA nodes followed by `hip_nodes` HIP nodes, four devices
/// each, speeds 2 and 1, PCIe gen3 / gen4, HDR NICs.
inline std::string cluster_json(int cuda_nodes, int hip_nodes, int devices = 4) {
  std::string nodes;
  for (int i = 0; i < cuda_nodes + hip_nodes; ++i) {
    const bool cuda = i < cuda_nodes;
    if (!nodes.empty()) nodes += ",";
    nodes += "{\"id\": " + std::to_string(i) + ", \"platform\": \"" +
             (cuda ? "cuda" : "hip") + "\", \"devices\": " + std::to_string(devices) +
             ", \"speed_tokens_per_s\": " + (cuda ? "2" : "1") + ", \"pcie\": \"" +
             (cuda ? "gen3" : "gen4") + "\"}";
  }
  return "{\"defaults\": {\"nic\": \"hdr\"}, \"nodes\": [" + nodes + "]}";
}

/// Registry, memory, transport and collectives over one topology.
struct Runtime {
  explicit Runtime(const hetccl::ClusterTopology& t)
      : topology(t), memory(init(registry), topology), transport(topology, memory),
        collectives(registry, memory, transport) {}

  static hetccl::PlatformRegistry& init(hetccl::PlatformRegistry& r) {
    hetccl::register_sim_platforms(r, 16);
    return r;
  }

  hetccl::PlatformRegistry registry;
  const hetccl::ClusterTopology& topology;
  hetccl::MemoryManager memory;
  hetccl::Transport transport;
  hetccl::Collectives collectives;
};

}  // namespace testing_support
