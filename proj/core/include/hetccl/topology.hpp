// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hetccl/types.hpp"

namespace hetccl {

/// Alpha-beta cost of one transfer segment: t(bytes) = alpha + bytes / beta.
struct LinkModel {
  Seconds alpha = 0.0;  // per-message latency
  double beta = 1.0;    // bytes per second

  Seconds time(double bytes) const { return alpha + bytes / beta; }
  friend bool operator==(const LinkModel&, const LinkModel&) = default;
};

/// Named link presets accepted wherever a config expects a link model.
/// PCIe tiers share one latency so mixed-tier paths differ only in beta.
namespace tiers {
inline constexpr LinkModel kPcieGen3{1.0e-6, 12.0e9};
inline constexpr LinkModel kPcieGen4{1.0e-6, 24.0e9};
inline constexpr LinkModel kNicHdr{2.0e-6, 25.0e9};
/// Host network used for staged traffic when a node has no RDMA NIC.
inline constexpr LinkModel kHostEthernet{20.0e-6, 1.25e9};
}  // namespace tiers

std::optional<LinkModel> link_tier(std::string_view name);

struct NicSpec {
  LinkModel link;
  friend bool operator==(const NicSpec&, const NicSpec&) = default;
};

struct NodeSpec {
  int id = 0;
  Platform platform = Platform::kCuda;
  int device_count = 1;
  double device_speed = 1.0;  // tokens per second per device
  LinkModel pcie;             // host <-> device, also device <-> device P2P
  std::optional<NicSpec> nic;
};

/// Validated, immutable cluster description.
class ClusterTopology {
 public:
  ClusterTopology(std::vector<NodeSpec> nodes,
                  LinkModel host_link = tiers::kHostEthernet);

  const std::vector<NodeSpec>& nodes() const noexcept { return nodes_; }
  bool has_node(int id) const;
  const NodeSpec& node(int id) const;
  bool contains(DeviceId device) const;
  /// Every device, in node order then device order.
  std::vector<DeviceId> devices() const;
  std::vector<DeviceId> devices_of(Platform platform) const;

  /// Wire between two nodes. Between NIC-equipped nodes it is bounded by the
  /// slower NIC; otherwise it is the host network. Symmetric.
  const LinkModel& inter_node_link(int a, int b) const;
  const LinkModel& host_link() const noexcept { return host_link_; }

 private:
  std::vector<NodeSpec> nodes_;
  std::map<int, std::size_t> index_;
  LinkModel host_link_;
  std::map<std::pair<int, int>, LinkModel> links_;
};

/// Parses a JSON cluster description. Errors carry the JSON pointer (or
/// byte offset for syntax errors) in Error::details().
ClusterTopology load_topology(std::string_view document);
ClusterTopology load_topology_file(const std::filesystem::path& path);

/// Four nodes: two CUDA-like nodes on PCIe gen3 and two HIP-like nodes on
/// PCIe gen4, four devices each, every node with an HDR InfiniBand NIC.
std::string_view default_cluster_json();
ClusterTopology default_cluster();

enum class PathKind { kRdma, kStaged, kIntranode };
std::string_view to_string(PathKind kind);

/// Composed cost of a device-to-device transfer path.
///  rdma:      sum of alphas + bytes / min(beta)    (GPU -> NIC -> GPU)
///  staged:    sum over segments of alpha + bytes / beta
///             (GPU -> CPU, wire, CPU -> GPU; the wire is counted once)
///  intranode: alpha_pcie + bytes / beta_pcie       (PCIe P2P)
struct PathModel {
  PathKind kind = PathKind::kIntranode;
  std::vector<LinkModel> segments;

  Seconds operator()(double bytes) const;
  /// Limit of bytes / t(bytes) as bytes grows.
  double peak_bandwidth() const;
};

PathModel path_model(const ClusterTopology& topology, DeviceId src,
                     DeviceId dst, PathKind kind);

}  // namespace hetccl
