// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "hetccl/topology.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "hetccl/error.hpp"
#include "json.hpp"

namespace hetccl {

using nlohmann::json;

std::optional<LinkModel> link_tier(std::string_view name) {
  if (name == "gen3") return tiers::kPcieGen3;
  if (name == "gen4") return tiers::kPcieGen4;
  if (name == "hdr") return tiers::kNicHdr;
  if (name == "ethernet") return tiers::kHostEthernet;
  return std::nullopt;
}

ClusterTopology::ClusterTopology(std::vector<NodeSpec> nodes,
                                 LinkModel host_link)
    : nodes_(std::move(nodes)), host_link_(host_link) {
  if (nodes_.empty()) {
    throw Error(Errc::kInvalidArgument, "topology has no nodes");
  }
  auto check_link = [](const LinkModel& l, const std::string& what) {
    if (!(l.alpha >= 0.0) || !(l.beta > 0.0)) {
      throw Error(Errc::kInvalidArgument,
                  what + ": need alpha >= 0 and beta > 0");
    }
  };
  check_link(host_link_, "host link");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const NodeSpec& n = nodes_[i];
    const std::string name = "node " + std::to_string(n.id);
    if (!index_.emplace(n.id, i).second) {
      throw Error(Errc::kInvalidArgument, "duplicate " + name);
    }
    if (n.device_count < 1) {
      throw Error(Errc::kInvalidArgument, name + ": device_count < 1");
    }
    if (!(n.device_speed > 0.0)) {
      throw Error(Errc::kInvalidArgument, name + ": device_speed <= 0");
    }
    check_link(n.pcie, name + " pcie");
    if (n.nic) check_link(n.nic->link, name + " nic");
  }
  for (const NodeSpec& a : nodes_) {
    for (const NodeSpec& b : nodes_) {
      if (a.id >= b.id) continue;
      LinkModel l = host_link_;
      if (a.nic && b.nic) {
        l.alpha = std::max(a.nic->link.alpha, b.nic->link.alpha);
        l.beta = std::min(a.nic->link.beta, b.nic->link.beta);
      }
      links_.emplace(std::pair{a.id, b.id}, l);
    }
  }
}

bool ClusterTopology::has_node(int id) const { return index_.count(id) != 0; }

const NodeSpec& ClusterTopology::node(int id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw Error(Errc::kUnknownNode, "node " + std::to_string(id));
  }
  return nodes_[it->second];
}

bool ClusterTopology::contains(DeviceId device) const {
  if (!has_node(device.node)) return false;
  return device.device >= 0 && device.device < node(device.node).device_count;
}

std::vector<DeviceId> ClusterTopology::devices() const {
  std::vector<DeviceId> out;
  for (const NodeSpec& n : nodes_) {
    for (int d = 0; d < n.device_count; ++d) out.push_back({n.id, d});
  }
  return out;
}

std::vector<DeviceId> ClusterTopology::devices_of(Platform platform) const {
  std::vector<DeviceId> out;
  for (const NodeSpec& n : nodes_) {
    if (n.platform != platform) continue;
    for (int d = 0; d < n.device_count; ++d) out.push_back({n.id, d});
  }
  return out;
}

const LinkModel& ClusterTopology::inter_node_link(int a, int b) const {
  if (a == b) {
    throw Error(Errc::kInvalidArgument, "no inter-node link from a node to itself");
  }
  node(a);
  node(b);
  return links_.at(std::pair{std::min(a, b), std::max(a, b)});
}

// ---------------------------------------------------------------------------
// Config parsing

namespace {

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
  throw Error(Errc::kParseError, what, {where.empty() ? "/" : where});
}

void reject_unknown_keys(const json& obj, const std::string& where,
                         std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      parse_fail(where + "/" + key, "unknown key '" + key + "'");
    }
  }
}

double number_at(const json& v, const std::string& where) {
  if (!v.is_number()) parse_fail(where, "expected a number");
  return v.get<double>();
}

int integer_at(const json& v, const std::string& where) {
  if (!v.is_number_integer()) parse_fail(where, "expected an integer");
  return v.get<int>();
}

LinkModel link_at(const json& v, const std::string& where,
                  const LinkModel& fallback) {
  if (v.is_string()) {
    auto tier = link_tier(v.get<std::string>());
    if (!tier) parse_fail(where, "unknown link tier '" + v.get<std::string>() + "'");
    return *tier;
  }
  if (!v.is_object()) parse_fail(where, "expected a tier name or {alpha_s, beta_Bps}");
  reject_unknown_keys(v, where, {"alpha_s", "beta_Bps"});
  LinkModel l = fallback;
  if (v.contains("alpha_s")) l.alpha = number_at(v["alpha_s"], where + "/alpha_s");
  if (v.contains("beta_Bps")) l.beta = number_at(v["beta_Bps"], where + "/beta_Bps");
  if (l.alpha < 0.0) parse_fail(where + "/alpha_s", "alpha must be >= 0");
  if (!(l.beta > 0.0)) parse_fail(where + "/beta_Bps", "beta must be > 0");
  return l;
}

std::optional<NicSpec> nic_at(const json& v, const std::string& where,
                              const std::optional<NicSpec>& fallback) {
  if (v.is_null()) return std::nullopt;
  const LinkModel base = fallback ? fallback->link : tiers::kNicHdr;
  return NicSpec{link_at(v, where, base)};
}

struct Defaults {
  int devices = 1;
  double speed = 1000.0;
  LinkModel pcie = tiers::kPcieGen3;
  std::optional<NicSpec> nic = NicSpec{tiers::kNicHdr};
  LinkModel host_link = tiers::kHostEthernet;
};

Defaults parse_defaults(const json& v) {
  const std::string where = "/defaults";
  if (!v.is_object()) parse_fail(where, "expected an object");
  reject_unknown_keys(v, where,
                      {"devices", "speed_tokens_per_s", "pcie", "nic", "host_link"});
  Defaults d;
  if (v.contains("devices")) d.devices = integer_at(v["devices"], where + "/devices");
  if (v.contains("speed_tokens_per_s")) {
    d.speed = number_at(v["speed_tokens_per_s"], where + "/speed_tokens_per_s");
  }
  if (v.contains("pcie")) d.pcie = link_at(v["pcie"], where + "/pcie", d.pcie);
  if (v.contains("nic")) d.nic = nic_at(v["nic"], where + "/nic", d.nic);
  if (v.contains("host_link")) {
    d.host_link = link_at(v["host_link"], where + "/host_link", d.host_link);
  }
  return d;
}

Platform platform_at(const json& v, const std::string& where, int node_id) {
  auto one = [&](const json& p, const std::string& at) {
    if (!p.is_string()) parse_fail(at, "expected a platform name");
    try {
      return parse_platform(p.get<std::string>());
    } catch (const Error& e) {
      parse_fail(at, e.what());
    }
  };
  if (!v.is_array()) return one(v, where);
  if (v.empty()) parse_fail(where, "empty platform list");
  std::set<Platform> seen;
  for (std::size_t i = 0; i < v.size(); ++i) {
    seen.insert(one(v[i], where + "/" + std::to_string(i)));
  }
  if (seen.size() > 1) {
    throw Error(Errc::kMixedVendorNode,
                "node " + std::to_string(node_id) + " lists several platforms",
                {where});
  }
  return *seen.begin();
}

NodeSpec parse_node(const json& v, const std::string& where, const Defaults& d) {
  if (!v.is_object()) parse_fail(where, "expected an object");
  reject_unknown_keys(v, where, {"id", "platform", "devices", "speed_tokens_per_s",
                                 "pcie", "nic"});
  for (const char* required : {"id", "platform"}) {
    if (!v.contains(required)) {
      throw Error(Errc::kMissingField, std::string("node needs '") + required + "'",
                  {where + "/" + required});
    }
  }
  NodeSpec n;
  n.id = integer_at(v["id"], where + "/id");
  n.platform = platform_at(v["platform"], where + "/platform", n.id);
  n.device_count = v.contains("devices") ? integer_at(v["devices"], where + "/devices")
                                         : d.devices;
  if (n.device_count < 1) parse_fail(where + "/devices", "devices must be >= 1");
  n.device_speed = v.contains("speed_tokens_per_s")
                       ? number_at(v["speed_tokens_per_s"], where + "/speed_tokens_per_s")
                       : d.speed;
  if (!(n.device_speed > 0.0)) {
    parse_fail(where + "/speed_tokens_per_s", "speed must be > 0");
  }
  n.pcie = v.contains("pcie") ? link_at(v["pcie"], where + "/pcie", d.pcie) : d.pcie;
  n.nic = v.contains("nic") ? nic_at(v["nic"], where + "/nic", d.nic) : d.nic;
  return n;
}

}  // namespace

ClusterTopology load_topology(std::string_view document) {
  json root;
  try {
    root = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw Error(Errc::kParseError, e.what(), {"byte " + std::to_string(e.byte)});
  }
  if (!root.is_object()) parse_fail("", "expected a top-level object");
  reject_unknown_keys(root, "", {"nodes", "defaults"});
  if (!root.contains("nodes")) {
    throw Error(Errc::kMissingField, "document needs 'nodes'", {"/nodes"});
  }
  const Defaults d = root.contains("defaults") ? parse_defaults(root["defaults"])
                                               : Defaults{};
  const json& nodes = root["nodes"];
  if (!nodes.is_array() || nodes.empty()) {
    parse_fail("/nodes", "expected a non-empty array");
  }
  std::vector<NodeSpec> specs;
  std::set<int> ids;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string where = "/nodes/" + std::to_string(i);
    NodeSpec n = parse_node(nodes[i], where, d);
    if (!ids.insert(n.id).second) parse_fail(where + "/id", "duplicate node id");
    specs.push_back(n);
  }
  return ClusterTopology(std::move(specs), d.host_link);
}

ClusterTopology load_topology_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::kParseError, "cannot open " + path.string(), {path.string()});
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return load_topology(ss.str());
}

std::string_view default_cluster_json() {
  return R"({
  "defaults": {"nic": "hdr"},
  "nodes": [
    {"id": 0, "platform": "cuda", "devices": 4, "speed_tokens_per_s": 4000, "pcie": "gen3"},
    {"id": 1, "platform": "cuda", "devices": 4, "speed_tokens_per_s": 4000, "pcie": "gen3"},
    {"id": 2, "platform": "hip",  "devices": 4, "speed_tokens_per_s": 2000, "pcie": "gen4"},
    {"id": 3, "platform": "hip",  "devices": 4, "speed_tokens_per_s": 2000, "pcie": "gen4"}
  ]
}
)";
}

ClusterTopology default_cluster() { return load_topology(default_cluster_json()); }

// ---------------------------------------------------------------------------
// Path composition

std::string_view to_string(PathKind kind) {
  switch (kind) {
    case PathKind::kRdma: return "rdma";
    case PathKind::kStaged: return "staged";
    case PathKind::kIntranode: return "intranode";
  }
  return "unknown";
}

Seconds PathModel::operator()(double bytes) const {
  if (kind == PathKind::kRdma) {
    Seconds alpha = 0.0;
    double beta = segments.front().beta;
    for (const LinkModel& s : segments) {
      alpha += s.alpha;
      beta = std::min(beta, s.beta);
    }
    return alpha + bytes / beta;
  }
  Seconds t = 0.0;
  for (const LinkModel& s : segments) t += s.time(bytes);
  return t;
}

double PathModel::peak_bandwidth() const {
  if (kind == PathKind::kRdma) {
    double beta = segments.front().beta;
    for (const LinkModel& s : segments) beta = std::min(beta, s.beta);
    return beta;
  }
  double inv = 0.0;
  for (const LinkModel& s : segments) inv += 1.0 / s.beta;
  return 1.0 / inv;
}

PathModel path_model(const ClusterTopology& topology, DeviceId src,
                     DeviceId dst, PathKind kind) {
  for (DeviceId d : {src, dst}) {
    if (!topology.contains(d)) {
      if (!topology.has_node(d.node)) {
        throw Error(Errc::kUnknownNode, "node " + std::to_string(d.node));
      }
      throw Error(Errc::kInvalidArgument,
                  "device " + std::to_string(d.device) + " not on node " +
                      std::to_string(d.node));
    }
  }
  const NodeSpec& a = topology.node(src.node);
  const NodeSpec& b = topology.node(dst.node);
  PathModel m;
  m.kind = kind;
  if (kind == PathKind::kIntranode) {
    if (src.node != dst.node) {
      throw Error(Errc::kInvalidArgument, "intranode path between different nodes");
    }
    m.segments = {a.pcie};
    return m;
  }
  if (src.node == dst.node) {
    throw Error(Errc::kInvalidArgument,
                std::string(to_string(kind)) + " path within one node");
  }
  if (kind == PathKind::kRdma && (!a.nic || !b.nic)) {
    throw Error(Errc::kNoRdmaPath, "node " + std::to_string(a.nic ? b.id : a.id) +
                                       " has no NIC");
  }
  m.segments = {a.pcie, topology.inter_node_link(a.id, b.id), b.pcie};
  return m;
}

}  // namespace hetccl
