// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "hetccl/error.hpp"
#include "hetccl/topology.hpp"

using namespace hetccl;

namespace {

Error error_of(std::string_view doc) {
  try {
    load_topology(doc);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "expected an Error";
  return Error(Errc::kInvalidArgument, "");
}

}  // namespace

TEST(Topology, DefaultClusterMirrorsFourNodeLayout) {
  const ClusterTopology t = default_cluster();
  ASSERT_EQ(t.nodes().size(), 4u);
  EXPECT_EQ(t.devices().size(), 16u);
  EXPECT_EQ(t.devices_of(Platform::kCuda).size(), 8u);
  EXPECT_EQ(t.node(0).pcie, tiers::kPcieGen3);
  EXPECT_EQ(t.node(3).pcie, tiers::kPcieGen4);
  EXPECT_EQ(t.node(2).platform, Platform::kHip);
  for (const NodeSpec& n : t.nodes()) {
    ASSERT_TRUE(n.nic.has_value());
    EXPECT_EQ(n.nic->link, tiers::kNicHdr);
  }
}

TEST(Topology, TierOrdering) {
  EXPECT_LT(tiers::kPcieGen3.beta, tiers::kPcieGen4.beta);
  EXPECT_LT(tiers::kPcieGen4.beta, tiers::kNicHdr.beta);
}

TEST(Topology, MinimalFileUsesDefaults) {
  const ClusterTopology t = load_topology(R"({"nodes": [{"id": 5, "platform": "amd"}]})");
  const NodeSpec& n = t.node(5);
  EXPECT_EQ(n.platform, Platform::kHip);
  EXPECT_EQ(n.device_count, 1);
  EXPECT_EQ(n.pcie, tiers::kPcieGen3);
  ASSERT_TRUE(n.nic);
  EXPECT_EQ(n.nic->link, tiers::kNicHdr);
  EXPECT_EQ(t.host_link(), tiers::kHostEthernet);
}

TEST(Topology, ExplicitLinkModels) {
  const ClusterTopology t = load_topology(R"({
    "defaults": {"devices": 2, "speed_tokens_per_s": 7},
    "nodes": [
      {"id": 0, "platform": "cuda", "pcie": {"alpha_s": 0, "beta_Bps": 10}},
      {"id": 1, "platform": "hip", "nic": {"alpha_s": 0.5, "beta_Bps": 20}}
    ]})");
  EXPECT_EQ(t.node(0).pcie, (LinkModel{0.0, 10.0}));
  EXPECT_EQ(t.node(1).device_count, 2);
  EXPECT_DOUBLE_EQ(t.node(1).device_speed, 7.0);
  const LinkModel l = t.inter_node_link(0, 1);
  EXPECT_EQ(l, t.inter_node_link(1, 0));
  EXPECT_DOUBLE_EQ(l.alpha, 0.5);
  EXPECT_DOUBLE_EQ(l.beta, 20.0);
}

TEST(Topology, MixedVendorNode) {
  EXPECT_EQ(error_of(R"({"nodes": [{"id": 0, "platform": ["cuda", "hip"]}]})").code(),
            Errc::kMixedVendorNode);
}

TEST(Topology, MissingFields) {
  EXPECT_EQ(error_of(R"({"nodes": [{"platform": "cuda"}]})").code(), Errc::kMissingField);
  EXPECT_EQ(error_of(R"({"defaults": {}})").code(), Errc::kMissingField);
}

TEST(Topology, ParseErrorsCarryLocation) {
  const Error unknown = error_of(R"({"nodes": [{"id": 0, "platform": "cuda", "gpus": 4}]})");
  EXPECT_EQ(unknown.code(), Errc::kParseError);
  ASSERT_FALSE(unknown.details().empty());
  EXPECT_EQ(unknown.details()[0], "/nodes/0/gpus");

  const Error syntax = error_of(R"({"nodes": [)");
  EXPECT_EQ(syntax.code(), Errc::kParseError);
  ASSERT_FALSE(syntax.details().empty());
  EXPECT_EQ(syntax.details()[0].rfind("byte ", 0), 0u);

  EXPECT_EQ(error_of(R"({"nodes": [{"id": 0, "platform": "cuda", "pcie": "gen9"}]})").code(),
            Errc::kParseError);
  EXPECT_EQ(error_of(R"({"nodes": [{"id": "zero", "platform": "cuda"}]})").code(),
            Errc::kParseError);
}

TEST(Topology, InvalidValues) {
  EXPECT_THROW(load_topology(R"({"nodes": [{"id": 0, "platform": "cuda", "devices": 0}]})"),
               Error);
  EXPECT_THROW(
      load_topology(R"({"nodes": [{"id": 0, "platform": "cuda", "pcie": {"alpha_s": 0, "beta_Bps": 0}}]})"),
      Error);
}

TEST(PathModel, RdmaIsMinOfSegments) {
  const ClusterTopology t({
      {0, Platform::kCuda, 1, 1.0, {0.0, 10.0}, NicSpec{{0.0, 20.0}}},
      {1, Platform::kHip, 1, 1.0, {0.0, 15.0}, NicSpec{{0.0, 20.0}}},
  });
  const PathModel m = path_model(t, {0, 0}, {1, 0}, PathKind::kRdma);
  EXPECT_DOUBLE_EQ(m(100.0), 10.0);
  EXPECT_DOUBLE_EQ(m.peak_bandwidth(), 10.0);
}

TEST(PathModel, StagedSumsThreeSegments) {
  const ClusterTopology t({
      {0, Platform::kCuda, 1, 1.0, {0.0, 10.0}, NicSpec{{0.0, 10.0}}},
      {1, Platform::kHip, 1, 1.0, {0.0, 10.0}, NicSpec{{0.0, 10.0}}},
  });
  const PathModel m = path_model(t, {0, 0}, {1, 0}, PathKind::kStaged);
  EXPECT_EQ(m.segments.size(), 3u);
  EXPECT_DOUBLE_EQ(m(100.0), 30.0);
}

TEST(PathModel, IntranodeAndErrors) {
  const ClusterTopology t = default_cluster();
  const PathModel m = path_model(t, {2, 0}, {2, 3}, PathKind::kIntranode);
  EXPECT_DOUBLE_EQ(m(4096.0), tiers::kPcieGen4.time(4096.0));
  EXPECT_THROW(path_model(t, {0, 0}, {1, 0}, PathKind::kIntranode), Error);
  EXPECT_THROW(path_model(t, {0, 0}, {0, 1}, PathKind::kRdma), Error);
  EXPECT_THROW(path_model(t, {0, 0}, {7, 0}, PathKind::kRdma), Error);

  const ClusterTopology no_nic = load_topology(
      R"({"defaults": {"nic": null}, "nodes": [{"id": 0, "platform": "cuda"}, {"id": 1, "platform": "hip"}]})");
  try {
    path_model(no_nic, {0, 0}, {1, 0}, PathKind::kRdma);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kNoRdmaPath);
  }
  const PathModel staged = path_model(no_nic, {0, 0}, {1, 0}, PathKind::kStaged);
  EXPECT_EQ(staged.segments[1], tiers::kHostEthernet);
}

TEST(PathModel, RdmaNeverSlowerThanStaged) {
  const ClusterTopology t = default_cluster();
  for (double s = 1.0; s <= 1 << 30; s *= 3.0) {
    for (int dst : {1, 2, 3}) {
      EXPECT_LE(path_model(t, {0, 0}, {dst, 0}, PathKind::kRdma)(s),
                path_model(t, {0, 0}, {dst, 0}, PathKind::kStaged)(s));
    }
  }
}

TEST(PathModel, RdmaBandwidthApproachesBottleneck) {
  const ClusterTopology t = default_cluster();
  const PathModel m = path_model(t, {0, 0}, {2, 0}, PathKind::kRdma);
  const double s = 1 << 30;
  EXPECT_NEAR(s / m(s), tiers::kPcieGen3.beta, 0.01 * tiers::kPcieGen3.beta);
}
