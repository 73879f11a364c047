// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "hetccl/error.hpp"
#include "hetccl/payload.hpp"
#include "oracle.hpp"

using namespace hetccl;
using testing_support::Runtime;

namespace {

// `a` CUDA devices then `b` HIP devices of the default cluster.
std::vector<DeviceId> mixture(const ClusterTopology& t, int a, int b) {
  const auto cuda = t.devices_of(Platform::kCuda);
  const auto hip = t.devices_of(Platform::kHip);
  std::vector<DeviceId> out(cuda.begin(), cuda.begin() + a);
  out.insert(out.end(), hip.begin(), hip.begin() + b);
  return out;
}

std::vector<DeviceBuffer> upload(Runtime& rt, const std::vector<DeviceId>& members,
                                 const std::vector<oracle::Bytes>& data) {
  std::vector<DeviceBuffer> out;
  for (std::size_t r = 0; r < members.size(); ++r) {
    out.push_back(rt.memory.alloc(members[r], data[r].size()));
    std::copy(data[r].begin(), data[r].end(), out.back().bytes().begin());
  }
  return out;
}

oracle::Bytes download(const DeviceBuffer& b) {
  return oracle::Bytes(b.bytes().begin(), b.bytes().end());
}

std::vector<oracle::Bytes> oracle_for(const CollectiveSpec& s,
                                      const std::vector<oracle::Bytes>& in) {
  const auto op = static_cast<oracle::Op>(s.op);
  const auto c = static_cast<oracle::Combine>(s.combiner.value_or(ReduceOp::kSum));
  const int root = s.root.value_or(0);
  switch (s.dtype) {
    case DataType::kF32: return oracle::collective<float>(op, c, root, in);
    case DataType::kF64: return oracle::collective<double>(op, c, root, in);
    case DataType::kI32: return oracle::collective<std::int32_t>(op, c, root, in);
  }
  return {};
}

std::vector<oracle::Bytes> random_inputs(std::mt19937_64& rng, DataType dtype, int world,
                                         std::size_t count) {
  std::uniform_real_distribution<double> real(-100.0, 100.0);
  std::vector<oracle::Bytes> in(static_cast<std::size_t>(world),
                                oracle::Bytes(count * dtype_size(dtype)));
  for (auto& p : in) {
    for (std::size_t i = 0; i < count; ++i) {
      switch (dtype) {
        case DataType::kF32: oracle::store(p, i, static_cast<float>(real(rng))); break;
        case DataType::kF64: oracle::store(p, i, real(rng)); break;
        case DataType::kI32: oracle::store(p, i, static_cast<std::int32_t>(rng())); break;
      }
    }
  }
  return in;
}

struct Mix {
  int a;
  int b;
};

}  // namespace

std::string case_name(const ::testing::TestParamInfo<std::tuple<CollectiveOp, Mix>>& info) {
  const Mix mix = std::get<1>(info.param);
  return std::string(to_string(std::get<0>(info.param))) + "_" + std::to_string(mix.a) + "a" +
         std::to_string(mix.b) + "b";
}

class CollectiveOracle : public ::testing::TestWithParam<std::tuple<CollectiveOp, Mix>> {};

TEST_P(CollectiveOracle, MatchesBruteForce) {
  const auto [op, mix] = GetParam();
  const ClusterTopology topology = default_cluster();
  const auto members = mixture(topology, mix.a, mix.b);
  const int world = static_cast<int>(members.size());
  std::mt19937_64 rng(static_cast<std::uint64_t>(op) * 131 + static_cast<std::uint64_t>(world));
  for (int trial = 0; trial < 40; ++trial) {
    CollectiveSpec spec{op, static_cast<DataType>(rng() % 3), std::nullopt, std::nullopt};
    if (is_reducing(op)) spec.combiner = static_cast<ReduceOp>(rng() % 3);
    if (is_rooted(op)) spec.root = static_cast<int>(rng() % static_cast<unsigned>(world));
    const std::size_t count = static_cast<std::size_t>(world) * (1 + rng() % 8);
    const auto in = random_inputs(rng, spec.dtype, world, count);

    Runtime rt(topology);
    Communicator comm = Communicator::create(topology, members);
    const auto send = upload(rt, members, in);
    const CollectiveResult got = rt.collectives.run(comm, spec, send);
    const auto want = oracle_for(spec, in);
    ASSERT_EQ(got.outputs.size(), want.size());
    for (int r = 0; r < world; ++r) {
      ASSERT_EQ(download(got.outputs[static_cast<std::size_t>(r)]),
                want[static_cast<std::size_t>(r)])
          << to_string(op) << " rank " << r << " trial " << trial;
      EXPECT_EQ(got.outputs[static_cast<std::size_t>(r)].platform(),
                comm.rank(r).platform());
    }
  }
}

INSTANTIATE_TEST_SUITE_P(
    AllOpsAndMixtures, CollectiveOracle,
    ::testing::Combine(::testing::ValuesIn(kAllCollectiveOps),
                       ::testing::Values(Mix{2, 0}, Mix{0, 4}, Mix{8, 0}, Mix{1, 1},
                                         Mix{4, 4}, Mix{4, 8}, Mix{8, 8}, Mix{3, 5})),
    case_name);

TEST(Collectives, SpecExamples) {
  const ClusterTopology topology = default_cluster();
  Runtime rt(topology);
  auto run = [&](const std::vector<DeviceId>& m, CollectiveSpec s,
                 const std::vector<std::vector<std::int32_t>>& in) {
    std::vector<oracle::Bytes> bytes;
    for (const auto& v : in) bytes.push_back(encode<std::int32_t>(v));
    Communicator comm = Communicator::create(topology, m);
    const auto res = rt.collectives.run(comm, s, upload(rt, m, bytes));
    std::vector<std::vector<std::int32_t>> out;
    for (const auto& b : res.outputs) out.push_back(decode<std::int32_t>(b.bytes()));
    return out;
  };
  const auto two = mixture(topology, 1, 1);
  using V = std::vector<std::vector<std::int32_t>>;
  EXPECT_EQ(run(two, {CollectiveOp::kAllReduce, DataType::kI32, ReduceOp::kSum, {}},
                {{1, 2}, {10, 20}}),
            (V{{11, 22}, {11, 22}}));
  EXPECT_EQ(run(two, {CollectiveOp::kReduceScatter, DataType::kI32, ReduceOp::kSum, {}},
                {{1, 2}, {10, 20}}),
            (V{{11}, {22}}));
  EXPECT_EQ(run(two, {CollectiveOp::kAllGather, DataType::kI32, {}, {}}, {{1}, {2}}),
            (V{{1, 2}, {1, 2}}));
  const auto four = mixture(topology, 2, 2);
  EXPECT_EQ(run(four, {CollectiveOp::kBroadcast, DataType::kI32, {}, 0},
                {{7, 7}, {0, 0}, {1, 1}, {2, 2}}),
            (V{{7, 7}, {7, 7}, {7, 7}, {7, 7}}));
  const auto reduced = run(four, {CollectiveOp::kReduce, DataType::kI32, ReduceOp::kSum, 2},
                           {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  EXPECT_EQ(reduced[2], (std::vector<std::int32_t>{1, 1, 1, 1}));
  const auto three = mixture(topology, 2, 1);
  // Block (i, j) encoded as 10*i + j.
  EXPECT_EQ(run(three, {CollectiveOp::kAllToAll, DataType::kI32, {}, {}},
                {{0, 1, 2}, {10, 11, 12}, {20, 21, 22}}),
            (V{{0, 10, 20}, {1, 11, 21}, {2, 12, 22}}));
}

TEST(Collectives, BackendCollective) {
  const ClusterTopology topology = default_cluster();
  Runtime rt(topology);
  std::vector<DeviceBuffer> bufs;
  for (int r = 0; r < 4; ++r) {
    bufs.push_back(rt.memory.alloc(DeviceId{0, r}, 16));
    const std::vector<std::int32_t> v(4, r);
    const auto b = encode<std::int32_t>(v);
    std::copy(b.begin(), b.end(), bufs.back().bytes().begin());
  }
  const BackendResult res = rt.collectives.backend_collective(
      {CollectiveOp::kAllReduce, DataType::kI32, ReduceOp::kSum, {}}, bufs);
  for (const auto& o : res.outputs) {
    EXPECT_EQ(decode<std::int32_t>(o.bytes()), (std::vector<std::int32_t>{6, 6, 6, 6}));
  }
  EXPECT_DOUBLE_EQ(res.duration, oracle::ring_all_reduce(4, 16.0, tiers::kPcieGen3.alpha,
                                                         tiers::kPcieGen3.beta));

  std::vector<DeviceBuffer> one;
  one.push_back(rt.memory.alloc(DeviceId{0, 0}, 8));
  EXPECT_EQ(rt.collectives
                .backend_collective({CollectiveOp::kAllReduce, DataType::kF32, ReduceOp::kMax, {}},
                                    one)
                .duration,
            0.0);

  std::vector<DeviceBuffer> mixed;
  mixed.push_back(rt.memory.alloc(DeviceId{0, 0}, 8));
  mixed.push_back(rt.memory.alloc(DeviceId{2, 0}, 8));
  try {
    rt.collectives.backend_collective(
        {CollectiveOp::kAllReduce, DataType::kF32, ReduceOp::kSum, {}}, mixed);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kMixedGroup);
  }
}

TEST(Collectives, HomogeneousGroupDelegatesOnce) {
  const ClusterTopology topology = default_cluster();
  for (CollectiveOp op : kAllCollectiveOps) {
    Runtime rt(topology);
    const std::vector<DeviceId> m{{2, 0}, {2, 1}, {2, 2}, {2, 3}};
    Communicator comm = Communicator::create(topology, m);
    std::mt19937_64 rng(5);
    const auto in = random_inputs(rng, DataType::kF32, 4, 8);
    CollectiveSpec spec{op, DataType::kF32, std::nullopt, std::nullopt};
    if (is_reducing(op)) spec.combiner = ReduceOp::kSum;
    if (is_rooted(op)) spec.root = 1;
    rt.collectives.run(comm, spec, upload(rt, m, in));
    EXPECT_EQ(rt.collectives.backend_calls(), 1u) << to_string(op);
    EXPECT_EQ(rt.transport.transfer_count(), 0u) << to_string(op);
  }
}

TEST(Collectives, MixedGroupsUseTransport) {
  const ClusterTopology topology = default_cluster();
  Runtime rt(topology);
  Communicator comm = Communicator::create(topology, mixture(topology, 4, 4));
  rt.collectives.simulate(comm, CollectiveOp::kAllReduce, 1 << 20);
  EXPECT_GT(rt.transport.transfer_count(), 0u);
  EXPECT_EQ(rt.collectives.backend_calls(), 4u);
}

TEST(Collectives, Errors) {
  const ClusterTopology topology = default_cluster();
  Runtime rt(topology);
  const auto m = mixture(topology, 1, 1);
  Communicator comm = Communicator::create(topology, m);
  auto code = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::kInvalidArgument;
  };
  const auto uneven = upload(rt, m, {oracle::Bytes(8), oracle::Bytes(12)});
  EXPECT_EQ(code([&] { rt.collectives.all_reduce(comm, uneven, DataType::kF32, ReduceOp::kSum); }),
            Errc::kLengthMismatch);
  const auto odd = upload(rt, m, {oracle::Bytes(12), oracle::Bytes(12)});
  EXPECT_EQ(code([&] {
              rt.collectives.reduce_scatter(comm, odd, DataType::kF32, ReduceOp::kSum);
            }),
            Errc::kLengthMismatch);
  EXPECT_EQ(code([&] { rt.collectives.all_to_all(comm, odd, DataType::kF32); }),
            Errc::kLengthMismatch);
  const auto ok = upload(rt, m, {oracle::Bytes(8), oracle::Bytes(8)});
  EXPECT_EQ(code([&] { rt.collectives.broadcast(comm, ok, DataType::kF32, 2); }),
            Errc::kInvalidRoot);
  EXPECT_EQ(code([&] { rt.collectives.reduce(comm, ok, DataType::kF32, ReduceOp::kSum, -1); }),
            Errc::kInvalidRoot);
  EXPECT_EQ(code([&] {
              rt.collectives.run(comm, {CollectiveOp::kAllReduce, DataType::kF32, {}, {}}, ok);
            }),
            Errc::kInvalidArgument);
}

TEST(RingTime, Examples) {
  EXPECT_EQ(ring_time(1, 1e9, {1.0, 1.0}, CollectiveOp::kAllReduce), 0.0);
  EXPECT_DOUBLE_EQ(ring_time(4, 4096, {0.0, 1024.0}, CollectiveOp::kAllReduce), 6.0);
  EXPECT_DOUBLE_EQ(ring_time(2, 2048, {1.0, 1024.0}, CollectiveOp::kAllGather), 2.0);
  EXPECT_DOUBLE_EQ(ring_time(3, 3000, {0.0, 1000.0}, CollectiveOp::kAllToAll), 2.0);
  // Broadcast up to one pipeline chunk: (n-1)(alpha + S/beta).
  EXPECT_DOUBLE_EQ(ring_time(5, 1000, {0.5, 1000.0}, CollectiveOp::kBroadcast), 6.0);
  // Four chunks over a chain of 3: (2 + 3) steps of one chunk each.
  const double s = 4 * kPipelineChunkBytes;
  EXPECT_DOUBLE_EQ(ring_time(3, s, {0.0, kPipelineChunkBytes}, CollectiveOp::kReduce), 5.0);
}

TEST(RingTime, SingleGroupMatchesAnalyticFormula) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const double s = std::exp2(10.0 + static_cast<double>(rng() % 20));
    const ClusterTopology t = default_cluster();
    Runtime rt(t);
    std::vector<DeviceId> m;
    for (int d = 0; d < n; ++d) m.push_back({3, d});
    Communicator comm = Communicator::create(t, m);
    const CollectiveReport rep = rt.collectives.simulate(comm, CollectiveOp::kAllReduce, s);
    EXPECT_NEAR(rep.completion_time,
                oracle::ring_all_reduce(n, s, tiers::kPcieGen4.alpha, tiers::kPcieGen4.beta),
                1e-9);
  }
}

TEST(Collectives, BandwidthEqualsBytesOverTime) {
  const ClusterTopology t = default_cluster();
  for (CollectiveOp op : kAllCollectiveOps) {
    Runtime rt(t);
    Communicator comm = Communicator::create(t, mixture(t, 4, 8));
    const CollectiveReport r = rt.collectives.simulate(comm, op, 1 << 24);
    EXPECT_EQ(r.algbw, r.bytes / r.completion_time);
    EXPECT_EQ(r.busbw, r.algbw * bus_bandwidth_factor(op, 12));
    Seconds sum = 0.0;
    for (const PhaseTiming& p : r.phases) sum += p.duration;
    EXPECT_NEAR(sum, r.completion_time, 1e-12);
  }
}

// 4+4 all_reduce over nodes 0 and 2, recomputed from the link tiers: local
// reduce_scatter and all_gather bound by the gen3 group, one cross step in
// each direction with four serialized S/8 flows per NIC.
TEST(Collectives, HierarchicalTimingRecomputed) {
  const ClusterTopology t = default_cluster();
  Runtime rt(t);
  Communicator comm = Communicator::create(t, mixture(t, 4, 4));
  const double s = 64.0 * (1 << 20);
  const CollectiveReport r = rt.collectives.simulate(comm, CollectiveOp::kAllReduce, s);
  const double local = 3.0 * (tiers::kPcieGen3.alpha + (s / 4) / tiers::kPcieGen3.beta);
  const double flow = (tiers::kPcieGen3.alpha + tiers::kNicHdr.alpha + tiers::kPcieGen4.alpha) +
                      (s / 8) / tiers::kPcieGen3.beta;
  EXPECT_NEAR(r.completion_time, 2 * local + 2 * 4 * flow, 1e-9);
}

TEST(Collectives, WorldOfOneIsDegenerate) {
  const ClusterTopology t = default_cluster();
  Runtime rt(t);
  const std::vector<DeviceId> m{{0, 0}};
  Communicator comm = Communicator::create(t, m);
  const auto in = upload(rt, m, {oracle::Bytes(16, std::byte{3})});
  const auto res = rt.collectives.all_gather(comm, in, DataType::kI32);
  EXPECT_TRUE(res.report.degenerate());
  EXPECT_EQ(res.report.algbw, 0.0);
  EXPECT_EQ(download(res.outputs[0]), oracle::Bytes(16, std::byte{3}));
}

TEST(Collectives, HetNotFasterThanFasterHomo) {
  const ClusterTopology t = default_cluster();
  for (CollectiveOp op : kAllCollectiveOps) {
    for (double s = 1024; s <= (1 << 30); s *= 8) {
      auto time = [&](const std::vector<DeviceId>& m) {
        Runtime rt(t);
        Communicator comm = Communicator::create(t, m);
        return rt.collectives.simulate(comm, op, s, 0).completion_time;
      };
      const auto cuda = t.devices_of(Platform::kCuda);
      const auto hip = t.devices_of(Platform::kHip);
      const double faster = std::min(time(cuda), time(hip));
      EXPECT_GE(time(mixture(t, 4, 4)), faster) << to_string(op) << " " << s;
    }
  }
}

TEST(Communicator, GroupsPartitionRanks) {
  const ClusterTopology t = default_cluster();
  const std::vector<DeviceId> m{{2, 0}, {0, 1}, {2, 1}, {0, 0}, {3, 0}};
  const Communicator comm = Communicator::create(t, m);
  ASSERT_EQ(comm.groups().size(), 3u);
  EXPECT_EQ(comm.groups()[0].ranks, (std::vector<int>{0, 2}));
  EXPECT_EQ(comm.groups()[1].ranks, (std::vector<int>{1, 3}));
  EXPECT_EQ(comm.groups()[2].platform, Platform::kHip);
  EXPECT_EQ(comm.group_of(3), 1);
  EXPECT_FALSE(comm.single_group());
  const std::vector<DeviceId> dup{{0, 0}, {0, 0}};
  EXPECT_THROW(Communicator::create(t, dup), Error);
  EXPECT_THROW(Communicator::create(t, {}), Error);
}
