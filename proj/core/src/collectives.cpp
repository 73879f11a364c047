// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "hetccl/collectives.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "data_plane.hpp"
#include "hetccl/error.hpp"

namespace hetccl {

namespace {

std::string phase_name(std::string_view scope, CollectiveOp op) {
  return std::string(scope) + "_" + std::string(to_string(op));
}

int leader_of(const VendorGroup& g, int root) {
  return std::find(g.ranks.begin(), g.ranks.end(), root) != g.ranks.end() ? root
                                                                           : g.ranks.front();
}

int mod(int a, int n) { return ((a % n) + n) % n; }

// Pipelined chain along `order` (group indices): S split into m chunks, link i
// forwards chunk s - i at step s.
std::vector<std::vector<Flow>> chain_steps(const Communicator& comm,
                                           const std::vector<int>& order, double size,
                                           int root) {
  const int chunks =
      std::max(1, static_cast<int>(std::ceil(size / kPipelineChunkBytes)));
  const double piece = size / chunks;
  const int links = static_cast<int>(order.size()) - 1;
  std::vector<std::vector<Flow>> steps;
  for (int s = 0; s < links + chunks - 1; ++s) {
    std::vector<Flow> flows;
    for (int i = 0; i < links; ++i) {
      if (s - i < 0 || s - i >= chunks) continue;
      const auto& from = comm.groups()[static_cast<std::size_t>(order[i])];
      const auto& to = comm.groups()[static_cast<std::size_t>(order[i + 1])];
      flows.push_back({static_cast<std::size_t>(leader_of(from, root)),
                       static_cast<std::size_t>(leader_of(to, root)), piece});
    }
    steps.push_back(std::move(flows));
  }
  return steps;
}

}  // namespace

BackendResult Collectives::backend_collective(const CollectiveSpec& spec,
                                              std::span<const DeviceBuffer> buffers) {
  if (buffers.empty()) throw Error(Errc::kInvalidArgument, "collective over no buffers");
  const Platform platform = buffers.front().platform();
  const int node = buffers.front().node();
  for (const DeviceBuffer& b : buffers) {
    if (b.platform() != platform || b.node() != node) {
      throw Error(Errc::kMixedGroup,
                  "backend collective spans more than one platform or node");
    }
  }
  const int n = static_cast<int>(buffers.size());
  spec.validate(n);

  std::vector<detail::RankInput> inputs;
  inputs.reserve(buffers.size());
  for (const DeviceBuffer& b : buffers) inputs.push_back({platform, b.bytes()});
  auto payloads = detail::execute(*registry_, spec, inputs);

  BackendResult result;
  for (auto& p : payloads) {
    DeviceBuffer out = memory_->alloc(platform, node, p.size());
    std::copy(p.begin(), p.end(), out.bytes().begin());
    result.outputs.push_back(std::move(out));
  }
  const double size =
      collective_size_bytes(spec.op, static_cast<double>(buffers.front().size()), n);
  result.duration = ring_time(n, size, memory_->topology().node(node).pcie, spec.op);
  backend_calls_.fetch_add(1);
  return result;
}

CollectiveResult Collectives::run(Communicator& comm, const CollectiveSpec& spec,
                                  std::span<const DeviceBuffer> send) {
  const int world = comm.world_size();
  if (static_cast<int>(send.size()) != world) {
    throw Error(Errc::kInvalidArgument, std::to_string(send.size()) +
                                            " send buffers for " + std::to_string(world) +
                                            " ranks");
  }
  for (int r = 0; r < world; ++r) {
    const Endpoint& ep = comm.rank(r);
    const DeviceBuffer& b = send[static_cast<std::size_t>(r)];
    if (b.node() != ep.node() || b.platform() != ep.platform()) {
      throw Error(Errc::kInvalidArgument,
                  "send buffer of rank " + std::to_string(r) + " is not on its device");
    }
  }
  spec.validate(world);
  const double size = collective_size_bytes(
      spec.op, static_cast<double>(send.front().size()), world);

  CollectiveResult result;
  if (comm.single_group()) {
    const Seconds start = comm.barrier();
    BackendResult b = backend_collective(spec, send);
    for (Endpoint& e : comm.endpoints()) e.advance_to(start + b.duration);
    result.outputs = std::move(b.outputs);
    result.report.op = spec.op;
    result.report.world_size = world;
    result.report.bytes = size;
    result.report.completion_time = b.duration;
    result.report.phases.push_back({"backend_" + std::string(to_string(spec.op)),
                                    b.duration});
  } else {
    std::vector<detail::RankInput> inputs;
    inputs.reserve(send.size());
    for (int r = 0; r < world; ++r) {
      inputs.push_back({comm.rank(r).platform(), send[static_cast<std::size_t>(r)].bytes()});
    }
    auto payloads = detail::execute(*registry_, spec, inputs);
    for (int r = 0; r < world; ++r) {
      auto& p = payloads[static_cast<std::size_t>(r)];
      DeviceBuffer out = memory_->alloc(comm.rank(r).device_id(), p.size());
      std::copy(p.begin(), p.end(), out.bytes().begin());
      result.outputs.push_back(std::move(out));
    }
    result.report = schedule(comm, spec.op, size, spec.root.value_or(0));
  }
  const auto& rep = result.report;
  if (!rep.degenerate()) {
    result.report.algbw = rep.bytes / rep.completion_time;
    result.report.busbw = rep.algbw * bus_bandwidth_factor(rep.op, world);
  }
  return result;
}

CollectiveReport Collectives::simulate(Communicator& comm, CollectiveOp op,
                                       double size_bytes, int root) {
  const int world = comm.world_size();
  if (is_rooted(op) && (root < 0 || root >= world)) {
    throw Error(Errc::kInvalidRoot, "root " + std::to_string(root) + " outside world of " +
                                        std::to_string(world));
  }
  CollectiveReport rep;
  if (comm.single_group()) {
    const Seconds start = comm.barrier();
    const Seconds t = ring_time(world, size_bytes, comm.groups().front().link, op);
    for (Endpoint& e : comm.endpoints()) e.advance_to(start + t);
    backend_calls_.fetch_add(1);
    rep.op = op;
    rep.world_size = world;
    rep.bytes = size_bytes;
    rep.completion_time = t;
    rep.phases.push_back({"backend_" + std::string(to_string(op)), t});
  } else {
    rep = schedule(comm, op, size_bytes, root);
  }
  if (!rep.degenerate()) {
    rep.algbw = rep.bytes / rep.completion_time;
    rep.busbw = rep.algbw * bus_bandwidth_factor(op, world);
  }
  return rep;
}

Seconds Collectives::local_phase(Communicator& comm, CollectiveOp op,
                                 std::span<const double> group_bytes) {
  const Seconds start = comm.barrier();
  const auto& groups = comm.groups();
  for (std::size_t k = 0; k < groups.size(); ++k) {
    const auto& g = groups[k];
    const Seconds t =
        ring_time(static_cast<int>(g.ranks.size()), group_bytes[k], g.link, op);
    for (int r : g.ranks) comm.endpoints()[static_cast<std::size_t>(r)].advance_to(start + t);
    backend_calls_.fetch_add(1);
  }
  return comm.barrier() - start;
}

Seconds Collectives::run_steps(Communicator& comm,
                               const std::vector<std::vector<Flow>>& steps) {
  const Seconds start = comm.barrier();
  for (const auto& flows : steps) {
    if (flows.empty()) continue;
    transport_->exchange(comm.endpoints(), flows, options_.prefer_rdma);
    comm.barrier();
  }
  return comm.max_clock() - start;
}

CollectiveReport Collectives::schedule(Communicator& comm, CollectiveOp op,
                                       double size_bytes, int root) {
  const auto& groups = comm.groups();
  const int world = comm.world_size();
  const int ngroups = static_cast<int>(groups.size());
  int lanes = 0;
  for (const auto& g : groups) lanes = std::max(lanes, static_cast<int>(g.ranks.size()));

  auto group_size = [&](int k) {
    return static_cast<double>(groups[static_cast<std::size_t>(k)].ranks.size());
  };
  auto participant = [&](int k, int lane) {
    const auto& r = groups[static_cast<std::size_t>(k)].ranks;
    return static_cast<std::size_t>(r[static_cast<std::size_t>(lane) % r.size()]);
  };
  auto lane_chunk = [&](int c) { return size_bytes * group_size(c) / (world * lanes); };

  // Ring over groups; step t moves chunk chunk_of(k, t) from group k to k+1.
  auto ring = [&](auto chunk_of) {
    std::vector<std::vector<Flow>> steps;
    for (int t = 0; t < ngroups - 1; ++t) {
      std::vector<Flow> flows;
      for (int lane = 0; lane < lanes; ++lane) {
        for (int k = 0; k < ngroups; ++k) {
          flows.push_back({participant(k, lane), participant((k + 1) % ngroups, lane),
                           lane_chunk(chunk_of(k, t))});
        }
      }
      steps.push_back(std::move(flows));
    }
    return steps;
  };
  auto rs_ring = [&] { return ring([&](int k, int t) { return mod(k - t - 1, ngroups); }); };
  auto ag_ring = [&] { return ring([&](int k, int t) { return mod(k - t, ngroups); }); };

  std::vector<double> full(groups.size(), size_bytes);

  CollectiveReport rep;
  rep.op = op;
  rep.world_size = world;
  rep.bytes = size_bytes;
  const Seconds start = comm.barrier();
  auto local = [&](CollectiveOp lop, std::span<const double> bytes) {
    rep.phases.push_back({phase_name("local", lop), local_phase(comm, lop, bytes)});
  };
  auto cross = [&](CollectiveOp cop, const std::vector<std::vector<Flow>>& steps) {
    rep.phases.push_back({phase_name("cross", cop), run_steps(comm, steps)});
  };

  switch (op) {
    case CollectiveOp::kAllReduce:
      local(CollectiveOp::kReduceScatter, full);
      cross(CollectiveOp::kReduceScatter, rs_ring());
      cross(CollectiveOp::kAllGather, ag_ring());
      local(CollectiveOp::kAllGather, full);
      break;
    case CollectiveOp::kReduceScatter:
      local(CollectiveOp::kReduceScatter, full);
      cross(CollectiveOp::kReduceScatter, rs_ring());
      break;
    case CollectiveOp::kAllGather:
      cross(CollectiveOp::kAllGather, ag_ring());
      local(CollectiveOp::kAllGather, full);
      break;
    case CollectiveOp::kAllToAll: {
      std::vector<double> own(groups.size());
      for (int k = 0; k < ngroups; ++k) own[static_cast<std::size_t>(k)] = size_bytes * group_size(k) / world;
      local(CollectiveOp::kAllToAll, own);
      std::vector<std::vector<Flow>> steps;
      for (int t = 0; t < ngroups - 1; ++t) {
        std::vector<Flow> flows;
        for (int k = 0; k < ngroups; ++k) {
          const auto& to = groups[static_cast<std::size_t>((k + t + 1) % ngroups)].ranks;
          for (int src : groups[static_cast<std::size_t>(k)].ranks) {
            for (int dst : to) {
              flows.push_back({static_cast<std::size_t>(src), static_cast<std::size_t>(dst),
                               size_bytes / world});
            }
          }
        }
        steps.push_back(std::move(flows));
      }
      cross(CollectiveOp::kAllToAll, steps);
      break;
    }
    case CollectiveOp::kBroadcast: {
      const int kr = comm.group_of(root);
      std::vector<int> order;
      for (int i = 0; i < ngroups; ++i) order.push_back((kr + i) % ngroups);
      cross(CollectiveOp::kBroadcast, chain_steps(comm, order, size_bytes, root));
      local(CollectiveOp::kBroadcast, full);
      break;
    }
    case CollectiveOp::kReduce: {
      const int kr = comm.group_of(root);
      local(CollectiveOp::kReduce, full);
      std::vector<int> order;
      for (int i = 1; i <= ngroups; ++i) order.push_back((kr + i) % ngroups);
      cross(CollectiveOp::kReduce, chain_steps(comm, order, size_bytes, root));
      break;
    }
  }
  rep.completion_time = comm.max_clock() - start;
  return rep;
}

CollectiveResult Collectives::all_reduce(Communicator& comm,
                                         std::span<const DeviceBuffer> send,
                                         DataType dtype, ReduceOp op) {
  return run(comm, {CollectiveOp::kAllReduce, dtype, op, std::nullopt}, send);
}

CollectiveResult Collectives::all_gather(Communicator& comm,
                                         std::span<const DeviceBuffer> send,
                                         DataType dtype) {
  return run(comm, {CollectiveOp::kAllGather, dtype, std::nullopt, std::nullopt}, send);
}

CollectiveResult Collectives::reduce_scatter(Communicator& comm,
                                             std::span<const DeviceBuffer> send,
                                             DataType dtype, ReduceOp op) {
  return run(comm, {CollectiveOp::kReduceScatter, dtype, op, std::nullopt}, send);
}

CollectiveResult Collectives::reduce(Communicator& comm, std::span<const DeviceBuffer> send,
                                     DataType dtype, ReduceOp op, int root) {
  return run(comm, {CollectiveOp::kReduce, dtype, op, root}, send);
}

CollectiveResult Collectives::broadcast(Communicator& comm,
                                        std::span<const DeviceBuffer> send,
                                        DataType dtype, int root) {
  return run(comm, {CollectiveOp::kBroadcast, dtype, std::nullopt, root}, send);
}

CollectiveResult Collectives::all_to_all(Communicator& comm,
                                         std::span<const DeviceBuffer> send,
                                         DataType dtype) {
  return run(comm, {CollectiveOp::kAllToAll, dtype, std::nullopt, std::nullopt}, send);
}

}  // namespace hetccl
