// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <string>

#include "hetccl/collectives.hpp"
#include "hetccl/error.hpp"

namespace hetccl {

std::string_view to_string(CollectiveOp op) {
  switch (op) {
    case CollectiveOp::kAllReduce: return "all_reduce";
    case CollectiveOp::kAllGather: return "all_gather";
    case CollectiveOp::kReduceScatter: return "reduce_scatter";
    case CollectiveOp::kReduce: return "reduce";
    case CollectiveOp::kBroadcast: return "broadcast";
    case CollectiveOp::kAllToAll: return "all_to_all";
  }
  return "unknown";
}

CollectiveOp parse_collective_op(std::string_view name) {
  for (CollectiveOp op : kAllCollectiveOps) {
    if (to_string(op) == name) return op;
  }
  throw Error(Errc::kParseError, "unknown collective '" + std::string(name) + "'");
}

bool is_reducing(CollectiveOp op) {
  return op == CollectiveOp::kAllReduce || op == CollectiveOp::kReduceScatter ||
         op == CollectiveOp::kReduce;
}

bool is_rooted(CollectiveOp op) {
  return op == CollectiveOp::kReduce || op == CollectiveOp::kBroadcast;
}

void CollectiveSpec::validate(int world_size) const {
  if (is_reducing(op) != combiner.has_value()) {
    throw Error(Errc::kInvalidArgument,
                std::string(to_string(op)) +
                    (combiner ? " takes no combiner" : " needs a combiner"));
  }
  if (is_rooted(op) != root.has_value()) {
    throw Error(Errc::kInvalidArgument,
                std::string(to_string(op)) + (root ? " takes no root" : " needs a root"));
  }
  if (root && (*root < 0 || *root >= world_size)) {
    throw Error(Errc::kInvalidRoot, "root " + std::to_string(*root) +
                                        " outside world of " + std::to_string(world_size));
  }
}

Seconds ring_time(int n_ranks, double size_bytes, const LinkModel& link,
                  CollectiveOp op) {
  if (n_ranks < 1) throw Error(Errc::kInvalidArgument, "ring of no ranks");
  if (n_ranks == 1) return 0.0;
  const double n = n_ranks;
  const double steps = n - 1.0;
  switch (op) {
    case CollectiveOp::kAllReduce:
      return 2.0 * steps * link.time(size_bytes / n);
    case CollectiveOp::kAllGather:
    case CollectiveOp::kReduceScatter:
    case CollectiveOp::kAllToAll:
      return steps * link.time(size_bytes / n);
    case CollectiveOp::kBroadcast:
    case CollectiveOp::kReduce: {
      const double chunks = std::max(1.0, std::ceil(size_bytes / kPipelineChunkBytes));
      return (steps + chunks - 1.0) * link.time(size_bytes / chunks);
    }
  }
  return 0.0;
}

double bus_bandwidth_factor(CollectiveOp op, int n_ranks) {
  const double n = n_ranks;
  switch (op) {
    case CollectiveOp::kAllReduce: return 2.0 * (n - 1.0) / n;
    case CollectiveOp::kAllGather:
    case CollectiveOp::kReduceScatter:
    case CollectiveOp::kAllToAll: return (n - 1.0) / n;
    case CollectiveOp::kBroadcast:
    case CollectiveOp::kReduce: return 1.0;
  }
  return 1.0;
}

double collective_size_bytes(CollectiveOp op, double send_bytes, int world_size) {
  return op == CollectiveOp::kAllGather ? send_bytes * world_size : send_bytes;
}

}  // namespace hetccl
