// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "data_plane.hpp"

#include <map>
#include <string>

#include "hetccl/error.hpp"

namespace hetccl::detail {

namespace {

using Payload = std::vector<std::byte>;

// acc = in[0][off, off+len) (+) in[1][...] (+) ... in ascending rank order.
Payload fold(const PlatformRegistry& registry, Platform platform, ReduceOp op,
             DataType dtype, std::span<const RankInput> inputs, std::size_t off,
             std::size_t len) {
  Payload acc(inputs[0].bytes.begin() + off, inputs[0].bytes.begin() + off + len);
  for (std::size_t r = 1; r < inputs.size(); ++r) {
    registry.launch_reduce(platform, op, dtype, acc, inputs[r].bytes.subspan(off, len));
  }
  return acc;
}

std::size_t common_length(std::span<const RankInput> inputs, std::size_t width) {
  const std::size_t len = inputs[0].bytes.size();
  for (const RankInput& in : inputs) {
    if (in.bytes.size() != len) {
      throw Error(Errc::kLengthMismatch, "ranks contribute different lengths");
    }
  }
  if (len == 0 || len % width != 0) {
    throw Error(Errc::kLengthMismatch,
                std::to_string(len) + " bytes is not a whole, nonzero element count");
  }
  return len;
}

}  // namespace

std::vector<Payload> execute(const PlatformRegistry& registry,
                             const CollectiveSpec& spec,
                             std::span<const RankInput> inputs) {
  const std::size_t world = inputs.size();
  if (world == 0) throw Error(Errc::kInvalidArgument, "collective over no ranks");
  spec.validate(static_cast<int>(world));
  const std::size_t width = dtype_size(spec.dtype);
  const std::size_t len = common_length(inputs, width);
  const std::size_t count = len / width;

  std::vector<Payload> out(world);
  switch (spec.op) {
    case CollectiveOp::kAllReduce: {
      std::map<Platform, Payload> per_platform;
      for (std::size_t r = 0; r < world; ++r) {
        auto it = per_platform.find(inputs[r].platform);
        if (it == per_platform.end()) {
          it = per_platform
                   .emplace(inputs[r].platform,
                            fold(registry, inputs[r].platform, *spec.combiner,
                                 spec.dtype, inputs, 0, len))
                   .first;
        }
        out[r] = it->second;
      }
      break;
    }
    case CollectiveOp::kReduceScatter: {
      if (count % world != 0) {
        throw Error(Errc::kLengthMismatch,
                    std::to_string(count) + " elements do not split over " +
                        std::to_string(world) + " ranks");
      }
      const std::size_t shard = len / world;
      for (std::size_t r = 0; r < world; ++r) {
        out[r] = fold(registry, inputs[r].platform, *spec.combiner, spec.dtype, inputs,
                      r * shard, shard);
      }
      break;
    }
    case CollectiveOp::kReduce: {
      const std::size_t root = static_cast<std::size_t>(*spec.root);
      for (std::size_t r = 0; r < world; ++r) {
        if (r == root) {
          out[r] = fold(registry, inputs[r].platform, *spec.combiner, spec.dtype, inputs,
                        0, len);
        } else {
          out[r].assign(inputs[r].bytes.begin(), inputs[r].bytes.end());
        }
      }
      break;
    }
    case CollectiveOp::kAllGather: {
      Payload all;
      all.reserve(len * world);
      for (const RankInput& in : inputs) all.insert(all.end(), in.bytes.begin(), in.bytes.end());
      for (auto& o : out) o = all;
      break;
    }
    case CollectiveOp::kBroadcast: {
      const auto& src = inputs[static_cast<std::size_t>(*spec.root)].bytes;
      for (auto& o : out) o.assign(src.begin(), src.end());
      break;
    }
    case CollectiveOp::kAllToAll: {
      if (count % world != 0) {
        throw Error(Errc::kLengthMismatch,
                    std::to_string(count) + " elements do not split into " +
                        std::to_string(world) + " blocks");
      }
      const std::size_t block = len / world;
      for (std::size_t i = 0; i < world; ++i) {
        out[i].reserve(len);
        for (std::size_t j = 0; j < world; ++j) {
          auto b = inputs[j].bytes.subspan(i * block, block);
          out[i].insert(out[i].end(), b.begin(), b.end());
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace hetccl::detail
