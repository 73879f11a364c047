// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hetccl/collectives.hpp"
#include "hetccl/platform_registry.hpp"

namespace hetccl::detail {

struct RankInput {
  Platform platform;
  std::span<const std::byte> bytes;
};

/// Result payload of every rank for `spec` over `inputs` (rank order).
/// Reductions fold ranks in ascending order with the kernel library of the
/// platform that receives the result. Throws LengthMismatch on bad shapes.
std::vector<std::vector<std::byte>> execute(const PlatformRegistry& registry,
                                            const CollectiveSpec& spec,
                                            std::span<const RankInput> inputs);

}  // namespace hetccl::detail
