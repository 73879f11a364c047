// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "hetccl/collectives.hpp"

namespace hetccl::reference {

using Payload = std::vector<std::byte>;

/// Flat, single-process semantics of `spec` over per-rank inputs. Elements
/// are combined in ascending rank order; i32 sums wrap. Used to self-check
/// the library, so it shares no code with the collective data path.
std::vector<Payload> evaluate(const CollectiveSpec& spec,
                              const std::vector<Payload>& inputs);

}  // namespace hetccl::reference
