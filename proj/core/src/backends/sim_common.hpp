// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hetccl/platform_registry.hpp"

namespace hetccl::sim {

/// Fills every surface entry except launch_kernel with a fresh simulated
/// runtime implementation. Callers add their own launch_kernel.
BackendTable make_runtime_table(Platform platform, int device_count);

}  // namespace hetccl::sim
