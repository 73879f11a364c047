// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hetccl/platform_registry.hpp"

namespace hetccl {

// Simulated vendor runtimes. Each platform's table and kernels live in their
// own translation unit, standing in for separately compiled backend and
// kernel libraries that are loaded at run time.

BackendTable make_cuda_sim_backend(int device_count = 4);
KernelLibrary make_cuda_sim_kernels();

BackendTable make_hip_sim_backend(int device_count = 4);
KernelLibrary make_hip_sim_kernels();

BackendTable make_sim_backend(Platform platform, int device_count = 4);
KernelLibrary make_sim_kernels(Platform platform);

/// Registers every simulated platform and loads its kernel library.
void register_sim_platforms(PlatformRegistry& registry, int device_count = 4);

}  // namespace hetccl
