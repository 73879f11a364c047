// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

// HIP-like backend: runtime table plus the reduction kernel library. The
// kernels are written separately from the CUDA-like ones but walk elements
// in the same order, so both produce identical bytes.

#include <bit>
#include <cstdint>
#include <cstring>

#include "backends/sim_common.hpp"
#include "hetccl/error.hpp"
#include "hetccl/sim_backends.hpp"

namespace hetccl {

namespace {

enum class Combine { kSum, kMin, kMax };

template <typename T>
T load(const std::byte* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

template <typename T>
void store(std::byte* p, T v) {
  std::memcpy(p, &v, sizeof(T));
}

template <typename T, Combine C>
T combine(T a, T b) {
  if constexpr (C == Combine::kSum) {
    if constexpr (std::is_same_v<T, std::int32_t>) {
      return std::bit_cast<std::int32_t>(std::bit_cast<std::uint32_t>(a) +
                                         std::bit_cast<std::uint32_t>(b));
    } else {
      return a + b;
    }
  } else if constexpr (C == Combine::kMin) {
    return b < a ? b : a;
  } else {
    return a < b ? b : a;
  }
}

template <typename T, Combine C>
void elementwise(std::span<std::byte> acc, std::span<const std::byte> in) {
  std::byte* out = acc.data();
  const std::byte* rhs = in.data();
  const std::byte* end = acc.data() + acc.size();
  for (; out + sizeof(T) <= end; out += sizeof(T), rhs += sizeof(T)) {
    store<T>(out, combine<T, C>(load<T>(out), load<T>(rhs)));
  }
}

template <Combine C>
void hip_reduce(DataType dtype, std::span<std::byte> acc,
                std::span<const std::byte> in) {
  if (dtype == DataType::kF32) {
    elementwise<float, C>(acc, in);
  } else if (dtype == DataType::kF64) {
    elementwise<double, C>(acc, in);
  } else {
    elementwise<std::int32_t, C>(acc, in);
  }
}

}  // namespace

BackendTable make_hip_sim_backend(int device_count) {
  BackendTable table = sim::make_runtime_table(Platform::kHip, device_count);
  table.set("launch_kernel", [](const CallArgs& args) {
    if (args.kernel == nullptr) {
      throw Error(Errc::kUnknownKernel, "launch without a resolved kernel");
    }
    args.kernel(args.dtype, args.dst, args.src);
    return CallResult{};
  });
  return table;
}

KernelLibrary make_hip_sim_kernels() {
  KernelLibrary lib(Platform::kHip);
  lib.set("reduce_sum", &hip_reduce<Combine::kSum>);
  lib.set("reduce_min", &hip_reduce<Combine::kMin>);
  lib.set("reduce_max", &hip_reduce<Combine::kMax>);
  return lib;
}

}  // namespace hetccl
