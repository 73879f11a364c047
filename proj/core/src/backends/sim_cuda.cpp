// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

// CUDA-like backend: runtime table plus the reduction kernel library.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <functional>

#include "backends/sim_common.hpp"
#include "hetccl/error.hpp"
#include "hetccl/sim_backends.hpp"

namespace hetccl {

namespace {

static_assert(std::endian::native == std::endian::little,
              "payload views assume a little-endian host");

struct WrappingAdd {
  std::int32_t operator()(std::int32_t a, std::int32_t b) const {
    return static_cast<std::int32_t>(static_cast<std::uint32_t>(a) +
                                     static_cast<std::uint32_t>(b));
  }
  template <typename T>
  T operator()(T a, T b) const {
    return a + b;
  }
};

struct Min {
  template <typename T>
  T operator()(T a, T b) const {
    return b < a ? b : a;
  }
};

struct Max {
  template <typename T>
  T operator()(T a, T b) const {
    return a < b ? b : a;
  }
};

template <typename T, typename Op>
void apply(std::span<std::byte> acc, std::span<const std::byte> in) {
  const std::size_t n = acc.size() / sizeof(T);
  Op op;
  for (std::size_t i = 0; i < n; ++i) {
    T a;
    T b;
    std::memcpy(&a, acc.data() + i * sizeof(T), sizeof(T));
    std::memcpy(&b, in.data() + i * sizeof(T), sizeof(T));
    const T r = op(a, b);
    std::memcpy(acc.data() + i * sizeof(T), &r, sizeof(T));
  }
}

template <typename Op>
void reduce_kernel(DataType dtype, std::span<std::byte> acc,
                   std::span<const std::byte> in) {
  switch (dtype) {
    case DataType::kF32: return apply<float, Op>(acc, in);
    case DataType::kF64: return apply<double, Op>(acc, in);
    case DataType::kI32: return apply<std::int32_t, Op>(acc, in);
  }
}

}  // namespace

BackendTable make_cuda_sim_backend(int device_count) {
  BackendTable table = sim::make_runtime_table(Platform::kCuda, device_count);
  table.set("launch_kernel", [](const CallArgs& args) {
    if (args.kernel == nullptr) {
      throw Error(Errc::kUnknownKernel, "launch without a resolved kernel");
    }
    args.kernel(args.dtype, args.dst, args.src);
    return CallResult{};
  });
  return table;
}

KernelLibrary make_cuda_sim_kernels() {
  KernelLibrary lib(Platform::kCuda);
  lib.set("reduce_sum", &reduce_kernel<WrappingAdd>);
  lib.set("reduce_min", &reduce_kernel<Min>);
  lib.set("reduce_max", &reduce_kernel<Max>);
  return lib;
}

}  // namespace hetccl
