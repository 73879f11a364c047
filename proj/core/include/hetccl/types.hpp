// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace hetccl {

/// Virtual time in seconds.
using Seconds = double;
/// Byte counts of real payloads.
using Bytes = std::uint64_t;

/// Vendor identity of a device runtime. New vendors are added as enumerators
/// and registered with their own backend table and kernel library.
enum class Platform : std::uint8_t {
  kCuda,
  kHip,
};

inline constexpr Platform kAllPlatforms[] = {Platform::kCuda, Platform::kHip};

std::string_view to_string(Platform p);
/// Accepts "cuda"/"nvidia" and "hip"/"amd"; throws Error{kParseError} otherwise.
Platform parse_platform(std::string_view name);

/// Element type of a typed payload view. All types are little-endian.
enum class DataType : std::uint8_t { kF32, kF64, kI32 };

std::size_t dtype_size(DataType t);
std::string_view to_string(DataType t);
DataType parse_dtype(std::string_view name);

/// Element-wise combiners provided by every platform's kernel library.
enum class ReduceOp : std::uint8_t { kSum, kMin, kMax };

/// Kernel name as registered in a KernelLibrary ("reduce_sum", ...).
std::string_view kernel_name(ReduceOp op);
std::string_view to_string(ReduceOp op);
ReduceOp parse_reduce_op(std::string_view name);

/// Identifies one device: a node id from the topology and a device index.
struct DeviceId {
  int node = 0;
  int device = 0;

  friend bool operator==(const DeviceId&, const DeviceId&) = default;
  friend auto operator<=>(const DeviceId&, const DeviceId&) = default;
};

}  // namespace hetccl
