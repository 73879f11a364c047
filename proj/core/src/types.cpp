// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "hetccl/types.hpp"

#include <string>

#include "hetccl/error.hpp"

namespace hetccl {

std::string_view to_string(Platform p) {
  switch (p) {
    case Platform::kCuda: return "cuda";
    case Platform::kHip: return "hip";
  }
  return "unknown";
}

Platform parse_platform(std::string_view name) {
  if (name == "cuda" || name == "nvidia") return Platform::kCuda;
  if (name == "hip" || name == "amd") return Platform::kHip;
  throw Error(Errc::kParseError, "unknown platform '" + std::string(name) + "'");
}

std::size_t dtype_size(DataType t) {
  switch (t) {
    case DataType::kF32: return 4;
    case DataType::kF64: return 8;
    case DataType::kI32: return 4;
  }
  return 0;
}

std::string_view to_string(DataType t) {
  switch (t) {
    case DataType::kF32: return "f32";
    case DataType::kF64: return "f64";
    case DataType::kI32: return "i32";
  }
  return "unknown";
}

DataType parse_dtype(std::string_view name) {
  if (name == "f32") return DataType::kF32;
  if (name == "f64") return DataType::kF64;
  if (name == "i32") return DataType::kI32;
  throw Error(Errc::kParseError, "unknown dtype '" + std::string(name) + "'");
}

std::string_view kernel_name(ReduceOp op) {
  switch (op) {
    case ReduceOp::kSum: return "reduce_sum";
    case ReduceOp::kMin: return "reduce_min";
    case ReduceOp::kMax: return "reduce_max";
  }
  return "unknown";
}

std::string_view to_string(ReduceOp op) {
  switch (op) {
    case ReduceOp::kSum: return "sum";
    case ReduceOp::kMin: return "min";
    case ReduceOp::kMax: return "max";
  }
  return "unknown";
}

ReduceOp parse_reduce_op(std::string_view name) {
  if (name == "sum") return ReduceOp::kSum;
  if (name == "min") return ReduceOp::kMin;
  if (name == "max") return ReduceOp::kMax;
  throw Error(Errc::kParseError, "unknown reduce op '" + std::string(name) + "'");
}

}  // namespace hetccl
