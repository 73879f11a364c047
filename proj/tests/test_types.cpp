// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "hetccl/error.hpp"
#include "hetccl/payload.hpp"
#include "hetccl/types.hpp"

using namespace hetccl;

TEST(Types, ParsePlatformAcceptsVendorAliases) {
  EXPECT_EQ(parse_platform("cuda"), Platform::kCuda);
  EXPECT_EQ(parse_platform("nvidia"), Platform::kCuda);
  EXPECT_EQ(parse_platform("hip"), Platform::kHip);
  EXPECT_EQ(parse_platform("amd"), Platform::kHip);
  try {
    parse_platform("tpu");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kParseError);
  }
}

TEST(Types, DtypeSizesAndNames) {
  EXPECT_EQ(dtype_size(DataType::kF32), 4u);
  EXPECT_EQ(dtype_size(DataType::kF64), 8u);
  EXPECT_EQ(dtype_size(DataType::kI32), 4u);
  for (DataType t : {DataType::kF32, DataType::kF64, DataType::kI32}) {
    EXPECT_EQ(parse_dtype(to_string(t)), t);
  }
}

TEST(Types, ReduceOpKernelNames) {
  EXPECT_EQ(kernel_name(ReduceOp::kSum), "reduce_sum");
  EXPECT_EQ(kernel_name(ReduceOp::kMin), "reduce_min");
  EXPECT_EQ(kernel_name(ReduceOp::kMax), "reduce_max");
  EXPECT_EQ(parse_reduce_op("max"), ReduceOp::kMax);
  EXPECT_THROW(parse_reduce_op("prod"), Error);
}

TEST(Types, PayloadRoundTrip) {
  const std::vector<double> v{1.5, -2.25, 1e300};
  const auto bytes = encode<double>(v);
  ASSERT_EQ(bytes.size(), 24u);
  EXPECT_EQ(decode<double>(bytes), v);
}

TEST(Types, ErrorMessageCarriesCodeAndDetails) {
  const Error e(Errc::kMissingField, "node needs 'id'", {"/nodes/0"});
  const std::string msg = e.what();
  EXPECT_NE(msg.find("MissingField"), std::string::npos);
  EXPECT_NE(msg.find("/nodes/0"), std::string::npos);
}
