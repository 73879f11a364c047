// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hetccl {

enum class Errc {
  // platform registry
  kDuplicatePlatform,
  kIncompleteTable,
  kSharedHandle,
  kNoPlatform,
  kAmbiguousPlatform,
  kUnknownCall,
  kUnregisteredPlatform,
  kUnknownKernel,
  // device memory
  kZeroSize,
  kNoNic,
  kCrossPlatformCopy,
  kCrossNodeCopy,
  kSizeMismatch,
  // topology
  kParseError,
  kMixedVendorNode,
  kMissingField,
  kUnknownNode,
  kNoRdmaPath,
  // transport
  kInvalidRegion,
  // collectives
  kMixedGroup,
  kLengthMismatch,
  kInvalidRoot,
  // balancer
  kZeroBatch,
  kRankMismatch,
  // bench
  kSelfCheckFailed,
  kInvalidArgument,
};

std::string_view to_string(Errc code);

/// Exception type thrown by every hetccl operation. `details` carries
/// structured context where the error has any (missing table entries,
/// the JSON location of a parse error).
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message,
        std::vector<std::string> details = {});

  Errc code() const noexcept { return code_; }
  const std::vector<std::string>& details() const noexcept { return details_; }

 private:
  Errc code_;
  std::vector<std::string> details_;
};

}  // namespace hetccl
