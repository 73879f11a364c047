// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "hetccl/error.hpp"

namespace hetccl {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::kDuplicatePlatform: return "DuplicatePlatform";
    case Errc::kIncompleteTable: return "IncompleteTable";
    case Errc::kSharedHandle: return "SharedHandle";
    case Errc::kNoPlatform: return "NoPlatform";
    case Errc::kAmbiguousPlatform: return "AmbiguousPlatform";
    case Errc::kUnknownCall: return "UnknownCall";
    case Errc::kUnregisteredPlatform: return "UnregisteredPlatform";
    case Errc::kUnknownKernel: return "UnknownKernel";
    case Errc::kZeroSize: return "ZeroSize";
    case Errc::kNoNic: return "NoNic";
    case Errc::kCrossPlatformCopy: return "CrossPlatformCopy";
    case Errc::kCrossNodeCopy: return "CrossNodeCopy";
    case Errc::kSizeMismatch: return "SizeMismatch";
    case Errc::kParseError: return "ParseError";
    case Errc::kMixedVendorNode: return "MixedVendorNode";
    case Errc::kMissingField: return "MissingField";
    case Errc::kUnknownNode: return "UnknownNode";
    case Errc::kNoRdmaPath: return "NoRdmaPath";
    case Errc::kInvalidRegion: return "InvalidRegion";
    case Errc::kMixedGroup: return "MixedGroup";
    case Errc::kLengthMismatch: return "LengthMismatch";
    case Errc::kInvalidRoot: return "InvalidRoot";
    case Errc::kZeroBatch: return "ZeroBatch";
    case Errc::kRankMismatch: return "RankMismatch";
    case Errc::kSelfCheckFailed: return "SelfCheckFailed";
    case Errc::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

std::string format_message(Errc code, const std::string& message,
                           const std::vector<std::string>& details) {
  std::string out{to_string(code)};
  if (!message.empty()) {
    out += ": ";
    out += message;
  }
  if (!details.empty()) {
    out += " {";
    for (std::size_t i = 0; i < details.size(); ++i) {
      if (i != 0) out += ", ";
      out += details[i];
    }
    out += "}";
  }
  return out;
}

}  // namespace

Error::Error(Errc code, const std::string& message,
             std::vector<std::string> details)
    : std::runtime_error(format_message(code, message, details)),
      code_(code),
      details_(std::move(details)) {}

}  // namespace hetccl
