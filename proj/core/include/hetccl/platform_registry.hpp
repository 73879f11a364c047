// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hetccl/types.hpp"

namespace hetccl {

/// The abstract runtime calls every backend must implement. The table is
/// keyed by name, so growing the surface toward the full vendor runtime
/// (see docs/runtime_api.md) only means adding names here and entries in
/// each backend.
inline constexpr std::array<std::string_view, 12> kRuntimeApiSurface = {
    "alloc",        "free",        "copy_h2d",    "copy_d2h",
    "copy_d2d",     "memset",      "stream_create", "stream_sync",
    "event_record", "event_query", "launch_kernel", "device_count",
};

bool is_runtime_call(std::string_view call);

/// Element-wise combiner: acc[i] = op(acc[i], in[i]) over `dtype` elements.
using KernelFn = void (*)(DataType dtype, std::span<std::byte> acc,
                          std::span<const std::byte> in);

/// Arguments of an abstract runtime call. Each call reads the fields it
/// needs and ignores the rest.
struct CallArgs {
  Bytes bytes = 0;
  std::span<std::byte> dst{};
  std::span<const std::byte> src{};
  std::byte fill{0};
  std::uint64_t handle = 0;
  DataType dtype = DataType::kF32;
  KernelFn kernel = nullptr;
};

struct CallResult {
  std::vector<std::byte> storage;
  std::uint64_t handle = 0;
  std::int64_t value = 0;
};

using BackendFn = std::function<CallResult(const CallArgs&)>;
using BackendHandle = std::shared_ptr<const BackendFn>;

/// Per-platform function table routing abstract calls to an implementation.
class BackendTable {
 public:
  explicit BackendTable(Platform platform) : platform_(platform) {}

  Platform platform() const noexcept { return platform_; }

  /// Installs (or replaces) the implementation of `call`. Every set() mints
  /// a fresh handle, so two tables never share one unless a handle is
  /// copied between them with set_handle().
  void set(std::string_view call, BackendFn fn);
  void set_handle(std::string_view call, BackendHandle handle);

  const BackendHandle* find(std::string_view call) const;
  /// Surface calls without an entry, in surface order.
  std::vector<std::string> missing_entries() const;
  const std::map<std::string, BackendHandle, std::less<>>& entries() const {
    return entries_;
  }

 private:
  Platform platform_;
  std::map<std::string, BackendHandle, std::less<>> entries_;
};

/// Per-platform compiled reduction kernels, keyed by kernel name.
class KernelLibrary {
 public:
  explicit KernelLibrary(Platform platform) : platform_(platform) {}

  Platform platform() const noexcept { return platform_; }
  void set(std::string_view name, KernelFn fn);
  KernelFn find(std::string_view name) const;
  const std::map<std::string, KernelFn, std::less<>>& kernels() const {
    return kernels_;
  }

 private:
  Platform platform_;
  std::map<std::string, KernelFn, std::less<>> kernels_;
};

struct DispatchRecord {
  std::string call;
  Platform platform;
  const void* handle;
};

/// Registered backends and kernel libraries. Registration happens during a
/// single-threaded setup phase; afterwards the registry is only read and can
/// be shared by concurrent rank workers. The dispatch trace is the one
/// mutable piece and is guarded by its own lock.
class PlatformRegistry {
 public:
  PlatformRegistry() = default;
  PlatformRegistry(const PlatformRegistry&) = delete;
  PlatformRegistry& operator=(const PlatformRegistry&) = delete;

  /// Returns the backend id (registration order, starting at 0).
  int register_backend(BackendTable table);
  void load_kernels(KernelLibrary library);

  bool is_registered(Platform platform) const;
  bool has_kernels(Platform platform) const;
  std::vector<Platform> registered_platforms() const;
  const BackendTable& table(Platform platform) const;

  /// Routes `call` to `platform`'s table entry and returns its result as is.
  CallResult dispatch(std::string_view call, Platform platform,
                      const CallArgs& args) const;

  /// acc = op(acc, in) using `platform`'s kernel library, launched through
  /// dispatch("launch_kernel").
  void launch_reduce(Platform platform, ReduceOp op, DataType dtype,
                     std::span<std::byte> acc,
                     std::span<const std::byte> in) const;

  void set_tracing(bool enabled);
  std::vector<DispatchRecord> trace() const;
  void clear_trace();

 private:
  struct Entry {
    int id;
    BackendTable table;
    std::optional<KernelLibrary> kernels;
  };

  const Entry& entry(Platform platform) const;

  std::vector<Entry> entries_;
  std::atomic<bool> tracing_{false};
  mutable std::mutex trace_mu_;
  mutable std::vector<DispatchRecord> trace_;
};

/// The platform selection of one node. A node sees exactly one vendor
/// runtime; contexts that would see several are rejected.
class NodeContext {
 public:
  explicit NodeContext(const PlatformRegistry& registry) : registry_(&registry) {}

  Platform set_platform(Platform platform);
  /// Selects the single registered platform among `available`.
  Platform set_platform_auto(std::span<const Platform> available);
  std::optional<Platform> platform() const noexcept { return active_; }

  CallResult dispatch(std::string_view call, const CallArgs& args) const;

 private:
  const PlatformRegistry* registry_;
  std::optional<Platform> active_;
};

}  // namespace hetccl
