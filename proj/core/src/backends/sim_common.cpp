// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "backends/sim_common.hpp"

#include <atomic>
#include <cstring>
#include <memory>

#include "hetccl/error.hpp"
#include "hetccl/sim_backends.hpp"

namespace hetccl::sim {

namespace {

struct RuntimeState {
  int device_count = 0;
  std::atomic<std::uint64_t> next_stream{1};
  std::atomic<std::uint64_t> next_event{1};
};

CallResult copy_bytes(const CallArgs& args) {
  if (args.dst.size() < args.bytes || args.src.size() < args.bytes) {
    throw Error(Errc::kSizeMismatch, "copy exceeds buffer extent");
  }
  if (args.bytes != 0) std::memmove(args.dst.data(), args.src.data(), args.bytes);
  return {};
}

}  // namespace

BackendTable make_runtime_table(Platform platform, int device_count) {
  auto state = std::make_shared<RuntimeState>();
  state->device_count = device_count;

  BackendTable table(platform);
  table.set("alloc", [](const CallArgs& args) {
    CallResult r;
    r.storage.assign(args.bytes, std::byte{0});
    return r;
  });
  table.set("free", [](const CallArgs&) { return CallResult{}; });
  table.set("copy_h2d", copy_bytes);
  table.set("copy_d2h", copy_bytes);
  table.set("copy_d2d", copy_bytes);
  table.set("memset", [](const CallArgs& args) {
    if (args.dst.size() < args.bytes) {
      throw Error(Errc::kSizeMismatch, "memset exceeds buffer extent");
    }
    std::memset(args.dst.data(), std::to_integer<int>(args.fill), args.bytes);
    return CallResult{};
  });
  table.set("stream_create", [state](const CallArgs&) {
    CallResult r;
    r.handle = state->next_stream.fetch_add(1);
    return r;
  });
  table.set("stream_sync", [](const CallArgs&) { return CallResult{}; });
  table.set("event_record", [state](const CallArgs&) {
    CallResult r;
    r.handle = state->next_event.fetch_add(1);
    return r;
  });
  // Simulated work completes at launch, so every recorded event is done.
  table.set("event_query", [](const CallArgs&) {
    CallResult r;
    r.value = 1;
    return r;
  });
  table.set("device_count", [state](const CallArgs&) {
    CallResult r;
    r.value = state->device_count;
    return r;
  });
  return table;
}

}  // namespace hetccl::sim

namespace hetccl {

BackendTable make_sim_backend(Platform platform, int device_count) {
  switch (platform) {
    case Platform::kCuda: return make_cuda_sim_backend(device_count);
    case Platform::kHip: return make_hip_sim_backend(device_count);
  }
  throw Error(Errc::kUnregisteredPlatform, "no simulated backend");
}

KernelLibrary make_sim_kernels(Platform platform) {
  switch (platform) {
    case Platform::kCuda: return make_cuda_sim_kernels();
    case Platform::kHip: return make_hip_sim_kernels();
  }
  throw Error(Errc::kUnregisteredPlatform, "no simulated kernels");
}

void register_sim_platforms(PlatformRegistry& registry, int device_count) {
  for (Platform p : kAllPlatforms) {
    registry.register_backend(make_sim_backend(p, device_count));
    registry.load_kernels(make_sim_kernels(p));
  }
}

}  // namespace hetccl
