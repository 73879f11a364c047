// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "hetccl/platform_registry.hpp"

#include <algorithm>
#include <set>

#include "hetccl/error.hpp"

namespace hetccl {

bool is_runtime_call(std::string_view call) {
  return std::find(kRuntimeApiSurface.begin(), kRuntimeApiSurface.end(),
                   call) != kRuntimeApiSurface.end();
}

void BackendTable::set(std::string_view call, BackendFn fn) {
  set_handle(call, std::make_shared<const BackendFn>(std::move(fn)));
}

void BackendTable::set_handle(std::string_view call, BackendHandle handle) {
  entries_.insert_or_assign(std::string(call), std::move(handle));
}

const BackendHandle* BackendTable::find(std::string_view call) const {
  auto it = entries_.find(call);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::string> BackendTable::missing_entries() const {
  std::vector<std::string> missing;
  for (auto call : kRuntimeApiSurface) {
    const BackendHandle* h = find(call);
    if (h == nullptr || *h == nullptr || !**h) missing.emplace_back(call);
  }
  return missing;
}

void KernelLibrary::set(std::string_view name, KernelFn fn) {
  kernels_.insert_or_assign(std::string(name), fn);
}

KernelFn KernelLibrary::find(std::string_view name) const {
  auto it = kernels_.find(name);
  return it == kernels_.end() ? nullptr : it->second;
}

int PlatformRegistry::register_backend(BackendTable table) {
  if (is_registered(table.platform())) {
    throw Error(Errc::kDuplicatePlatform,
                std::string(to_string(table.platform())) +
                    " already registered");
  }
  if (auto missing = table.missing_entries(); !missing.empty()) {
    throw Error(Errc::kIncompleteTable,
                std::string(to_string(table.platform())) + " table",
                std::move(missing));
  }
  for (const auto& [name, _] : table.entries()) {
    if (!is_runtime_call(name)) {
      throw Error(Errc::kUnknownCall, "table entry '" + name + "'");
    }
  }
  std::set<const void*> taken;
  for (const auto& e : entries_) {
    for (const auto& [_, h] : e.table.entries()) taken.insert(h.get());
  }
  for (const auto& [name, h] : table.entries()) {
    if (taken.count(h.get()) != 0) {
      throw Error(Errc::kSharedHandle,
                  "entry '" + name + "' reuses another platform's handle");
    }
  }
  const int id = static_cast<int>(entries_.size());
  entries_.push_back(Entry{id, std::move(table), std::nullopt});
  return id;
}

void PlatformRegistry::load_kernels(KernelLibrary library) {
  for (auto& e : entries_) {
    if (e.table.platform() == library.platform()) {
      e.kernels = std::move(library);
      return;
    }
  }
  throw Error(Errc::kUnregisteredPlatform,
              "kernel library for " +
                  std::string(to_string(library.platform())) +
                  " loaded before its backend");
}

bool PlatformRegistry::is_registered(Platform platform) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const Entry& e) {
    return e.table.platform() == platform;
  });
}

bool PlatformRegistry::has_kernels(Platform platform) const {
  return is_registered(platform) && entry(platform).kernels.has_value();
}

std::vector<Platform> PlatformRegistry::registered_platforms() const {
  std::vector<Platform> out;
  for (const auto& e : entries_) out.push_back(e.table.platform());
  return out;
}

const PlatformRegistry::Entry& PlatformRegistry::entry(Platform platform) const {
  for (const auto& e : entries_) {
    if (e.table.platform() == platform) return e;
  }
  throw Error(Errc::kUnregisteredPlatform, std::string(to_string(platform)));
}

const BackendTable& PlatformRegistry::table(Platform platform) const {
  return entry(platform).table;
}

CallResult PlatformRegistry::dispatch(std::string_view call, Platform platform,
                                      const CallArgs& args) const {
  if (!is_runtime_call(call)) {
    throw Error(Errc::kUnknownCall, std::string(call));
  }
  const BackendHandle* handle = entry(platform).table.find(call);
  if (tracing_) {
    std::lock_guard<std::mutex> lock(trace_mu_);
    trace_.push_back(DispatchRecord{std::string(call), platform, handle->get()});
  }
  return (**handle)(args);
}

void PlatformRegistry::launch_reduce(Platform platform, ReduceOp op,
                                     DataType dtype, std::span<std::byte> acc,
                                     std::span<const std::byte> in) const {
  const Entry& e = entry(platform);
  if (!e.kernels) {
    throw Error(Errc::kUnknownKernel, "no kernel library loaded for " +
                                          std::string(to_string(platform)));
  }
  KernelFn fn = e.kernels->find(kernel_name(op));
  if (fn == nullptr) {
    throw Error(Errc::kUnknownKernel, std::string(kernel_name(op)));
  }
  if (acc.size() != in.size() || acc.size() % dtype_size(dtype) != 0) {
    throw Error(Errc::kSizeMismatch, "kernel operands differ in length");
  }
  CallArgs args;
  args.bytes = acc.size();
  args.dst = acc;
  args.src = in;
  args.dtype = dtype;
  args.kernel = fn;
  dispatch("launch_kernel", platform, args);
}

void PlatformRegistry::set_tracing(bool enabled) { tracing_ = enabled; }

std::vector<DispatchRecord> PlatformRegistry::trace() const {
  std::lock_guard<std::mutex> lock(trace_mu_);
  return trace_;
}

void PlatformRegistry::clear_trace() {
  std::lock_guard<std::mutex> lock(trace_mu_);
  trace_.clear();
}

Platform NodeContext::set_platform(Platform platform) {
  if (!registry_->is_registered(platform)) {
    throw Error(Errc::kUnregisteredPlatform, std::string(to_string(platform)));
  }
  active_ = platform;
  return platform;
}

Platform NodeContext::set_platform_auto(std::span<const Platform> available) {
  std::set<Platform> distinct(available.begin(), available.end());
  if (distinct.size() > 1) {
    throw Error(Errc::kAmbiguousPlatform,
                "node sees more than one vendor runtime");
  }
  if (distinct.empty() || !registry_->is_registered(*distinct.begin())) {
    throw Error(Errc::kNoPlatform, "no registered platform available");
  }
  active_ = *distinct.begin();
  return *active_;
}

CallResult NodeContext::dispatch(std::string_view call,
                                 const CallArgs& args) const {
  if (!active_) throw Error(Errc::kNoPlatform, "no active platform");
  return registry_->dispatch(call, *active_, args);
}

}  // namespace hetccl
