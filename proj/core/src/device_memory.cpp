// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "hetccl/device_memory.hpp"

#include <string>

#include "hetccl/error.hpp"

namespace hetccl {

DeviceBuffer MemoryManager::alloc(Platform platform, int node, Bytes size) {
  if (size == 0) throw Error(Errc::kZeroSize, "device allocation of 0 bytes");
  if (!registry_->is_registered(platform)) {
    throw Error(Errc::kUnregisteredPlatform, std::string(to_string(platform)));
  }
  const NodeSpec& spec = topology_->node(node);
  if (spec.platform != platform) {
    throw Error(Errc::kMixedVendorNode,
                std::string(to_string(platform)) + " buffer on " +
                    std::string(to_string(spec.platform)) + " node " +
                    std::to_string(node));
  }
  CallArgs args;
  args.bytes = size;
  CallResult r = registry_->dispatch("alloc", platform, args);
  return DeviceBuffer(next_id_.fetch_add(1), platform, node, std::move(r.storage));
}

DeviceBuffer MemoryManager::alloc(DeviceId device, Bytes size) {
  if (!topology_->contains(device)) {
    topology_->node(device.node);
    throw Error(Errc::kInvalidArgument, "no device " + std::to_string(device.device) +
                                            " on node " + std::to_string(device.node));
  }
  return alloc(topology_->node(device.node).platform, device.node, size);
}

HostBuffer MemoryManager::alloc_host(int node, Bytes size) {
  if (size == 0) throw Error(Errc::kZeroSize, "host allocation of 0 bytes");
  topology_->node(node);
  return HostBuffer(next_id_.fetch_add(1), node, size);
}

void MemoryManager::release(DeviceBuffer&& buffer) {
  CallArgs args;
  args.bytes = buffer.size();
  registry_->dispatch("free", buffer.platform(), args);
  buffer.payload_.clear();
  buffer.payload_.shrink_to_fit();
}

RegionKey MemoryManager::register_region(DeviceBuffer& buffer) {
  if (buffer.region_) return *buffer.region_;
  const NodeSpec& spec = topology_->node(buffer.node());
  if (!spec.nic) {
    throw Error(Errc::kNoNic, "node " + std::to_string(spec.id) + " has no NIC");
  }
  buffer.region_ = RegionKey{next_key_.fetch_add(1), spec.id};
  return *buffer.region_;
}

void MemoryManager::check_extent(Bytes size, Bytes src_size, Bytes dst_size) {
  if (size == 0) throw Error(Errc::kSizeMismatch, "copy of 0 bytes");
  if (size > src_size || size > dst_size) {
    throw Error(Errc::kSizeMismatch, "copy of " + std::to_string(size) +
                                         " bytes exceeds a buffer");
  }
}

Seconds MemoryManager::pcie_time(int node, Bytes size) const {
  return topology_->node(node).pcie.time(static_cast<double>(size));
}

Seconds MemoryManager::copy_h2d(const HostBuffer& src, DeviceBuffer& dst, Bytes size) {
  check_extent(size, src.size(), dst.size());
  if (src.node() != dst.node()) {
    throw Error(Errc::kCrossNodeCopy, "host and device on different nodes");
  }
  CallArgs args;
  args.bytes = size;
  args.src = src.bytes();
  args.dst = dst.bytes();
  registry_->dispatch("copy_h2d", dst.platform(), args);
  return pcie_time(dst.node(), size);
}

Seconds MemoryManager::copy_d2h(const DeviceBuffer& src, HostBuffer& dst, Bytes size) {
  check_extent(size, src.size(), dst.size());
  if (src.node() != dst.node()) {
    throw Error(Errc::kCrossNodeCopy, "device and host on different nodes");
  }
  CallArgs args;
  args.bytes = size;
  args.src = src.bytes();
  args.dst = dst.bytes();
  registry_->dispatch("copy_d2h", src.platform(), args);
  return pcie_time(src.node(), size);
}

Seconds MemoryManager::copy_d2d(const DeviceBuffer& src, DeviceBuffer& dst, Bytes size) {
  if (src.platform() != dst.platform()) {
    throw Error(Errc::kCrossPlatformCopy,
                std::string(to_string(src.platform())) + " -> " +
                    std::string(to_string(dst.platform())));
  }
  if (src.node() != dst.node()) {
    throw Error(Errc::kCrossNodeCopy, "device buffers on different nodes");
  }
  check_extent(size, src.size(), dst.size());
  CallArgs args;
  args.bytes = size;
  args.src = src.bytes();
  args.dst = dst.bytes();
  registry_->dispatch("copy_d2d", src.platform(), args);
  return pcie_time(src.node(), size);
}

}  // namespace hetccl
