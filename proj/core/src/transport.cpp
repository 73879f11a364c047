// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "hetccl/transport.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <string>

#include "hetccl/error.hpp"

namespace hetccl {

double measured_bandwidth(const TransferReport& report) {
  if (!(report.duration > 0.0)) {
    throw Error(Errc::kInvalidArgument, "bandwidth of a zero-duration transfer");
  }
  return report.bytes / report.duration;
}

PathKind Transport::select_path(const Endpoint& src, const Endpoint& dst,
                                bool prefer_rdma, bool rdma_ready) const {
  if (src.node() == dst.node()) return PathKind::kIntranode;
  const bool nics = topology_->node(src.node()).nic.has_value() &&
                    topology_->node(dst.node()).nic.has_value();
  return prefer_rdma && rdma_ready && nics ? PathKind::kRdma : PathKind::kStaged;
}

PathModel Transport::model(const Endpoint& src, const Endpoint& dst,
                           PathKind kind) const {
  return path_model(*topology_, src.device_id(), dst.device_id(), kind);
}

void Transport::check_buffer(const Endpoint& ep, const DeviceBuffer& buf) const {
  if (buf.region() && buf.region()->nic != ep.node()) {
    throw Error(Errc::kInvalidRegion,
                "region key bound to node " + std::to_string(buf.region()->nic) +
                    " used through node " + std::to_string(ep.node()));
  }
  if (buf.node() != ep.node() || buf.platform() != ep.platform()) {
    throw Error(Errc::kInvalidArgument,
                "buffer " + std::to_string(buf.id()) + " does not live on rank " +
                    std::to_string(ep.rank()) + "'s device");
  }
}

TransferReport Transport::send_recv(Endpoint& src, const DeviceBuffer& src_buf,
                                    Endpoint& dst, DeviceBuffer& dst_buf,
                                    Bytes size, bool prefer_rdma) {
  if (src.rank() == dst.rank()) {
    throw Error(Errc::kInvalidArgument, "send_recv needs distinct endpoints");
  }
  check_buffer(src, src_buf);
  check_buffer(dst, dst_buf);
  if (size == 0 || size > src_buf.size() || size > dst_buf.size()) {
    throw Error(Errc::kSizeMismatch,
                "transfer of " + std::to_string(size) + " bytes between buffers of " +
                    std::to_string(src_buf.size()) + " and " +
                    std::to_string(dst_buf.size()));
  }

  const PathKind kind = select_path(src, dst, prefer_rdma,
                                    src_buf.rdma_eligible() && dst_buf.rdma_eligible());
  switch (kind) {
    case PathKind::kIntranode:
      memory_->copy_d2d(src_buf, dst_buf, size);
      break;
    case PathKind::kRdma:
      // The NIC reads the source device buffer and writes the destination
      // device buffer directly.
      std::memcpy(dst_buf.bytes().data(), src_buf.bytes().data(), size);
      break;
    case PathKind::kStaged: {
      HostBuffer send_stage = memory_->alloc_host(src.node(), size);
      HostBuffer recv_stage = memory_->alloc_host(dst.node(), size);
      memory_->copy_d2h(src_buf, send_stage, size);
      std::memcpy(recv_stage.bytes().data(), send_stage.bytes().data(), size);
      memory_->copy_h2d(recv_stage, dst_buf, size);
      break;
    }
  }

  TransferReport r;
  r.bytes = static_cast<double>(size);
  r.path_used = kind;
  r.duration = model(src, dst, kind)(r.bytes);
  r.start = std::max(src.clock(), dst.clock());
  src.advance_to(r.start + r.duration);
  dst.advance_to(r.start + r.duration);
  r.src_clock_after = src.clock();
  r.dst_clock_after = dst.clock();
  transfers_.fetch_add(1);
  return r;
}

std::vector<TransferReport> Transport::exchange(std::span<Endpoint> endpoints,
                                                std::span<const Flow> flows,
                                                bool prefer_rdma) {
  std::vector<Seconds> ready(endpoints.size());
  std::vector<Seconds> finish(endpoints.size());
  for (std::size_t i = 0; i < endpoints.size(); ++i) {
    ready[i] = finish[i] = endpoints[i].clock();
  }
  std::map<int, Seconds> tx_free;
  std::map<int, Seconds> rx_free;

  std::vector<TransferReport> reports;
  reports.reserve(flows.size());
  for (const Flow& f : flows) {
    if (f.src >= endpoints.size() || f.dst >= endpoints.size() || f.src == f.dst) {
      throw Error(Errc::kInvalidArgument, "flow endpoints out of range");
    }
    const Endpoint& a = endpoints[f.src];
    const Endpoint& b = endpoints[f.dst];
    TransferReport r;
    r.bytes = f.bytes;
    r.path_used = select_path(a, b, prefer_rdma, true);
    r.duration = model(a, b, r.path_used)(f.bytes);
    r.start = std::max(ready[f.src], ready[f.dst]);
    if (r.path_used != PathKind::kIntranode) {
      r.start = std::max({r.start, tx_free[a.node()], rx_free[b.node()]});
      tx_free[a.node()] = rx_free[b.node()] = r.start + r.duration;
    }
    const Seconds end = r.start + r.duration;
    finish[f.src] = std::max(finish[f.src], end);
    finish[f.dst] = std::max(finish[f.dst], end);
    reports.push_back(r);
  }
  for (std::size_t i = 0; i < endpoints.size(); ++i) endpoints[i].advance_to(finish[i]);
  for (std::size_t k = 0; k < flows.size(); ++k) {
    reports[k].src_clock_after = endpoints[flows[k].src].clock();
    reports[k].dst_clock_after = endpoints[flows[k].dst].clock();
  }
  transfers_.fetch_add(flows.size());
  return reports;
}

}  // namespace hetccl
