// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <vector>

#include "hetccl/balancer.hpp"
#include "hetccl/collectives.hpp"
#include "hetccl/sim_backends.hpp"

namespace {

using namespace hetccl;

struct Fixture {
  Fixture() : topology(default_cluster()), memory(init(registry), topology),
              transport(topology, memory), collectives(registry, memory, transport) {}

  static PlatformRegistry& init(PlatformRegistry& r) {
    register_sim_platforms(r, 16);
    return r;
  }

  PlatformRegistry registry;
  ClusterTopology topology;
  MemoryManager memory;
  Transport transport;
  Collectives collectives;
};

// Data plane: all_reduce over every device with real payloads.
void BM_AllReducePayload(benchmark::State& state) {
  Fixture f;
  const auto members = f.topology.devices();
  const auto bytes = static_cast<Bytes>(state.range(0));
  std::vector<DeviceBuffer> send;
  for (const auto& d : members) send.push_back(f.memory.alloc(d, bytes));
  for (auto _ : state) {
    Communicator comm = Communicator::create(f.topology, members);
    auto res = f.collectives.all_reduce(comm, send, DataType::kF32, ReduceOp::kSum);
    benchmark::DoNotOptimize(res.outputs.data());
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations()) *
                          static_cast<int64_t>(bytes * members.size()));
}
BENCHMARK(BM_AllReducePayload)->RangeMultiplier(16)->Range(1 << 10, 1 << 22);

// Timing plane only.
void BM_SimulateSchedule(benchmark::State& state) {
  Fixture f;
  const auto members = f.topology.devices();
  const auto op = static_cast<CollectiveOp>(state.range(0));
  for (auto _ : state) {
    Communicator comm = Communicator::create(f.topology, members);
    benchmark::DoNotOptimize(f.collectives.simulate(comm, op, 1 << 26).completion_time);
  }
  state.SetLabel(std::string(to_string(op)));
}
BENCHMARK(BM_SimulateSchedule)->DenseRange(0, 5);

void BM_AssignMicrobatches(benchmark::State& state) {
  std::vector<double> speeds;
  for (int i = 0; i < state.range(0); ++i) speeds.push_back(1.0 + (i % 3));
  for (auto _ : state) {
    benchmark::DoNotOptimize(assign_microbatches(1000, speeds).per_rank.data());
  }
}
BENCHMARK(BM_AssignMicrobatches)->RangeMultiplier(4)->Range(4, 1024);

}  // namespace

BENCHMARK_MAIN();
