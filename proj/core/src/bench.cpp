// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "hetccl/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <tuple>

#include "hetccl/communicator.hpp"
#include "hetccl/device_memory.hpp"
#include "hetccl/error.hpp"
#include "hetccl/platform_registry.hpp"
#include "hetccl/reference.hpp"
#include "hetccl/sim_backends.hpp"
#include "hetccl/transport.hpp"

namespace hetccl::bench {

namespace {

constexpr Platform kPlatformA = Platform::kCuda;
constexpr Platform kPlatformB = Platform::kHip;

int max_devices(const ClusterTopology& topology) {
  int n = 1;
  for (const DeviceId& d : topology.devices()) n = std::max(n, d.device + 1);
  return n;
}

PlatformRegistry& with_sim_platforms(PlatformRegistry& registry, int device_count) {
  register_sim_platforms(registry, device_count);
  return registry;
}

// Registry, memory, transport and collectives for one sweep cell.
struct Runtime {
  explicit Runtime(const ClusterTopology& topology)
      : memory(with_sim_platforms(registry, max_devices(topology)), topology),
        transport(topology, memory),
        collectives(registry, memory, transport) {}

  PlatformRegistry registry;
  MemoryManager memory;
  Transport transport;
  Collectives collectives;
};

Bytes parse_bytes(std::string_view text) {
  Bytes v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || v == 0) {
    throw Error(Errc::kParseError, "bad size '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::byte> random_bytes(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::byte> out(n);
  for (auto& b : out) b = static_cast<std::byte>(rng() & 0xff);
  return out;
}

std::vector<std::byte> random_values(std::mt19937_64& rng, DataType dtype,
                                     std::size_t count) {
  std::vector<std::byte> out(count * dtype_size(dtype));
  std::uniform_real_distribution<double> real(-1000.0, 1000.0);
  for (std::size_t i = 0; i < count; ++i) {
    std::byte* p = out.data() + i * dtype_size(dtype);
    switch (dtype) {
      case DataType::kF32: {
        const float v = static_cast<float>(real(rng));
        std::memcpy(p, &v, sizeof v);
        break;
      }
      case DataType::kF64: {
        const double v = real(rng);
        std::memcpy(p, &v, sizeof v);
        break;
      }
      case DataType::kI32: {
        const auto v = static_cast<std::int32_t>(static_cast<std::uint32_t>(rng()));
        std::memcpy(p, &v, sizeof v);
        break;
      }
    }
  }
  return out;
}

std::uint64_t cell_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = seed ^ 0x9e3779b97f4a7c15ULL;
  for (std::uint64_t k : keys) {
    h ^= k + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::pair<DeviceId, DeviceId> p2p_endpoints(const ClusterTopology& topology,
                                            Scenario scenario) {
  auto first_nodes = [&](Platform p) {
    std::vector<int> ids;
    for (const DeviceId& d : topology.devices_of(p)) {
      if (ids.empty() || ids.back() != d.node) ids.push_back(d.node);
    }
    return ids;
  };
  const auto a = first_nodes(kPlatformA);
  const auto b = first_nodes(kPlatformB);
  auto need = [&](bool ok) {
    if (!ok) {
      throw Error(Errc::kInvalidArgument, "topology has no endpoints for the " +
                                              std::string(to_string(scenario)) +
                                              " p2p scenario");
    }
  };
  switch (scenario) {
    case Scenario::kHomoA:
      need(a.size() >= 2);
      return {{a[0], 0}, {a[1], 0}};
    case Scenario::kHomoB:
      need(b.size() >= 2);
      return {{b[0], 0}, {b[1], 0}};
    case Scenario::kHet:
      need(!a.empty() && !b.empty());
      return {{a[0], 0}, {b[0], 0}};
  }
  return {};
}

void check_p2p_payload(const ClusterTopology& topology, DeviceId a, DeviceId b,
                       PathKind path, Bytes size, Seconds expected, std::uint64_t seed) {
  Runtime rt(topology);
  std::mt19937_64 rng(seed);
  Endpoint src(0, a, topology.node(a.node).platform);
  Endpoint dst(1, b, topology.node(b.node).platform);
  DeviceBuffer sbuf = rt.memory.alloc(a, size);
  DeviceBuffer dbuf = rt.memory.alloc(b, size);
  const auto payload = random_bytes(rng, size);
  std::copy(payload.begin(), payload.end(), sbuf.bytes().begin());
  if (path == PathKind::kRdma) {
    rt.memory.register_region(sbuf);
    rt.memory.register_region(dbuf);
  }
  const TransferReport r =
      rt.transport.send_recv(src, sbuf, dst, dbuf, size, path == PathKind::kRdma);
  const bool same = std::equal(payload.begin(), payload.end(), dbuf.bytes().begin());
  if (!same || r.path_used != path || r.duration != expected) {
    throw Error(Errc::kSelfCheckFailed,
                "p2p " + std::string(to_string(path)) + " transfer of " +
                    std::to_string(size) + " bytes",
                {same ? "timing mismatch" : "payload corrupted"});
  }
}

void check_collective(const ClusterTopology& topology, CollectiveOp op,
                      const std::vector<DeviceId>& members, std::uint64_t seed,
                      int trials) {
  std::mt19937_64 rng(seed);
  const int world = static_cast<int>(members.size());
  for (int t = 0; t < trials; ++t) {
    const auto dtype = static_cast<DataType>(rng() % 3);
    CollectiveSpec spec{op, dtype, std::nullopt, std::nullopt};
    if (is_reducing(op)) spec.combiner = static_cast<ReduceOp>(rng() % 3);
    if (is_rooted(op)) spec.root = static_cast<int>(rng() % static_cast<std::uint64_t>(world));
    const std::size_t count = static_cast<std::size_t>(world) * (1 + rng() % 4);

    Runtime rt(topology);
    Communicator comm = Communicator::create(topology, members);
    std::vector<reference::Payload> inputs;
    std::vector<DeviceBuffer> send;
    for (int r = 0; r < world; ++r) {
      inputs.push_back(random_values(rng, dtype, count));
      send.push_back(rt.memory.alloc(members[static_cast<std::size_t>(r)],
                                     inputs.back().size()));
      std::copy(inputs.back().begin(), inputs.back().end(), send.back().bytes().begin());
    }
    const CollectiveResult got = rt.collectives.run(comm, spec, send);
    const auto want = reference::evaluate(spec, inputs);
    for (int r = 0; r < world; ++r) {
      const auto& g = got.outputs[static_cast<std::size_t>(r)];
      const auto& w = want[static_cast<std::size_t>(r)];
      if (g.size() != w.size() || !std::equal(w.begin(), w.end(), g.bytes().begin())) {
        throw Error(Errc::kSelfCheckFailed,
                    std::string(to_string(op)) + " over " + std::to_string(world) +
                        " ranks disagrees with the reference",
                    {"rank " + std::to_string(r), "dtype " +
                                                      std::string(to_string(dtype))});
      }
    }
  }
}

std::vector<DeviceId> all_devices(const ClusterTopology& topology, Scenario s) {
  std::vector<DeviceId> out;
  if (s != Scenario::kHomoB) out = topology.devices_of(kPlatformA);
  if (s != Scenario::kHomoA) {
    const auto b = topology.devices_of(kPlatformB);
    out.insert(out.end(), b.begin(), b.end());
  }
  if (out.empty()) {
    throw Error(Errc::kInvalidArgument,
                "topology has no devices for the " + std::string(to_string(s)) +
                    " scenario");
  }
  return out;
}

StepReport train_step(const ClusterTopology& topology, const std::vector<DeviceId>& members,
                      const ModelDesc& model, const ZeroSchedule& schedule, int batch,
                      bool balance) {
  Runtime rt(topology);
  Communicator comm = Communicator::create(topology, members);
  std::vector<double> speeds;
  for (const DeviceId& d : members) speeds.push_back(topology.node(d.node).device_speed);
  const Assignment a = balance ? assign_microbatches(batch, speeds)
                               : uniform_assignment(batch, static_cast<int>(members.size()));
  return simulate_step(a, model.seq_len, schedule, comm, rt.collectives, topology);
}

}  // namespace

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::kHomoA: return "homoA";
    case Scenario::kHomoB: return "homoB";
    case Scenario::kHet: return "het";
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view name) {
  for (Scenario s : kAllScenarios) {
    if (to_string(s) == name) return s;
  }
  throw Error(Errc::kParseError, "unknown scenario '" + std::string(name) + "'");
}

std::vector<Bytes> parse_sizes(std::string_view text) {
  std::vector<Bytes> sizes;
  const auto first = text.find(':');
  if (first != std::string_view::npos) {
    const auto second = text.find(':', first + 1);
    if (second == std::string_view::npos || text.substr(second + 1, 1) != "x") {
      throw Error(Errc::kParseError, "size range must look like lo:hi:xF");
    }
    const Bytes lo = parse_bytes(text.substr(0, first));
    const Bytes hi = parse_bytes(text.substr(first + 1, second - first - 1));
    const Bytes factor = parse_bytes(text.substr(second + 2));
    if (factor < 2 || lo > hi) throw Error(Errc::kParseError, "empty size range");
    for (Bytes s = lo; s <= hi; s *= factor) {
      sizes.push_back(s);
      if (s > hi / factor) break;
    }
  } else {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto comma = std::min(text.find(',', pos), text.size());
      sizes.push_back(parse_bytes(text.substr(pos, comma - pos)));
      pos = comma + 1;
    }
  }
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) {
      throw Error(Errc::kParseError, "sizes must be strictly increasing");
    }
  }
  return sizes;
}

std::optional<std::vector<DeviceId>> scenario_members(const ClusterTopology& topology,
                                                      Scenario scenario, int world) {
  if (world < 1) return std::nullopt;
  const auto a = topology.devices_of(kPlatformA);
  const auto b = topology.devices_of(kPlatformB);
  auto take = [](const std::vector<DeviceId>& from, int n) {
    return std::vector<DeviceId>(from.begin(), from.begin() + n);
  };
  switch (scenario) {
    case Scenario::kHomoA:
      if (world > static_cast<int>(a.size())) return std::nullopt;
      return take(a, world);
    case Scenario::kHomoB:
      if (world > static_cast<int>(b.size())) return std::nullopt;
      return take(b, world);
    case Scenario::kHet: {
      const int half = world / 2;
      if (world % 2 != 0 || half > static_cast<int>(a.size()) ||
          half > static_cast<int>(b.size())) {
        return std::nullopt;
      }
      auto out = take(a, half);
      const auto rest = take(b, half);
      out.insert(out.end(), rest.begin(), rest.end());
      return out;
    }
  }
  return std::nullopt;
}

std::vector<P2pRow> run_p2p_sweep(const ClusterTopology& topology,
                                  const P2pSweepSpec& spec) {
  std::vector<P2pRow> rows;
  for (Scenario scenario : spec.scenarios) {
    const auto [a, b] = p2p_endpoints(topology, scenario);
    const bool nics = topology.node(a.node).nic && topology.node(b.node).nic;
    std::vector<PathKind> paths;
    if (spec.include_rdma && nics) paths.push_back(PathKind::kRdma);
    paths.push_back(PathKind::kStaged);
    for (PathKind path : paths) {
      for (Bytes size : spec.sizes) {
        Runtime rt(topology);
        std::vector<Endpoint> eps{Endpoint(0, a, topology.node(a.node).platform),
                                  Endpoint(1, b, topology.node(b.node).platform)};
        const Flow flow{0, 1, static_cast<double>(size)};
        const TransferReport r = rt.transport.exchange(
            eps, std::span<const Flow>(&flow, 1), path == PathKind::kRdma)[0];
        if (size <= spec.payload_check_limit) {
          check_p2p_payload(topology, a, b, path, size, r.duration,
                            cell_seed(spec.seed, {static_cast<std::uint64_t>(scenario),
                                                  static_cast<std::uint64_t>(path), size}));
        }
        rows.push_back({scenario, path, size, r.duration, measured_bandwidth(r)});
      }
    }
  }
  std::sort(rows.begin(), rows.end(), [](const P2pRow& x, const P2pRow& y) {
    return std::tuple(x.scenario, x.path, x.size) < std::tuple(y.scenario, y.path, y.size);
  });
  return rows;
}

std::vector<CollectiveRow> run_collective_sweep(const ClusterTopology& topology,
                                                const CollectiveSweepSpec& spec) {
  struct Cell {
    CollectiveOp op;
    Scenario scenario;
    int world;
    std::vector<DeviceId> members;
  };
  std::vector<Cell> cells;
  for (CollectiveOp op : spec.ops) {
    for (Scenario scenario : spec.scenarios) {
      for (int world : spec.worlds) {
        if (auto members = scenario_members(topology, scenario, world)) {
          cells.push_back({op, scenario, world, std::move(*members)});
        }
      }
    }
  }
  if (spec.self_check) {
    for (const Cell& c : cells) {
      check_collective(topology, c.op, c.members,
                       cell_seed(spec.seed, {static_cast<std::uint64_t>(c.op),
                                             static_cast<std::uint64_t>(c.scenario),
                                             static_cast<std::uint64_t>(c.world)}),
                       spec.self_check_trials);
    }
  }
  std::vector<CollectiveRow> rows;
  for (const Cell& c : cells) {
    for (Bytes size : spec.sizes) {
      Runtime rt(topology);
      Communicator comm = Communicator::create(topology, c.members);
      const CollectiveReport rep =
          rt.collectives.simulate(comm, c.op, static_cast<double>(size), 0);
      rows.push_back({c.op, c.scenario, c.world, size, rep.completion_time, rep.algbw,
                      rep.busbw, rep.degenerate()});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const CollectiveRow& x, const CollectiveRow& y) {
    return std::tuple(x.op, x.scenario, x.world, x.size) <
           std::tuple(y.op, y.scenario, y.world, y.size);
  });
  return rows;
}

TrainReport run_train_sim(const ClusterTopology& topology, const TrainSpec& spec) {
  const ZeroSchedule schedule =
      spec.no_comm ? ZeroSchedule::none() : ZeroSchedule::for_model(spec.model, spec.zero_stage);
  const auto het = all_devices(topology, Scenario::kHet);
  auto batch_for = [&](std::size_t ranks) {
    return std::max(1, static_cast<int>(std::llround(static_cast<double>(spec.model.batch) *
                                                     static_cast<double>(ranks) /
                                                     static_cast<double>(het.size()))));
  };
  const auto members = all_devices(topology, spec.scenario);

  TrainReport rep;
  rep.model = spec.model.name;
  rep.zero_stage = spec.no_comm ? 0 : spec.zero_stage;
  rep.scenario = spec.scenario;
  rep.balance = spec.balance;
  rep.world = static_cast<int>(members.size());
  rep.batch = batch_for(members.size());

  const StepReport balanced =
      train_step(topology, members, spec.model, schedule, rep.batch, true);
  const StepReport uniform =
      train_step(topology, members, spec.model, schedule, rep.batch, false);
  rep.step = spec.balance ? balanced : uniform;
  rep.speedup_vs_uniform = balanced.throughput / uniform.throughput;

  if (spec.scenario == Scenario::kHet) {
    const auto a = all_devices(topology, Scenario::kHomoA);
    const auto b = all_devices(topology, Scenario::kHomoB);
    const StepReport ha =
        train_step(topology, a, spec.model, schedule, batch_for(a.size()), spec.balance);
    const StepReport hb =
        train_step(topology, b, spec.model, schedule, batch_for(b.size()), spec.balance);
    rep.efficiency = efficiency(rep.step, ha, hb);
  }
  if (spec.balance) {
    Runtime rt(topology);
    Communicator comm = Communicator::create(topology, members);
    ModelDesc model = spec.model;
    model.batch = rep.batch;
    rep.profiling_overhead = simulate_profiling(model, schedule, comm, rt.collectives,
                                                topology, spec.warmup_steps)
                                 .profiling_duration;
  }
  return rep;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv(std::ostream& out, const std::vector<P2pRow>& rows) {
  out << "scenario,path,size_bytes,duration_s,bandwidth_Bps\n";
  for (const P2pRow& r : rows) {
    out << to_string(r.scenario) << ',' << to_string(r.path) << ',' << r.size << ','
        << format_number(r.duration) << ',' << format_number(r.bandwidth) << '\n';
  }
}

void write_csv(std::ostream& out, const std::vector<CollectiveRow>& rows) {
  out << "op,scenario,world_size,size_bytes,duration_s,algbw_Bps,busbw_Bps,degenerate\n";
  for (const CollectiveRow& r : rows) {
    out << to_string(r.op) << ',' << to_string(r.scenario) << ',' << r.world << ','
        << r.size << ',' << format_number(r.duration) << ',' << format_number(r.algbw)
        << ',' << format_number(r.busbw) << ',' << (r.degenerate ? 1 : 0) << '\n';
  }
}

void write_csv(std::ostream& out, const std::vector<TrainReport>& rows) {
  out << "model,zero_stage,scenario,balance,world_size,batch,compute_s,comm_s,step_s,"
         "throughput_tokens_per_s,speedup_vs_uniform,efficiency,profiling_overhead_s\n";
  for (const TrainReport& r : rows) {
    out << r.model << ',' << r.zero_stage << ',' << to_string(r.scenario) << ','
        << (r.balance ? "on" : "off") << ',' << r.world << ',' << r.batch << ','
        << format_number(r.step.compute_time) << ',' << format_number(r.step.comm_time)
        << ',' << format_number(r.step.step_time) << ','
        << format_number(r.step.throughput) << ',' << format_number(r.speedup_vs_uniform)
        << ',' << (r.efficiency ? format_number(*r.efficiency) : std::string()) << ','
        << format_number(r.profiling_overhead) << '\n';
  }
}

}  // namespace hetccl::bench
