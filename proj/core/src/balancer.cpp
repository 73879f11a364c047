// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "hetccl/balancer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hetccl/error.hpp"
#include "json.hpp"

namespace hetccl {

namespace {

constexpr double kRelTol = 1e-12;

void check_speeds(std::span<const double> speeds) {
  if (speeds.empty()) throw Error(Errc::kInvalidArgument, "no speeds");
  for (double s : speeds) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw Error(Errc::kInvalidArgument, "speeds must be positive and finite");
    }
  }
}

// a < b beyond relative rounding noise.
bool clearly_less(double a, double b) {
  return a < b - kRelTol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

std::vector<double> proportional_shares(int total, std::span<const double> speeds) {
  check_speeds(speeds);
  const double sum = std::accumulate(speeds.begin(), speeds.end(), 0.0);
  std::vector<double> shares;
  shares.reserve(speeds.size());
  for (double s : speeds) shares.push_back(total * (s / sum));
  return shares;
}

Assignment assign_microbatches(int total, std::span<const double> speeds) {
  if (total < 1) throw Error(Errc::kZeroBatch, "batch of " + std::to_string(total));
  const std::vector<double> shares = proportional_shares(total, speeds);

  Assignment a{total, std::vector<int>(speeds.size())};
  int assigned = 0;
  for (std::size_t i = 0; i < shares.size(); ++i) {
    const double q = shares[i];
    const double nearest = std::round(q);
    const double base = std::abs(q - nearest) <= kRelTol * std::max(1.0, q) ? nearest
                                                                             : std::floor(q);
    a.per_rank[i] = std::min(static_cast<int>(base), total - assigned);
    assigned += a.per_rank[i];
  }
  for (; assigned < total; ++assigned) {
    std::size_t best = 0;
    double best_ratio = (a.per_rank[0] + 1) / speeds[0];
    for (std::size_t i = 1; i < speeds.size(); ++i) {
      const double ratio = (a.per_rank[i] + 1) / speeds[i];
      if (clearly_less(ratio, best_ratio)) {
        best = i;
        best_ratio = ratio;
      }
    }
    ++a.per_rank[best];
  }
  return a;
}

Assignment uniform_assignment(int total, int ranks) {
  if (total < 1) throw Error(Errc::kZeroBatch, "batch of " + std::to_string(total));
  if (ranks < 1) throw Error(Errc::kInvalidArgument, "no ranks");
  Assignment a{total, std::vector<int>(static_cast<std::size_t>(ranks), total / ranks)};
  for (int i = 0; i < total % ranks; ++i) ++a.per_rank[static_cast<std::size_t>(i)];
  return a;
}

const std::vector<ModelDesc>& model_presets() {
  static const std::vector<ModelDesc> presets = {
      {"gpt-125m", 125e6, 2, 1024, 192},
      {"gpt-355m", 355e6, 2, 1024, 192},
      {"llama-1b", 1.0e9, 2, 8192, 48},
      {"llama-3b", 3.0e9, 2, 8192, 48},
  };
  return presets;
}

const ModelDesc& find_model(std::string_view name) {
  for (const ModelDesc& m : model_presets()) {
    if (m.name == name) return m;
  }
  throw Error(Errc::kParseError, "unknown model '" + std::string(name) + "'");
}

ModelDesc parse_model_desc(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::kParseError, e.what(), {"byte " + std::to_string(e.byte)});
  }
  if (!j.is_object()) throw Error(Errc::kParseError, "model must be an object", {"/"});
  ModelDesc m;
  m.name = "custom";
  for (const auto& [key, value] : j.items()) {
    const std::string where = "/" + key;
    try {
      if (key == "name") {
        m.name = value.get<std::string>();
      } else if (key == "params") {
        m.params = value.get<double>();
      } else if (key == "dtype_bytes") {
        m.dtype_bytes = value.get<int>();
      } else if (key == "seq_len") {
        m.seq_len = value.get<int>();
      } else if (key == "batch_B") {
        m.batch = value.get<int>();
      } else {
        throw Error(Errc::kParseError, "unknown key", {where});
      }
    } catch (const nlohmann::json::type_error& e) {
      throw Error(Errc::kParseError, e.what(), {where});
    }
  }
  for (const char* key : {"params", "dtype_bytes", "seq_len", "batch_B"}) {
    if (!j.contains(key)) throw Error(Errc::kMissingField, key, {"/"});
  }
  if (!(m.params > 0.0) || (m.dtype_bytes != 2 && m.dtype_bytes != 4) || m.seq_len < 1 ||
      m.batch < 1) {
    throw Error(Errc::kParseError, "model values out of range", {"/"});
  }
  return m;
}

ZeroSchedule ZeroSchedule::for_model(const ModelDesc& model, int stage) {
  const double bytes = model.param_bytes();
  ZeroSchedule s;
  s.stage = stage;
  switch (stage) {
    case 1:
      s.collectives = {{CollectiveOp::kAllGather, bytes}, {CollectiveOp::kAllReduce, bytes}};
      break;
    case 3:
      s.collectives = {{CollectiveOp::kAllGather, bytes},
                       {CollectiveOp::kAllGather, bytes},
                       {CollectiveOp::kReduceScatter, bytes}};
      break;
    default:
      throw Error(Errc::kInvalidArgument, "ZeRO stage " + std::to_string(stage));
  }
  return s;
}

double ZeroSchedule::total_bytes(CollectiveOp op) const {
  double sum = 0.0;
  for (const ScheduledCollective& c : collectives) {
    if (c.op == op) sum += c.bytes;
  }
  return sum;
}

StepReport simulate_step(const Assignment& assignment, int seq_len,
                         const ZeroSchedule& schedule, Communicator& comm,
                         Collectives& collectives, const ClusterTopology& topology) {
  if (static_cast<int>(assignment.per_rank.size()) != comm.world_size()) {
    throw Error(Errc::kRankMismatch,
                std::to_string(assignment.per_rank.size()) + " shares for " +
                    std::to_string(comm.world_size()) + " ranks");
  }
  if (seq_len < 1) throw Error(Errc::kInvalidArgument, "seq_len < 1");

  StepReport rep;
  const Seconds start = comm.barrier();
  for (int r = 0; r < comm.world_size(); ++r) {
    const double work =
        static_cast<double>(assignment.per_rank[static_cast<std::size_t>(r)]) * seq_len;
    const Seconds t = work / topology.node(comm.rank(r).node()).device_speed;
    comm.endpoints()[static_cast<std::size_t>(r)].advance_to(start + t);
    rep.compute_time = std::max(rep.compute_time, t);
    rep.tokens += work;
  }
  for (const ScheduledCollective& c : schedule.collectives) {
    rep.collectives.push_back(collectives.simulate(comm, c.op, c.bytes));
    rep.comm_time += rep.collectives.back().completion_time;
  }
  rep.step_time = rep.compute_time + rep.comm_time;
  rep.throughput = rep.tokens / rep.step_time;
  return rep;
}

SpeedProfile simulate_profiling(const ModelDesc& model, const ZeroSchedule& schedule,
                                Communicator& comm, Collectives& collectives,
                                const ClusterTopology& topology, int warmup_steps) {
  if (warmup_steps < 1) {
    throw Error(Errc::kInvalidArgument, "profiling needs at least one warm-up step");
  }
  SpeedProfile p;
  for (const Endpoint& e : comm.ranks()) p.speeds.push_back(topology.node(e.node()).device_speed);
  const Assignment uniform = uniform_assignment(model.batch, comm.world_size());
  for (int i = 0; i < warmup_steps; ++i) {
    p.profiling_duration +=
        simulate_step(uniform, model.seq_len, schedule, comm, collectives, topology)
            .step_time;
  }
  return p;
}

double efficiency(const StepReport& het, const StepReport& homo_a,
                  const StepReport& homo_b) {
  return het.throughput / (homo_a.throughput + homo_b.throughput);
}

}  // namespace hetccl
