// Copyright 2026 The hetccl-sim Authors
// SPDX-License-Identifier: Apache-2.0

// hetccl-sim: p2p sweeps, collective sweeps and training-step simulation.
//
// Exit codes: 0 success, 1 usage error, 2 config error, 3 self-check failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hetccl/bench.hpp"
#include "hetccl/error.hpp"
#include "hetccl/topology.hpp"

namespace {

using namespace hetccl;

constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSelfCheck = 3;

constexpr const char* kDefaultSizes = "1024:1073741824:x2";

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(item);
  return out;
}

std::vector<bench::Scenario> scenarios(const std::string& text) {
  if (text == "all") return {std::begin(bench::kAllScenarios), std::end(bench::kAllScenarios)};
  std::vector<bench::Scenario> out;
  for (const auto& s : split(text)) out.push_back(bench::parse_scenario(s));
  return out;
}

ClusterTopology topology(const std::string& path) {
  return path.empty() ? default_cluster() : load_topology_file(path);
}

// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(Errc::kInvalidArgument, "cannot write " + path);
}

struct Common {
  std::string topology;
  std::string scenario = "all";
  std::string out;
  std::string sizes = kDefaultSizes;
  std::uint64_t seed = 1;
};

void add_common(CLI::App* cmd, Common& c, bool with_sizes) {
  cmd->add_option("--topology", c.topology, "Cluster JSON (default: built-in 4-node cluster)");
  cmd->add_option("--scenario", c.scenario, "homoA, homoB, het or all");
  cmd->add_option("--out", c.out, "CSV output path (default: stdout)");
  cmd->add_option("--seed", c.seed, "Seed for payload self-checks");
  if (with_sizes) cmd->add_option("--sizes", c.sizes, "lo:hi:xF or a comma list of bytes");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-vendor collective communication simulator"};
  app.require_subcommand(1);

  Common p2p_opts;
  bool no_rdma = false;
  auto* p2p = app.add_subcommand("p2p", "Point-to-point bandwidth sweep");
  add_common(p2p, p2p_opts, true);
  p2p->add_flag("--no-rdma", no_rdma, "Only time the host-staged path");

  Common coll_opts;
  std::string ops = "all";
  std::string worlds = "2,4,8,12,16";
  bool no_self_check = false;
  auto* coll = app.add_subcommand("coll", "Collective bandwidth sweep");
  add_common(coll, coll_opts, true);
  coll->add_option("--ops", ops, "Comma list of collectives or all");
  coll->add_option("--world", worlds, "Comma list of world sizes");
  coll->add_flag("--no-self-check", no_self_check, "Skip the reference comparison");

  Common train_opts;
  train_opts.scenario = "het";
  std::string model = "llama-1b";
  std::string model_file;
  int zero = 3;
  std::string balance = "on";
  bool no_comm = false;
  int warmup = 3;
  auto* train = app.add_subcommand("train", "Training-step simulation");
  add_common(train, train_opts, false);
  train->add_option("--model", model, "Preset name, comma list, or all");
  train->add_option("--model-file", model_file, "Model JSON instead of a preset");
  train->add_option("--zero", zero, "ZeRO stage")->check(CLI::IsMember({1, 3}));
  train->add_option("--balance", balance, "on or off")->check(CLI::IsMember({"on", "off"}));
  train->add_flag("--no-comm", no_comm, "Drop all communication from the step");
  train->add_option("--warmup", warmup, "Profiling warm-up steps")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    std::ostringstream csv;
    if (*p2p) {
      const ClusterTopology topo = topology(p2p_opts.topology);
      bench::P2pSweepSpec spec;
      spec.sizes = bench::parse_sizes(p2p_opts.sizes);
      spec.scenarios = scenarios(p2p_opts.scenario);
      spec.include_rdma = !no_rdma;
      spec.seed = p2p_opts.seed;
      bench::write_csv(csv, bench::run_p2p_sweep(topo, spec));
      emit(p2p_opts.out, csv.str());
    } else if (*coll) {
      const ClusterTopology topo = topology(coll_opts.topology);
      bench::CollectiveSweepSpec spec;
      spec.sizes = bench::parse_sizes(coll_opts.sizes);
      spec.scenarios = scenarios(coll_opts.scenario);
      spec.seed = coll_opts.seed;
      spec.self_check = !no_self_check;
      if (ops != "all") {
        spec.ops.clear();
        for (const auto& o : split(ops)) spec.ops.push_back(parse_collective_op(o));
      }
      spec.worlds.clear();
      for (const auto& w : split(worlds)) {
        try {
          spec.worlds.push_back(std::stoi(w));
        } catch (const std::exception&) {
          throw Error(Errc::kParseError, "bad world size '" + w + "'");
        }
      }
      bench::write_csv(csv, bench::run_collective_sweep(topo, spec));
      emit(coll_opts.out, csv.str());
    } else if (*train) {
      const ClusterTopology topo = topology(train_opts.topology);
      std::vector<ModelDesc> models;
      if (!model_file.empty()) {
        std::ifstream in(model_file);
        if (!in) throw Error(Errc::kParseError, "cannot open " + model_file, {model_file});
        std::stringstream text;
        text << in.rdbuf();
        models.push_back(parse_model_desc(text.str()));
      } else if (model == "all") {
        models = model_presets();
      } else {
        for (const auto& m : split(model)) models.push_back(find_model(m));
      }
      std::vector<bench::TrainReport> reports;
      for (const ModelDesc& m : models) {
        for (bench::Scenario s : scenarios(train_opts.scenario)) {
          bench::TrainSpec spec;
          spec.model = m;
          spec.zero_stage = zero;
          spec.scenario = s;
          spec.balance = balance == "on";
          spec.no_comm = no_comm;
          spec.warmup_steps = warmup;
          reports.push_back(bench::run_train_sim(topo, spec));
        }
      }
      bench::write_csv(csv, reports);
      emit(train_opts.out, csv.str());
      if (!train_opts.out.empty()) {
        for (const auto& r : reports) {
          std::printf("%s %s: throughput %s tokens/s, speedup %s, efficiency %s\n",
                      r.model.c_str(), std::string(bench::to_string(r.scenario)).c_str(),
                      bench::format_number(r.step.throughput).c_str(),
                      bench::format_number(r.speedup_vs_uniform).c_str(),
                      r.efficiency ? bench::format_number(*r.efficiency).c_str() : "-");
        }
      }
    }
  } catch (const Error& e) {
    std::cerr << "hetccl-sim: " << e.what() << '\n';
    return e.code() == Errc::kSelfCheckFailed ? kExitSelfCheck : kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "hetccl-sim: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
