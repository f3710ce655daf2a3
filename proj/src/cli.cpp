// Copyright 2026 The Erasable Ledger Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "erasable/cli.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "erasable/placement.hpp"
#include "erasable/simnet.hpp"
#include "erasable/storage.hpp"

namespace erasable::cli {

namespace fs = std::filesystem;

namespace {

void configure_logging() {
  static bool configured = false;
  if (configured) return;
  configured = true;
  auto logger = spdlog::stderr_color_mt("erasable");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("ERASABLE_LEDGER_LOG")) {
    spdlog::set_level(spdlog::level::from_str(level));
  }
}

std::size_t block_count(const core::LedgerTree& tree) {
  std::size_t n = 0;
  for (const auto& [key, chain] : tree.chains) n += chain.blocks.size();
  return n;
}

}  // namespace

int cmd_run(const fs::path& scenario_path, const RunOptions& options,
            std::ostream& out, std::ostream& err) {
  simnet::Scenario scenario;
  try {
    scenario = load_scenario(scenario_path);
  } catch (const LedgerError& e) {
    err << "invalid scenario: " << e.what() << "\n";
    return kExitUsage;
  }
  if (options.seed) scenario.network.seed = *options.seed;

  spdlog::info("running {} ({} events, {} nodes, seed {})",
               scenario_path.string(), scenario.events.size(),
               scenario.nodes.size(), scenario.network.seed);
  auto result = simnet::run_scenario(scenario, {.verify_each_event = true});
  for (const auto& r : result.trace) {
    spdlog::debug("{} {} {} {}", r.tick, r.node_id, r.action, r.detail);
  }

  try {
    if (options.trace_out) {
      std::ofstream trace(*options.trace_out, std::ios::binary | std::ios::trunc);
      if (!trace) {
        throw LedgerError(Errc::io_error,
                          options.trace_out->string() + ": cannot write trace");
      }
      trace << simnet::trace_to_jsonl(result.trace);
    }
    if (options.replica_out) {
      for (const auto& node : result.nodes) {
        storage::save_replica(node.replica, node.journal,
                              *options.replica_out / node.node_id);
      }
    }
  } catch (const LedgerError& e) {
    err << e.what() << "\n";
    return kExitFailure;
  }

  bool all_verify = true;
  for (const auto& node : result.nodes) {
    auto report = core::verify_tree(node.replica);
    all_verify = all_verify && report.ok;
    out << node.node_id << " operator=" << node.operator_org.id
        << " chains=" << node.replica.chains.size()
        << " blocks=" << block_count(node.replica)
        << " journal=" << node.journal.size()
        << " verify=" << (report.ok ? "ok" : "FAILED") << "\n";
  }
  const bool converged = simnet::check_convergence(result.nodes);
  out << "trace records: " << result.trace.size() << "\n";
  out << "converged: " << (converged ? "yes" : "no") << "\n";
  if (result.verify_failures > 0) {
    out << "verification failures during run: " << result.verify_failures
        << "\n";
  }
  return converged && all_verify && result.verify_failures == 0
             ? kExitOk
             : kExitFailure;
}

int cmd_verify(const fs::path& replica_dir, std::ostream& out,
               std::ostream& err) {
  try {
    auto replica = storage::load_replica(replica_dir);
    out << "ok: network=" << replica.tree.network_id
        << " chains=" << replica.tree.chains.size()
        << " blocks=" << block_count(replica.tree)
        << " journal=" << replica.journal.size() << "\n";
    return kExitOk;
  } catch (const storage::IntegrityError& e) {
    out << "integrity failure: " << e.report().violations.size()
        << " violation(s)\n"
        << e.report().describe();
    return kExitFailure;
  } catch (const LedgerError& e) {
    err << "cannot load replica: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_branches(int k, int m, std::ostream& out, std::ostream& err) {
  try {
    out << placement::max_branch_count(k, m) << "\n";
    return kExitOk;
  } catch (const LedgerError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  configure_logging();
  CLI::App app{"Context-chain ledger with consensus-governed chain deletion",
               "erasable-ledger"};
  app.require_subcommand(1);

  std::string scenario_path;
  RunOptions run_opts;
  std::string trace_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  auto* run = app.add_subcommand("run", "Simulate a scenario file");
  run->add_option("scenario", scenario_path, "Scenario JSON")->required();
  auto* trace_opt = run->add_option("--trace", trace_path, "Trace output (JSONL)");
  auto* out_opt = run->add_option("--out", out_dir, "Replica output directory");
  auto* seed_opt = run->add_option("--seed", seed, "Override the scenario seed");

  std::string replica_dir;
  auto* verify = app.add_subcommand("verify", "Load and verify a replica directory");
  verify->add_option("dir", replica_dir, "Replica directory")->required();

  std::string policy;
  bool sparse = false;
  auto* demo = app.add_subcommand("demo", "Two-organization, two-person walk-through");
  demo->add_option("--policy", policy, "silence-veto or silence-agree")
      ->check(CLI::IsMember({"silence-veto", "silence-agree"}));
  demo->add_flag("--sparse", sparse, "Materialize five scopes instead of all");

  int k = 0;
  int m = 0;
  auto* branches = app.add_subcommand("branches", "Upper bound on context chains");
  branches->add_option("k", k, "Number of organizations")->required();
  branches->add_option("m", m, "Number of persons")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  if (run->parsed()) {
    if (*trace_opt) run_opts.trace_out = trace_path;
    if (*out_opt) run_opts.replica_out = out_dir;
    if (*seed_opt) run_opts.seed = seed;
    return cmd_run(scenario_path, run_opts, out, err);
  }
  if (verify->parsed()) return cmd_verify(replica_dir, out, err);
  if (demo->parsed()) {
    DemoOptions opts;
    opts.sparse = sparse;
    if (policy == "silence-veto") opts.policy = consensus::SilenceMode::silence_is_veto;
    if (policy == "silence-agree") {
      opts.policy = consensus::SilenceMode::silence_is_agreement;
    }
    return cmd_demo(opts, out);
  }
  return cmd_branches(k, m, out, err);
}

}  // namespace erasable::cli
