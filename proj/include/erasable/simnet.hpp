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

#pragma once

// Deterministic discrete-event simulation of a permissioned network.
//
// The node with the lowest node_id is the coordinator. It sequences every
// replicated operation (appends and approved deletions) into one numbered
// log and broadcasts it; other nodes apply operations strictly in sequence
// order, buffering early arrivals. The coordinator also runs every deletion
// consensus round. Messages are delayed and possibly dropped according to
// NetworkConfig; there are no retries.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "erasable/consensus.hpp"
#include "erasable/core.hpp"
#include "erasable/scenario.hpp"

namespace erasable::simnet {

// xorshift64* seeded through one splitmix64 step:
//   s = splitmix64(seed); if s == 0 then s = 0x9E3779B97F4A7C15
//   next: s ^= s >> 12; s ^= s << 25; s ^= s >> 27;
//         return s * 0x2545F4914F6CDD1D
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();

 private:
  std::uint64_t state_;
};

struct TraceRecord {
  Tick tick = 0;
  std::string node_id;
  std::string action;
  std::string detail;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

using Trace = std::vector<TraceRecord>;

// One {"tick","node","action","detail"} object per line, in that key order.
std::string trace_to_jsonl(const Trace& trace);

struct NodeState {
  std::string node_id;
  Identity operator_org;
  core::LedgerTree replica;
  std::vector<consensus::DeletionRecord> journal;
  Behavior behavior;
};

struct SimulationOptions {
  // Verify every replica after every event; failures go to the trace.
  bool verify_each_event = false;
};

struct SimulationResult {
  Trace trace;
  // Sorted by node_id; nodes.front() is the coordinator.
  std::vector<NodeState> nodes;
  // Every consensus round the coordinator opened, by request id.
  std::map<std::string, consensus::ConsensusRound> rounds;
  std::size_t verify_failures = 0;
};

SimulationResult run_scenario(const Scenario& scenario,
                              const SimulationOptions& options = {});

// True iff all replicas serialize identically and all verify.
bool check_convergence(std::span<const NodeState> nodes);

}  // namespace erasable::simnet
