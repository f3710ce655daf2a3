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

// Declarative input to the simulator. The JSON form is parsed by
// erasable::cli::parse_scenario (see docs/SCENARIOS.md).

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "erasable/consensus.hpp"
#include "erasable/core.hpp"

namespace erasable::simnet {

using core::Identity;
using core::Tick;

// A node's answer to vote requests whose id starts with `request`.
struct ScriptedVote {
  std::string request;
  consensus::VoteChoice decision = consensus::VoteChoice::approve;
};

struct Behavior {
  enum class Kind { approve_all, veto_all, silent, scripted };
  Kind kind = Kind::approve_all;
  // First matching entry wins; no match means silence.
  std::vector<ScriptedVote> script;
};

std::string_view to_string(Behavior::Kind kind);

struct NodeSpec {
  std::string node_id;
  Identity operator_org;
  Behavior behavior;
};

struct NetworkConfig {
  Tick delay_min = 1;
  Tick delay_max = 1;
  // drop_probability = drop_numerator / drop_denominator
  std::uint64_t drop_numerator = 0;
  std::uint64_t drop_denominator = 1;
  std::uint64_t seed = 0;
};

struct SubmitTx {
  std::string tx_id;
  std::string payload;
  std::vector<Identity> scope;
};

struct Erase {
  // Prefix of the generated request ids ("<id>/<16 hex>").
  std::string id;
  Identity subject;
  consensus::ErasureMode mode = consensus::ErasureMode::data_only;
  consensus::EndorserStrategy strategy =
      consensus::EndorserStrategy::scope_plus_guardians;
  consensus::EndorsementPolicy policy;
};

struct MembershipChange {
  Identity org;
  bool join = false;
};

// An out-of-band vote delivered straight to the coordinator, applied to
// every open request whose id starts with `request`.
struct CastVote {
  Identity voter;
  std::string request;
  consensus::VoteChoice decision = consensus::VoteChoice::approve;
};

struct Directive {
  Tick at = 0;
  std::variant<SubmitTx, Erase, MembershipChange, CastVote> action;
};

struct Scenario {
  std::string network_id;
  std::vector<Identity> organizations;
  std::vector<Identity> persons;
  // (person, guardian organization)
  std::vector<std::pair<Identity, Identity>> guardians;
  std::vector<NodeSpec> nodes;
  NetworkConfig network;
  std::vector<Directive> events;
};

// Throws LedgerError(invalid_argument) with a field path such as
// "events[3].scope[1]" in the message.
void validate_scenario(const Scenario& scenario);

}  // namespace erasable::simnet
