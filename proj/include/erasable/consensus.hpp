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

// Deletion consensus.
//
// A context chain whose scope holds more than one party may only be deleted
// when every endorser agrees. Any endorser can veto; silence is resolved by
// the request's policy once its deadline (created_at + timeout) has passed.
// Single-member chains are deleted without consensus: their request carries
// an empty endorser set and evaluates to approved immediately.

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "erasable/core.hpp"
#include "erasable/placement.hpp"

namespace erasable::consensus {

using core::Identity;
using core::LedgerTree;
using core::Scope;
using core::ScopeKey;
using core::Tick;

// Persons who run no node are represented by organizations.
class GuardianRegistry {
 public:
  // Throws invalid_argument unless `person` is a person and `org` an
  // organization.
  void assign(const Identity& person, const Identity& org);

  std::set<Identity> guardians_of(const Identity& person) const;
  bool is_guardian_of(const Identity& org, const Identity& person) const;
  const std::map<Identity, std::set<Identity>>& entries() const {
    return entries_;
  }

 private:
  std::map<Identity, std::set<Identity>> entries_;
};

struct Membership {
  std::set<Identity> current;
  // Organizations that acknowledged appends to each chain. May name
  // organizations that have since left.
  std::map<ScopeKey, std::set<Identity>> endorsement_history;

  void join(const Identity& org) { current.insert(org); }
  void leave(const Identity& org) { current.erase(org); }
  void record_endorsement(const ScopeKey& chain, const Identity& org) {
    endorsement_history[chain].insert(org);
  }
};

enum class EndorserStrategy {
  historical_endorsers,
  scope_plus_guardians,
  all_organizations,
};

enum class SilenceMode { silence_is_veto, silence_is_agreement };

struct EndorsementPolicy {
  SilenceMode mode = SilenceMode::silence_is_veto;
  Tick timeout = 1;
};

std::string_view to_string(EndorserStrategy s);
std::string_view to_string(SilenceMode m);
// Accept the to_string forms; throw invalid_argument otherwise.
EndorserStrategy parse_strategy(std::string_view text);
SilenceMode parse_silence_mode(std::string_view text);

struct DeletionRequest {
  std::string request_id;
  Identity requester;
  ScopeKey target_chain{};
  bool keep_subroot = true;
  EndorserStrategy strategy = EndorserStrategy::scope_plus_guardians;
  EndorsementPolicy policy;
  std::set<Identity> endorsers;
  Tick created_at = 0;

  Tick deadline() const { return created_at + policy.timeout; }
};

enum class VoteChoice { approve, veto };

struct Vote {
  Identity voter;
  std::string request_id;
  VoteChoice decision = VoteChoice::approve;
  Tick at = 0;
};

enum class DecisionState { pending, approved, vetoed };

std::string_view to_string(DecisionState s);

struct Decision {
  DecisionState state = DecisionState::pending;
  std::string reason;

  bool terminal() const { return state != DecisionState::pending; }
};

std::set<Identity> select_endorsers(const LedgerTree& tree, const Scope& scope,
                                    const Membership& membership,
                                    const GuardianRegistry& guardians,
                                    EndorserStrategy strategy);

// Throws not_found (unknown chain), forbidden (requester neither in scope
// nor a guardian of a person in it), unguarded_scope, or invalid_argument
// (timeout of zero).
DeletionRequest open_deletion_request(
    std::string request_id, const LedgerTree& tree, const ScopeKey& chain_key,
    const Identity& requester, bool keep_subroot, EndorserStrategy strategy,
    const EndorsementPolicy& policy, const Membership& membership,
    const GuardianRegistry& guardians, Tick now);

// Pure evaluation of a request against the votes received so far. A veto
// always wins. Under silence_is_veto an approval only counts if cast by the
// deadline.
Decision evaluate(const DeletionRequest& request, std::span<const Vote> votes,
                  Tick now);

// Latching reducer around evaluate(): once approved or vetoed, later votes
// are refused and the decision never changes.
class ConsensusRound {
 public:
  explicit ConsensusRound(DeletionRequest request);

  const DeletionRequest& request() const { return request_; }
  const Decision& decision() const { return decision_; }
  const std::vector<Vote>& votes() const { return votes_; }

  // False if the round was already decided and the vote was dropped.
  // Throws duplicate_vote / not_an_endorser like evaluate().
  bool record_vote(const Vote& vote, Tick now);
  const Decision& advance(Tick now);

 private:
  DeletionRequest request_;
  std::vector<Vote> votes_;
  Decision decision_;
};

// Returns the tree without the chain (keep_subroot=false) or with the chain
// reduced to its subroot. Throws not_found.
LedgerTree apply_deletion(const LedgerTree& tree, const ScopeKey& chain_key,
                          bool keep_subroot);

enum class ErasureMode { data_only, delete_account };
enum class Classification { unilateral, consensus_required };

std::string_view to_string(ErasureMode m);
std::string_view to_string(Classification c);
ErasureMode parse_erasure_mode(std::string_view text);

struct ErasureEntry {
  ScopeKey chain_key{};
  Classification classification = Classification::consensus_required;
  std::optional<DeletionRequest> request;
  // Set instead of `request` when the request could not be formed.
  std::optional<std::string> error;
};

struct ErasurePlan {
  Identity subject;
  ErasureMode mode = ErasureMode::data_only;
  std::vector<ErasureEntry> per_chain;
};

// Request ids are "<request_prefix>/<first 16 hex digits of the chain key>".
ErasurePlan plan_erasure(const LedgerTree& tree, const Identity& subject,
                         ErasureMode mode, EndorserStrategy strategy,
                         const EndorsementPolicy& policy,
                         const Membership& membership,
                         const GuardianRegistry& guardians, Tick now,
                         const std::string& request_prefix = "erase");

// One row of a replica's deletion journal. Holds no member identities.
struct DeletionRecord {
  std::string request_id;
  ScopeKey chain_key{};
  bool keep_subroot = true;
  Tick decided_at = 0;

  friend bool operator==(const DeletionRecord&,
                         const DeletionRecord&) = default;
};

}  // namespace erasable::consensus
