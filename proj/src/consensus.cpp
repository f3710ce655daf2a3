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

#include "erasable/consensus.hpp"

#include <algorithm>
#include <iterator>

namespace erasable::consensus {

void GuardianRegistry::assign(const Identity& person, const Identity& org) {
  if (!person.is_person()) {
    throw LedgerError(Errc::invalid_argument,
                      "guardianship key '" + person.id + "' is not a person");
  }
  if (!org.is_organization()) {
    throw LedgerError(Errc::invalid_argument,
                      "guardian '" + org.id + "' is not an organization");
  }
  entries_[person].insert(org);
}

std::set<Identity> GuardianRegistry::guardians_of(const Identity& person) const {
  auto it = entries_.find(person);
  return it == entries_.end() ? std::set<Identity>{} : it->second;
}

bool GuardianRegistry::is_guardian_of(const Identity& org,
                                      const Identity& person) const {
  auto it = entries_.find(person);
  return it != entries_.end() && it->second.contains(org);
}

std::string_view to_string(EndorserStrategy s) {
  switch (s) {
    case EndorserStrategy::historical_endorsers: return "historical_endorsers";
    case EndorserStrategy::scope_plus_guardians: return "scope_plus_guardians";
    case EndorserStrategy::all_organizations: return "all_organizations";
  }
  return "unknown";
}

std::string_view to_string(SilenceMode m) {
  return m == SilenceMode::silence_is_veto ? "silence_is_veto"
                                           : "silence_is_agreement";
}

std::string_view to_string(DecisionState s) {
  switch (s) {
    case DecisionState::pending: return "pending";
    case DecisionState::approved: return "approved";
    case DecisionState::vetoed: return "vetoed";
  }
  return "unknown";
}

std::string_view to_string(ErasureMode m) {
  return m == ErasureMode::data_only ? "data_only" : "delete_account";
}

std::string_view to_string(Classification c) {
  return c == Classification::unilateral ? "unilateral" : "consensus_required";
}

EndorserStrategy parse_strategy(std::string_view text) {
  for (auto s : {EndorserStrategy::historical_endorsers,
                 EndorserStrategy::scope_plus_guardians,
                 EndorserStrategy::all_organizations}) {
    if (text == to_string(s)) return s;
  }
  throw LedgerError(Errc::invalid_argument,
                    "unknown endorser strategy '" + std::string(text) + "'");
}

SilenceMode parse_silence_mode(std::string_view text) {
  for (auto m : {SilenceMode::silence_is_veto, SilenceMode::silence_is_agreement}) {
    if (text == to_string(m)) return m;
  }
  throw LedgerError(Errc::invalid_argument,
                    "unknown silence mode '" + std::string(text) + "'");
}

ErasureMode parse_erasure_mode(std::string_view text) {
  for (auto m : {ErasureMode::data_only, ErasureMode::delete_account}) {
    if (text == to_string(m)) return m;
  }
  throw LedgerError(Errc::invalid_argument,
                    "unknown erasure mode '" + std::string(text) + "'");
}

namespace {

const core::ContextChain& chain_or_throw(const LedgerTree& tree,
                                         const ScopeKey& key) {
  auto it = tree.chains.find(key);
  if (it == tree.chains.end()) {
    throw LedgerError(Errc::not_found,
                      "no chain with key " + core::to_hex(key));
  }
  return it->second;
}

std::set<Identity> intersect(const std::set<Identity>& a,
                             const std::set<Identity>& b) {
  std::set<Identity> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.end()));
  return out;
}

}  // namespace

std::set<Identity> select_endorsers(const LedgerTree& tree, const Scope& scope,
                                    const Membership& membership,
                                    const GuardianRegistry& guardians,
                                    EndorserStrategy strategy) {
  chain_or_throw(tree, scope.key);

  std::set<Identity> candidates;
  switch (strategy) {
    case EndorserStrategy::historical_endorsers: {
      auto it = membership.endorsement_history.find(scope.key);
      if (it != membership.endorsement_history.end()) candidates = it->second;
      break;
    }
    case EndorserStrategy::scope_plus_guardians:
      for (const auto& m : scope.members) {
        if (m.is_organization()) {
          candidates.insert(m);
        } else {
          auto g = guardians.guardians_of(m);
          candidates.insert(g.begin(), g.end());
        }
      }
      break;
    case EndorserStrategy::all_organizations:
      candidates = membership.current;
      break;
  }
  auto endorsers = intersect(candidates, membership.current);

  if (endorsers.empty() && scope.members.size() > 1) {
    throw LedgerError(Errc::unguarded_scope,
                      "no endorser available for chain " + scope.label() +
                          " under " + std::string(to_string(strategy)));
  }
  return endorsers;
}

DeletionRequest open_deletion_request(
    std::string request_id, const LedgerTree& tree, const ScopeKey& chain_key,
    const Identity& requester, bool keep_subroot, EndorserStrategy strategy,
    const EndorsementPolicy& policy, const Membership& membership,
    const GuardianRegistry& guardians, Tick now) {
  const auto& chain = chain_or_throw(tree, chain_key);
  if (policy.timeout == 0) {
    throw LedgerError(Errc::invalid_argument, "policy timeout must be > 0");
  }

  bool authorized = chain.scope.contains(requester);
  if (!authorized && requester.is_organization()) {
    authorized = std::any_of(
        chain.scope.members.begin(), chain.scope.members.end(),
        [&](const Identity& m) {
          return m.is_person() && guardians.is_guardian_of(requester, m);
        });
  }
  if (!authorized) {
    throw LedgerError(Errc::forbidden,
                      requester.id + " may not request deletion of " +
                          chain.scope.label());
  }

  DeletionRequest req;
  req.request_id = std::move(request_id);
  req.requester = requester;
  req.target_chain = chain_key;
  req.keep_subroot = keep_subroot;
  req.strategy = strategy;
  req.policy = policy;
  req.created_at = now;
  if (chain.scope.members.size() > 1) {
    req.endorsers =
        select_endorsers(tree, chain.scope, membership, guardians, strategy);
  }
  return req;
}

namespace {

void validate_votes(const DeletionRequest& request,
                    std::span<const Vote> votes) {
  std::set<Identity> seen;
  for (const auto& v : votes) {
    if (v.request_id != request.request_id) {
      throw LedgerError(Errc::invalid_argument,
                        "vote for " + v.request_id + " applied to " +
                            request.request_id);
    }
    if (!request.endorsers.contains(v.voter)) {
      throw LedgerError(Errc::not_an_endorser,
                        v.voter.id + " is not an endorser of " +
                            request.request_id);
    }
    if (!seen.insert(v.voter).second) {
      throw LedgerError(Errc::duplicate_vote,
                        v.voter.id + " voted twice on " + request.request_id);
    }
    if (v.at < request.created_at) {
      throw LedgerError(Errc::invalid_argument,
                        "vote by " + v.voter.id + " predates the request");
    }
  }
}

}  // namespace

Decision evaluate(const DeletionRequest& request, std::span<const Vote> votes,
                  Tick now) {
  validate_votes(request, votes);

  for (const auto& v : votes) {
    if (v.decision == VoteChoice::veto) {
      return {DecisionState::vetoed, "veto by " + v.voter.id};
    }
  }

  const Tick deadline = request.deadline();
  const bool strict = request.policy.mode == SilenceMode::silence_is_veto;
  std::set<Identity> approved;
  for (const auto& v : votes) {
    if (!strict || v.at <= deadline) approved.insert(v.voter);
  }

  if (approved == request.endorsers) {
    return {DecisionState::approved,
            request.endorsers.empty() ? "no endorsers required"
                                      : "all endorsers approved"};
  }
  if (now <= deadline) return {DecisionState::pending, "awaiting endorsers"};

  if (!strict) return {DecisionState::approved, "timeout without veto"};
  for (const auto& e : request.endorsers) {
    if (!approved.contains(e)) {
      return {DecisionState::vetoed, "silent endorser " + e.id};
    }
  }
  return {DecisionState::vetoed, "silent endorser"};
}

ConsensusRound::ConsensusRound(DeletionRequest request)
    : request_(std::move(request)) {
  decision_ = evaluate(request_, votes_, request_.created_at);
}

bool ConsensusRound::record_vote(const Vote& vote, Tick now) {
  if (decision_.terminal()) return false;
  std::vector<Vote> next = votes_;
  next.push_back(vote);
  Decision d = evaluate(request_, next, now);
  votes_ = std::move(next);
  decision_ = std::move(d);
  return true;
}

const Decision& ConsensusRound::advance(Tick now) {
  if (!decision_.terminal()) decision_ = evaluate(request_, votes_, now);
  return decision_;
}

LedgerTree apply_deletion(const LedgerTree& tree, const ScopeKey& chain_key,
                          bool keep_subroot) {
  chain_or_throw(tree, chain_key);
  LedgerTree next = tree;
  if (keep_subroot) {
    next.chains.at(chain_key).blocks.clear();
  } else {
    next.chains.erase(chain_key);
  }
  return next;
}

ErasurePlan plan_erasure(const LedgerTree& tree, const Identity& subject,
                         ErasureMode mode, EndorserStrategy strategy,
                         const EndorsementPolicy& policy,
                         const Membership& membership,
                         const GuardianRegistry& guardians, Tick now,
                         const std::string& request_prefix) {
  if (!subject.is_person()) {
    throw LedgerError(Errc::invalid_argument,
                      "erasure subject " + subject.id + " is not a person");
  }
  ErasurePlan plan;
  plan.subject = subject;
  plan.mode = mode;

  auto affected = placement::chains_affected_by(tree, subject);
  auto add = [&](const ScopeKey& key, Classification c) {
    ErasureEntry entry;
    entry.chain_key = key;
    entry.classification = c;
    try {
      entry.request = open_deletion_request(
          request_prefix + "/" + core::to_hex(key).substr(0, 16), tree, key,
          subject, mode == ErasureMode::data_only, strategy, policy,
          membership, guardians, now);
    } catch (const LedgerError& e) {
      if (e.code() != Errc::unguarded_scope) throw;
      entry.error = e.what();
    }
    plan.per_chain.push_back(std::move(entry));
  };
  for (const auto& k : affected.unilateral) add(k, Classification::unilateral);
  for (const auto& k : affected.consensus_required) {
    add(k, Classification::consensus_required);
  }
  return plan;
}

}  // namespace erasable::consensus
