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

#include "erasable/scenario.hpp"

#include <map>
#include <set>

namespace erasable::simnet {

std::string_view to_string(Behavior::Kind kind) {
  switch (kind) {
    case Behavior::Kind::approve_all: return "approve_all";
    case Behavior::Kind::veto_all: return "veto_all";
    case Behavior::Kind::silent: return "silent";
    case Behavior::Kind::scripted: return "scripted";
  }
  return "unknown";
}

namespace {

[[noreturn]] void reject(const std::string& field, const std::string& what) {
  throw LedgerError(Errc::invalid_argument, field + ": " + what);
}

std::string at(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

class Declared {
 public:
  void add(const Identity& who, const std::string& field) {
    if (!core::is_valid_did(who.id)) {
      reject(field, "malformed identifier '" + who.id + "'");
    }
    if (!kinds_.emplace(who.id, who.kind).second) {
      reject(field, "identity '" + who.id + "' declared twice");
    }
  }

  void require(const Identity& who, core::IdentityKind kind,
               const std::string& field) const {
    auto it = kinds_.find(who.id);
    if (it == kinds_.end()) {
      reject(field, "undeclared identity '" + who.id + "'");
    }
    if (it->second != kind) {
      reject(field, "'" + who.id + "' is not declared as " +
                        std::string(core::to_string(kind)));
    }
  }

  // Any declared kind, but it must match the one given.
  void require_any(const Identity& who, const std::string& field) const {
    auto it = kinds_.find(who.id);
    if (it == kinds_.end()) {
      reject(field, "undeclared identity '" + who.id + "'");
    }
    if (who.kind != it->second) {
      reject(field, "kind mismatch for '" + who.id + "'");
    }
  }

 private:
  std::map<std::string, core::IdentityKind> kinds_;
};

}  // namespace

void validate_scenario(const Scenario& s) {
  using core::IdentityKind;
  if (s.network_id.empty()) reject("network_id", "must be non-empty");

  Declared declared;
  for (std::size_t i = 0; i < s.organizations.size(); ++i) {
    if (!s.organizations[i].is_organization()) {
      reject(at("organizations", i), "not an organization");
    }
    declared.add(s.organizations[i], at("organizations", i));
  }
  for (std::size_t i = 0; i < s.persons.size(); ++i) {
    if (!s.persons[i].is_person()) reject(at("persons", i), "not a person");
    declared.add(s.persons[i], at("persons", i));
  }
  for (std::size_t i = 0; i < s.guardians.size(); ++i) {
    declared.require(s.guardians[i].first, IdentityKind::person,
                     at("guardians", i) + ".person");
    declared.require(s.guardians[i].second, IdentityKind::organization,
                     at("guardians", i) + ".guardian");
  }

  if (s.nodes.empty()) reject("nodes", "at least one node is required");
  std::set<std::string> node_ids;
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    const auto& n = s.nodes[i];
    const auto field = at("nodes", i);
    if (n.node_id.empty()) reject(field + ".id", "must be non-empty");
    if (!node_ids.insert(n.node_id).second) {
      reject(field + ".id", "duplicate node id '" + n.node_id + "'");
    }
    declared.require(n.operator_org, IdentityKind::organization,
                     field + ".operator");
    if (n.behavior.kind != Behavior::Kind::scripted &&
        !n.behavior.script.empty()) {
      reject(field + ".script", "only scripted nodes take a script");
    }
    for (std::size_t j = 0; j < n.behavior.script.size(); ++j) {
      if (n.behavior.script[j].request.empty()) {
        reject(at(field + ".script", j) + ".request", "must be non-empty");
      }
    }
  }

  const auto& net = s.network;
  if (net.delay_min > net.delay_max) {
    reject("network.delay_min", "must not exceed delay_max");
  }
  if (net.drop_denominator == 0) {
    reject("network.drop_probability", "zero denominator");
  }
  if (net.drop_numerator > net.drop_denominator) {
    reject("network.drop_probability", "must lie in [0, 1]");
  }

  for (std::size_t i = 0; i < s.events.size(); ++i) {
    const auto field = at("events", i);
    const auto& action = s.events[i].action;
    if (const auto* tx = std::get_if<SubmitTx>(&action)) {
      if (tx->tx_id.empty()) reject(field + ".tx_id", "must be non-empty");
      for (std::size_t j = 0; j < tx->scope.size(); ++j) {
        declared.require_any(tx->scope[j], at(field + ".scope", j));
      }
    } else if (const auto* e = std::get_if<Erase>(&action)) {
      if (e->id.empty()) reject(field + ".id", "must be non-empty");
      declared.require(e->subject, IdentityKind::person, field + ".subject");
      if (e->policy.timeout == 0) {
        reject(field + ".timeout", "must be positive");
      }
    } else if (const auto* m = std::get_if<MembershipChange>(&action)) {
      declared.require(m->org, IdentityKind::organization, field + ".org");
    } else if (const auto* v = std::get_if<CastVote>(&action)) {
      declared.require(v->voter, IdentityKind::organization, field + ".voter");
      if (v->request.empty()) reject(field + ".request", "must be non-empty");
    }
  }
}

}  // namespace erasable::simnet
