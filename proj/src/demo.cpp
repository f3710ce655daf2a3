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

#include <algorithm>
#include <ostream>

#include "erasable/cli.hpp"
#include "erasable/placement.hpp"
#include "erasable/simnet.hpp"

namespace erasable::cli {

namespace {

using core::Identity;

constexpr const char* kEraseId = "erase-pa";

struct Cast {
  Identity org_x = core::organization("did:org:x");
  Identity org_y = core::organization("did:org:y");
  Identity p_a = core::person("did:person:a");
  Identity p_b = core::person("did:person:b");
};

struct DemoTx {
  std::string tx_id;
  std::string payload;
  std::vector<Identity> scope;
};

std::vector<DemoTx> demo_transactions(const Cast& c, bool sparse) {
  // B_1 first: p_a's transfer to p_b.
  std::vector<DemoTx> txs{
      {"B_1", "transfer 10 units from p_a to p_b", {c.p_a, c.p_b}}};
  if (sparse) {
    txs.push_back({"B_2", "p_a opens an account at Org_x", {c.org_x, c.p_a}});
    txs.push_back({"B_3", "p_a updates contact details", {c.p_a}});
    txs.push_back({"B_4", "Org_x invoices Org_y", {c.org_x, c.org_y}});
    txs.push_back({"B_5", "p_b signs a contract with Org_y", {c.org_y, c.p_b}});
    return txs;
  }
  const std::vector<Identity> universe{c.org_x, c.org_y, c.p_a, c.p_b};
  int n = 2;
  for (unsigned mask = 0; mask < 16; ++mask) {
    if (mask == 0b1100) continue;  // {p_a, p_b} is B_1
    std::vector<Identity> scope;
    for (unsigned bit = 0; bit < 4; ++bit) {
      if (mask & (1u << bit)) scope.push_back(universe[bit]);
    }
    auto label = placement::canonicalize_scope(scope).label();
    txs.push_back({"B_" + std::to_string(n++), "statement about " + label,
                   std::move(scope)});
  }
  return txs;
}

core::LedgerTree build_tree(const std::vector<DemoTx>& txs) {
  auto tree = core::make_genesis("demo", 0);
  core::Tick tick = 1;
  for (const auto& t : txs) {
    core::Transaction tx{t.tx_id, t.payload,
                         placement::canonicalize_scope(t.scope), tick};
    tree = placement::place_transaction(tree, tx, tick).first;
    ++tick;
  }
  return tree;
}

std::string request_id_for(const core::ScopeKey& key) {
  return std::string(kEraseId) + "/" + core::to_hex(key).substr(0, 16);
}

std::vector<core::ScopeKey> by_label(const core::LedgerTree& tree,
                                     std::vector<core::ScopeKey> keys) {
  std::sort(keys.begin(), keys.end(),
            [&](const core::ScopeKey& a, const core::ScopeKey& b) {
              return tree.chains.at(a).scope.label() <
                     tree.chains.at(b).scope.label();
            });
  return keys;
}

}  // namespace

simnet::Scenario demo_scenario(consensus::SilenceMode policy, bool sparse) {
  Cast c;
  simnet::Scenario s;
  s.network_id = "demo";
  s.organizations = {c.org_x, c.org_y};
  s.persons = {c.p_a, c.p_b};
  s.guardians = {{c.p_a, c.org_x}, {c.p_b, c.org_y}};
  s.network = {.delay_min = 1, .delay_max = 3, .seed = 7};

  // Org_y objects to erasing its own dealings with p_a and stays silent
  // on everything else.
  const Identity y_a[] = {c.org_y, c.p_a};
  simnet::Behavior org_y;
  org_y.kind = simnet::Behavior::Kind::scripted;
  org_y.script.push_back(
      {request_id_for(placement::canonicalize_scope(y_a).key),
       consensus::VoteChoice::veto});
  s.nodes = {
      {"node-1", c.org_x, {}},
      {"node-2", c.org_x, {}},
      {"node-3", c.org_y, org_y},
      {"node-4", c.org_y, {simnet::Behavior::Kind::silent, {}}},
  };

  core::Tick tick = 1;
  for (auto& t : demo_transactions(c, sparse)) {
    s.events.push_back({tick++, simnet::SubmitTx{t.tx_id, t.payload, t.scope}});
  }
  simnet::Erase erase;
  erase.id = kEraseId;
  erase.subject = c.p_a;
  erase.mode = consensus::ErasureMode::delete_account;
  erase.strategy = consensus::EndorserStrategy::scope_plus_guardians;
  erase.policy = {policy, 20};
  s.events.push_back({100, erase});
  return s;
}

int cmd_demo(const DemoOptions& options, std::ostream& out) {
  Cast c;
  const auto txs = demo_transactions(c, options.sparse);
  const auto tree = build_tree(txs);
  const auto affected = placement::chains_affected_by(tree, c.p_a);

  out << "network demo: organizations=2 persons=2 branch bound="
      << placement::max_branch_count(2, 2) << "\n";
  out << "materialized chains: " << tree.chains.size() << "\n";
  out << "erase " << c.p_a.id << ": unaffected=" << affected.unaffected.size()
      << " unilateral=" << affected.unilateral.size()
      << " consensus_required=" << affected.consensus_required.size() << "\n";

  const Identity ab[] = {c.p_a, c.p_b};
  const auto b1_scope = placement::canonicalize_scope(ab);
  consensus::Membership membership;
  membership.join(c.org_x);
  membership.join(c.org_y);
  consensus::GuardianRegistry guardians;
  guardians.assign(c.p_a, c.org_x);
  guardians.assign(c.p_b, c.org_y);
  auto b1_endorsers = consensus::select_endorsers(
      tree, b1_scope, membership, guardians,
      consensus::EndorserStrategy::scope_plus_guardians);
  out << "B_1 " << b1_scope.label() << " endorsers={";
  bool first = true;
  for (const auto& e : b1_endorsers) {
    out << (first ? "" : ",") << e.id;
    first = false;
  }
  out << "} (" << c.org_y.id << " votes as guardian of " << c.p_b.id << ")\n";

  std::vector<consensus::SilenceMode> policies;
  if (options.policy) {
    policies.push_back(*options.policy);
  } else {
    policies = {consensus::SilenceMode::silence_is_veto,
                consensus::SilenceMode::silence_is_agreement};
  }

  bool all_converged = true;
  for (auto policy : policies) {
    auto result = simnet::run_scenario(demo_scenario(policy, options.sparse),
                                       {.verify_each_event = true});
    out << "\npolicy " << consensus::to_string(policy) << ":\n";

    auto print_entry = [&](const core::ScopeKey& key, std::string_view cls) {
      const auto& scope = tree.chains.at(key).scope;
      out << "  " << scope.label() << " " << cls << " ";
      auto it = result.rounds.find(request_id_for(key));
      if (it == result.rounds.end()) {
        out << "not requested\n";
        return;
      }
      const auto& d = it->second.decision();
      out << consensus::to_string(d.state) << " (" << d.reason << ")\n";
    };
    for (const auto& key : by_label(tree, affected.unilateral)) {
      print_entry(key, "unilateral");
    }
    for (const auto& key : by_label(tree, affected.consensus_required)) {
      print_entry(key, "consensus_required");
    }

    const auto& final_tree = result.nodes.front().replica;
    std::vector<core::ScopeKey> surviving;
    for (const auto& [key, chain] : final_tree.chains) surviving.push_back(key);
    out << "  surviving chains (" << surviving.size() << "):\n";
    for (const auto& key : by_label(final_tree, surviving)) {
      const auto& chain = final_tree.chains.at(key);
      out << "    " << chain.scope.label() << " blocks=" << chain.blocks.size()
          << "\n";
    }
    const bool converged = simnet::check_convergence(result.nodes) &&
                           result.verify_failures == 0;
    all_converged = all_converged && converged;
    out << "  replicas converged: " << (converged ? "yes" : "no") << "\n";
  }
  return all_converged ? kExitOk : kExitFailure;
}

}  // namespace erasable::cli
