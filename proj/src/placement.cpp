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

#include "erasable/placement.hpp"

#include <algorithm>

namespace erasable::placement {

Scope canonicalize_scope(std::span<const Identity> identities) {
  std::vector<Identity> members;
  members.reserve(identities.size());
  for (const auto& who : identities) {
    if (!core::is_valid_did(who.id)) {
      throw LedgerError(Errc::invalid_argument,
                        "malformed identifier '" + who.id + "'");
    }
    members.push_back(who);
  }
  std::stable_sort(members.begin(), members.end());
  for (std::size_t i = 1; i < members.size(); ++i) {
    if (members[i] == members[i - 1] && members[i].kind != members[i - 1].kind) {
      throw LedgerError(Errc::invalid_argument,
                        "identifier '" + members[i].id +
                            "' declared as both organization and person");
    }
  }
  members.erase(std::unique(members.begin(), members.end()), members.end());

  Scope scope;
  scope.key = core::scope_key_of(members);
  scope.members = std::move(members);
  return scope;
}

bool contains_transaction(const LedgerTree& tree, std::string_view tx_id) {
  for (const auto& [key, chain] : tree.chains) {
    for (const auto& block : chain.blocks) {
      for (const auto& tx : block.transactions) {
        if (tx.tx_id == tx_id) return true;
      }
    }
  }
  return false;
}

std::pair<LedgerTree, PlacementResult> place_transaction(
    const LedgerTree& tree, const Transaction& tx, Tick now) {
  if (!tx.declared_scope.is_canonical()) {
    throw LedgerError(Errc::invalid_argument,
                      "transaction " + tx.tx_id +
                          " declares a non-canonical scope " +
                          tx.declared_scope.label());
  }
  if (contains_transaction(tree, tx.tx_id)) {
    throw LedgerError(Errc::duplicate_transaction,
                      "transaction " + tx.tx_id + " already in the ledger");
  }

  LedgerTree next = tree;
  PlacementResult result;
  result.chain_key = tx.declared_scope.key;

  auto it = next.chains.find(tx.declared_scope.key);
  if (it == next.chains.end()) {
    core::ContextChain chain;
    chain.scope = tx.declared_scope;
    chain.subroot = core::make_subroot(next, tx.declared_scope, now);
    it = next.chains.emplace(tx.declared_scope.key, std::move(chain)).first;
    result.created_chain = true;
  }
  core::ContextChain& chain = it->second;

  core::Block block;
  block.chain_key = chain.scope.key;
  block.height = chain.blocks.size() + 1;
  block.prev_hash = chain.head_hash();
  block.transactions.push_back(tx);
  block.created_at = now;
  block.block_hash = core::hash_block(block);
  chain.blocks.push_back(block);

  result.block = std::move(block);
  return {std::move(next), std::move(result)};
}

std::optional<ContextChain> find_chain(const LedgerTree& tree,
                                       const Scope& scope) {
  auto it = tree.chains.find(scope.key);
  if (it == tree.chains.end()) return std::nullopt;
  return it->second;
}

AffectedChains chains_affected_by(const LedgerTree& tree, const Identity& who) {
  AffectedChains out;
  for (const auto& [key, chain] : tree.chains) {
    const auto& members = chain.scope.members;
    if (!chain.scope.contains(who)) {
      out.unaffected.push_back(key);
    } else if (members.size() == 1) {
      out.unilateral.push_back(key);
    } else {
      out.consensus_required.push_back(key);
    }
  }
  return out;
}

std::uint64_t max_branch_count(int k, int m) {
  if (k < 0 || m < 0 || k + m > 62) {
    throw LedgerError(Errc::out_of_range,
                      "branch count defined for k, m >= 0 and k+m <= 62; got "
                      "k=" + std::to_string(k) + " m=" + std::to_string(m));
  }
  return std::uint64_t{1} << (k + m);
}

}  // namespace erasable::placement
