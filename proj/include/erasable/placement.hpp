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

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "erasable/core.hpp"

namespace erasable::placement {

using core::ContextChain;
using core::Identity;
using core::LedgerTree;
using core::Scope;
using core::ScopeKey;
using core::Tick;
using core::Transaction;

struct PlacementResult {
  ScopeKey chain_key{};
  bool created_chain = false;
  core::Block block;
};

// Deduplicates and sorts. Throws invalid_argument naming a malformed id, or
// when one id is declared with two different kinds.
Scope canonicalize_scope(std::span<const Identity> identities);

// Appends `tx` as a single-transaction block to the chain whose scope equals
// tx.declared_scope exactly, creating the subroot on first use.
std::pair<LedgerTree, PlacementResult> place_transaction(
    const LedgerTree& tree, const Transaction& tx, Tick now);

std::optional<ContextChain> find_chain(const LedgerTree& tree,
                                       const Scope& scope);

bool contains_transaction(const LedgerTree& tree, std::string_view tx_id);

struct AffectedChains {
  std::vector<ScopeKey> unaffected;
  std::vector<ScopeKey> unilateral;
  std::vector<ScopeKey> consensus_required;
};

AffectedChains chains_affected_by(const LedgerTree& tree, const Identity& who);

// 2^(k+m): the number of distinct scopes over k organizations and m persons.
// Throws out_of_range when k or m is negative or k+m > 62.
std::uint64_t max_branch_count(int k, int m);

}  // namespace erasable::placement
