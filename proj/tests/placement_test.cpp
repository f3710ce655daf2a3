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

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "erasable/placement.hpp"
#include "support/fixtures.hpp"

namespace erasable::placement {
namespace {

using testing::Cast;
using testing::make_tx;
using testing::place;
using testing::scope_of;

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const LedgerError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return Errc::io_error;
}

TEST(Canonicalize, SortsAndDeduplicates) {
  Cast c;
  const Identity raw[] = {c.p_b, c.org_x, c.p_b, c.p_a};
  auto s = canonicalize_scope(raw);
  ASSERT_EQ(s.members.size(), 3u);
  EXPECT_EQ(s.members[0], c.org_x);
  EXPECT_EQ(s.members[1], c.p_a);
  EXPECT_EQ(s.members[2], c.p_b);
  EXPECT_TRUE(s.is_canonical());
  EXPECT_EQ(s.label(), "{did:org:x,did:person:a,did:person:b}");
}

TEST(Canonicalize, EveryPermutationGivesSameKey) {
  Cast c;
  std::vector<Identity> ids{c.org_x, c.org_y, c.p_a, c.p_b};
  std::sort(ids.begin(), ids.end());
  const auto expected = canonicalize_scope(ids).key;
  int perms = 0;
  do {
    EXPECT_EQ(canonicalize_scope(ids).key, expected);
    ++perms;
  } while (std::next_permutation(ids.begin(), ids.end()));
  EXPECT_EQ(perms, 24);
}

TEST(Canonicalize, RejectsConflictingKinds) {
  const Identity ids[] = {core::organization("did:x:1"), core::person("did:x:1")};
  EXPECT_EQ(code_of([&] { canonicalize_scope(ids); }), Errc::invalid_argument);
}

TEST(Canonicalize, RejectsMalformedId) {
  const Identity ids[] = {Identity{core::IdentityKind::person, "p_a"}};
  EXPECT_EQ(code_of([&] { canonicalize_scope(ids); }), Errc::invalid_argument);
}

TEST(PlaceTransaction, CreatesChainLazily) {
  Cast c;
  auto tree = core::make_genesis("demo", 0);
  auto [t1, r1] = place_transaction(tree, make_tx("t1", "a", {c.org_x, c.p_a}), 5);
  EXPECT_TRUE(r1.created_chain);
  EXPECT_EQ(r1.block.height, 1u);
  ASSERT_EQ(t1.chains.size(), 1u);
  const auto& chain = t1.chains.at(r1.chain_key);
  EXPECT_EQ(chain.subroot.height, 0u);
  EXPECT_EQ(chain.subroot.prev_hash, t1.genesis.block_hash);
  EXPECT_EQ(chain.blocks[0].prev_hash, chain.subroot.block_hash);
  EXPECT_EQ(chain.blocks[0].created_at, 5u);

  auto [t2, r2] = place_transaction(t1, make_tx("t2", "b", {c.p_a, c.org_x}), 6);
  EXPECT_FALSE(r2.created_chain);
  EXPECT_EQ(r2.chain_key, r1.chain_key);
  EXPECT_EQ(r2.block.height, 2u);
  EXPECT_EQ(r2.block.prev_hash, r1.block.block_hash);
  EXPECT_EQ(tree.chains.size(), 0u);
}

TEST(PlaceTransaction, SubsetScopeIsADifferentChain) {
  Cast c;
  auto tree = place(core::make_genesis("demo", 0),
                    make_tx("t1", "a", {c.org_x, c.p_a, c.p_b}), 1);
  tree = place(tree, make_tx("t2", "b", {c.p_a, c.p_b}), 2);
  tree = place(tree, make_tx("t3", "c", {c.p_a}), 3);
  EXPECT_EQ(tree.chains.size(), 3u);
  for (const auto& [key, chain] : tree.chains) {
    EXPECT_EQ(chain.blocks.size(), 1u);
  }
}

TEST(PlaceTransaction, EmptyScopeIsItsOwnChain) {
  auto tree = place(core::make_genesis("demo", 0), make_tx("t1", "a", {}), 1);
  ASSERT_EQ(tree.chains.size(), 1u);
  EXPECT_EQ(tree.chains.begin()->first, core::sha256(""));
  EXPECT_TRUE(core::verify_tree(tree).ok);
}

TEST(PlaceTransaction, RejectsDuplicateTxIdAcrossChains) {
  Cast c;
  auto tree = place(core::make_genesis("demo", 0), make_tx("t1", "a", {c.p_a}), 1);
  EXPECT_EQ(code_of([&] { place(tree, make_tx("t1", "b", {c.p_b}), 2); }),
            Errc::duplicate_transaction);
  EXPECT_TRUE(contains_transaction(tree, "t1"));
  EXPECT_FALSE(contains_transaction(tree, "t2"));
}

TEST(PlaceTransaction, RejectsNonCanonicalScope) {
  Cast c;
  core::Transaction tx{"t", "p", {}, 0};
  tx.declared_scope.members = {c.p_b, c.p_a};
  tx.declared_scope.key = core::scope_key_of(tx.declared_scope.members);
  EXPECT_EQ(code_of([&] { place(core::make_genesis("demo", 0), tx, 1); }),
            Errc::invalid_argument);
}

TEST(PlaceTransaction, Deterministic) {
  std::mt19937_64 a(5);
  std::mt19937_64 b(5);
  EXPECT_EQ(core::serialize_tree(testing::random_tree(a).tree),
            core::serialize_tree(testing::random_tree(b).tree));
}

// Each placed transaction lives in exactly one chain, the one whose scope
// equals its declared scope.
TEST(PlaceTransaction, ExclusivityProperty) {
  std::mt19937_64 rng(31);
  for (int iter = 0; iter < 200; ++iter) {
    auto rt = testing::random_tree(rng);
    for (const auto& tx : rt.placed) {
      int hits = 0;
      for (const auto& [key, chain] : rt.tree.chains) {
        for (const auto& b : chain.blocks) {
          for (const auto& t : b.transactions) {
            if (t.tx_id == tx.tx_id) {
              ++hits;
              EXPECT_EQ(chain.scope.key, tx.declared_scope.key);
              EXPECT_EQ(t.payload, tx.payload);
            }
          }
        }
      }
      EXPECT_EQ(hits, 1);
    }
    for (const auto& [key, chain] : rt.tree.chains) {
      EXPECT_EQ(key, chain.scope.key);
      EXPECT_FALSE(chain.blocks.empty());
      for (const auto& b : chain.blocks) EXPECT_EQ(b.transactions.size(), 1u);
    }
  }
}

TEST(FindChain, ExactScopeOnly) {
  Cast c;
  auto tree = place(core::make_genesis("demo", 0),
                    make_tx("t1", "a", {c.org_x, c.p_a}), 1);
  EXPECT_TRUE(find_chain(tree, scope_of({c.p_a, c.org_x})).has_value());
  EXPECT_FALSE(find_chain(tree, scope_of({c.p_a})).has_value());
}

TEST(ChainsAffectedBy, SixteenScopesSplitEightOneSeven) {
  Cast c;
  auto tree = testing::full_sixteen_tree();
  ASSERT_EQ(tree.chains.size(), 16u);
  auto a = chains_affected_by(tree, c.p_a);
  EXPECT_EQ(a.unaffected.size(), 8u);
  EXPECT_EQ(a.unilateral.size(), 1u);
  EXPECT_EQ(a.consensus_required.size(), 7u);
  EXPECT_EQ(a.unilateral[0], scope_of({c.p_a}).key);
}

TEST(ChainsAffectedBy, PartitionProperty) {
  Cast c;
  std::mt19937_64 rng(8);
  for (int iter = 0; iter < 100; ++iter) {
    auto tree = testing::random_tree(rng).tree;
    for (const auto& who : c.universe()) {
      auto a = chains_affected_by(tree, who);
      std::set<ScopeKey> all;
      all.insert(a.unaffected.begin(), a.unaffected.end());
      all.insert(a.unilateral.begin(), a.unilateral.end());
      all.insert(a.consensus_required.begin(), a.consensus_required.end());
      EXPECT_EQ(all.size(), tree.chains.size());
      EXPECT_EQ(a.unaffected.size() + a.unilateral.size() +
                    a.consensus_required.size(),
                tree.chains.size());
      EXPECT_LE(a.unilateral.size(), 1u);
    }
  }
}

TEST(MaxBranchCount, MatchesPowersetEnumeration) {
  EXPECT_EQ(max_branch_count(2, 2), 16u);
  for (int k = 0; k <= 8; ++k) {
    for (int m = 0; k + m <= 16 && m <= 8; ++m) {
      std::vector<Identity> ids;
      for (int i = 0; i < k; ++i) ids.push_back(core::organization("did:org:o" + std::to_string(i)));
      for (int i = 0; i < m; ++i) ids.push_back(core::person("did:person:p" + std::to_string(i)));
      std::set<ScopeKey> distinct;
      for (const auto& s : testing::powerset(ids)) distinct.insert(s.key);
      EXPECT_EQ(max_branch_count(k, m), distinct.size()) << k << "," << m;
    }
  }
}

TEST(MaxBranchCount, Bounds) {
  EXPECT_EQ(max_branch_count(0, 0), 1u);
  EXPECT_EQ(max_branch_count(31, 31), std::uint64_t{1} << 62);
  EXPECT_EQ(code_of([] { max_branch_count(-1, 2); }), Errc::out_of_range);
  EXPECT_EQ(code_of([] { max_branch_count(40, 23); }), Errc::out_of_range);
}

}  // namespace
}  // namespace erasable::placement
