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

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "erasable/core.hpp"
#include "erasable/placement.hpp"

namespace erasable::testing {

struct Cast {
  core::Identity org_x = core::organization("did:org:x");
  core::Identity org_y = core::organization("did:org:y");
  core::Identity org_z = core::organization("did:org:z");
  core::Identity p_a = core::person("did:person:a");
  core::Identity p_b = core::person("did:person:b");
  core::Identity p_c = core::person("did:person:c");

  std::vector<core::Identity> universe() const {
    return {org_x, org_y, org_z, p_a, p_b, p_c};
  }
};

inline core::Scope scope_of(std::vector<core::Identity> ids) {
  return placement::canonicalize_scope(ids);
}

inline core::Transaction make_tx(std::string id, std::string payload,
                                 std::vector<core::Identity> scope,
                                 core::Tick at = 0) {
  return core::Transaction{std::move(id), std::move(payload),
                           scope_of(std::move(scope)), at};
}

inline core::LedgerTree place(core::LedgerTree tree,
                              const core::Transaction& tx, core::Tick now) {
  return placement::place_transaction(tree, tx, now).first;
}

// All 2^n subsets of `ids`, as scopes.
inline std::vector<core::Scope> powerset(const std::vector<core::Identity>& ids) {
  std::vector<core::Scope> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << ids.size()); ++mask) {
    std::vector<core::Identity> members;
    for (std::size_t bit = 0; bit < ids.size(); ++bit) {
      if (mask >> bit & 1) members.push_back(ids[bit]);
    }
    out.push_back(scope_of(members));
  }
  return out;
}

// A tree holding one transaction in each of the 16 scopes over
// {Org_x, Org_y, p_a, p_b}.
inline core::LedgerTree full_sixteen_tree() {
  Cast c;
  auto tree = core::make_genesis("demo", 0);
  core::Tick tick = 1;
  for (const auto& scope : powerset({c.org_x, c.org_y, c.p_a, c.p_b})) {
    core::Transaction tx{"tx-" + std::to_string(tick),
                         "payload " + scope.label(), scope, tick};
    tree = place(tree, tx, tick);
    ++tick;
  }
  return tree;
}

struct RandomTree {
  core::LedgerTree tree;
  std::vector<core::Transaction> placed;
};

// Up to `max_identities` identities from the cast and up to `max_txs`
// transactions with uniformly drawn scopes.
inline RandomTree random_tree(std::mt19937_64& rng, std::size_t max_identities = 6,
                              std::size_t max_txs = 40) {
  Cast c;
  auto universe = c.universe();
  std::shuffle(universe.begin(), universe.end(), rng);
  universe.resize(std::uniform_int_distribution<std::size_t>(
      1, std::min(max_identities, universe.size()))(rng));
  const auto n_txs = std::uniform_int_distribution<std::size_t>(1, max_txs)(rng);

  RandomTree out;
  out.tree = core::make_genesis("prop", 0);
  for (std::size_t i = 0; i < n_txs; ++i) {
    std::vector<core::Identity> members;
    for (const auto& who : universe) {
      if (rng() & 1) members.push_back(who);
    }
    std::string payload(std::uniform_int_distribution<int>(1, 24)(rng), '\0');
    for (auto& ch : payload) ch = static_cast<char>(rng() & 0xff);
    core::Transaction tx{"rt-" + std::to_string(i), payload, scope_of(members),
                         i + 1};
    out.tree = place(out.tree, tx, i + 1);
    out.placed.push_back(std::move(tx));
  }
  return out;
}

inline std::filesystem::path fresh_temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() /
             ("erasable-test-" + name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace erasable::testing
