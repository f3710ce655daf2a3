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

// Content-addressed block and tree primitives.
//
// Every block hash is SHA-256 over a length-prefixed binary serialization
// (see docs/FORMATS.md). Context chains hang off a single genesis block and
// share no hash dependency with each other except the genesis hash, which is
// what allows a whole chain to be removed while every other chain keeps
// verifying.

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "erasable/error.hpp"

namespace erasable::core {

using Digest = std::array<std::uint8_t, 32>;
using ScopeKey = Digest;
using Tick = std::uint64_t;

inline constexpr Digest kZeroDigest{};

Digest sha256(std::string_view bytes);
std::string to_hex(std::span<const std::uint8_t> bytes);
std::string to_hex(std::string_view bytes);
// Throws LedgerError(invalid_argument) on odd length or non-hex characters.
std::string from_hex(std::string_view hex);
Digest digest_from_hex(std::string_view hex);

enum class IdentityKind { organization, person };

std::string_view to_string(IdentityKind kind);

// A DID-style identifier, "did:<method>:<specific>".
struct Identity {
  IdentityKind kind = IdentityKind::person;
  std::string id;

  bool is_person() const { return kind == IdentityKind::person; }
  bool is_organization() const { return kind == IdentityKind::organization; }

  // Identities are ordered and compared by id bytes only.
  friend bool operator==(const Identity& a, const Identity& b) {
    return a.id == b.id;
  }
  friend std::strong_ordering operator<=>(const Identity& a,
                                          const Identity& b) {
    return a.id.compare(b.id) <=> 0;
  }
};

bool is_valid_did(std::string_view id);
// Throws invalid_argument naming the id when it is not a three-section DID.
Identity make_identity(IdentityKind kind, std::string id);
Identity organization(std::string id);
Identity person(std::string id);

// Key of an already sorted member list: SHA-256 of the ids joined by '\n'.
ScopeKey scope_key_of(std::span<const Identity> members);

struct Scope {
  std::vector<Identity> members;
  ScopeKey key = sha256("");

  // Strictly ascending members and a key that matches them.
  bool is_canonical() const;
  bool contains(const Identity& who) const;
  // "{did:org:x,did:person:a}"
  std::string label() const;

  friend bool operator==(const Scope& a, const Scope& b) {
    return a.key == b.key;
  }
};

struct Transaction {
  std::string tx_id;
  std::string payload;
  Scope declared_scope;
  Tick submitted_at = 0;

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

struct Block {
  ScopeKey chain_key{};
  std::uint64_t height = 0;
  Digest prev_hash{};
  std::vector<Transaction> transactions;
  Digest block_hash{};
  Tick created_at = 0;

  friend bool operator==(const Block&, const Block&) = default;
};

struct ContextChain {
  Scope scope;
  Block subroot;
  std::vector<Block> blocks;

  const Digest& head_hash() const {
    return blocks.empty() ? subroot.block_hash : blocks.back().block_hash;
  }

  friend bool operator==(const ContextChain& a, const ContextChain& b) {
    return a.scope.members == b.scope.members && a.scope.key == b.scope.key &&
           a.subroot == b.subroot && a.blocks == b.blocks;
  }
};

struct LedgerTree {
  Block genesis;
  std::map<ScopeKey, ContextChain> chains;
  std::string network_id;

  friend bool operator==(const LedgerTree&, const LedgerTree&) = default;
};

enum class ViolationKind {
  genesis_malformed,
  genesis_hash_mismatch,
  chain_key_mismatch,
  duplicate_chain_key,
  non_canonical_scope,
  subroot_malformed,
  subroot_link_break,
  height_gap,
  link_break,
  hash_mismatch,
  empty_block,
  scope_mismatch,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ScopeKey chain_key{};
  std::uint64_t height = 0;
  ViolationKind kind = ViolationKind::hash_mismatch;
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct VerificationReport {
  bool ok = true;
  std::vector<Violation> violations;

  // One "<kind> chain=<hex> height=<n>: <detail>" line per violation.
  std::string describe() const;
};

// The bytes hashed into block_hash. block.block_hash is ignored.
std::string block_hash_input(const Block& block);
Digest hash_block(const Block& block);

// Chain key carried by the genesis block: SHA-256 of the network id.
ScopeKey genesis_chain_key(std::string_view network_id);

LedgerTree make_genesis(std::string network_id, Tick created_at);

// Height-0 anchor for `scope`, linked to the genesis hash.
Block make_subroot(const LedgerTree& tree, const Scope& scope, Tick created_at);

VerificationReport verify_tree(const LedgerTree& tree);

// Full canonical byte form of a tree, including payloads and scope members.
// Two replicas are identical iff these bytes are equal.
std::string serialize_tree(const LedgerTree& tree);

}  // namespace erasable::core
