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

#include "erasable/core.hpp"

#include <openssl/sha.h>

#include <algorithm>
#include <set>
#include <sstream>

namespace erasable::core {

namespace {

void put_u64(std::string& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<char>((v >> shift) & 0xff));
  }
}

void put_field(std::string& out, std::string_view bytes) {
  put_u64(out, bytes.size());
  out.append(bytes);
}

void put_field(std::string& out, const Digest& d) {
  put_field(out, std::string_view(reinterpret_cast<const char*>(d.data()),
                                  d.size()));
}

void put_u64_field(std::string& out, std::uint64_t v) {
  std::string tmp;
  put_u64(tmp, v);
  put_field(out, tmp);
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Digest sha256(std::string_view bytes) {
  Digest out;
  SHA256(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(),
         out.data());
  return out;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

std::string to_hex(std::string_view bytes) {
  return to_hex(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
}

std::string from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) {
    throw LedgerError(Errc::invalid_argument, "odd-length hex string");
  }
  std::string out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = hex_value(hex[i]);
    int lo = hex_value(hex[i + 1]);
    if (hi < 0 || lo < 0) {
      throw LedgerError(Errc::invalid_argument,
                        "non-hex character in '" + std::string(hex) + "'");
    }
    out.push_back(static_cast<char>(hi << 4 | lo));
  }
  return out;
}

Digest digest_from_hex(std::string_view hex) {
  if (hex.size() != 64) {
    throw LedgerError(Errc::invalid_argument,
                      "digest must be 64 hex characters, got " +
                          std::to_string(hex.size()));
  }
  std::string raw = from_hex(hex);
  Digest d;
  std::copy(raw.begin(), raw.end(), d.begin());
  return d;
}

std::string_view to_string(IdentityKind kind) {
  return kind == IdentityKind::organization ? "organization" : "person";
}

bool is_valid_did(std::string_view id) {
  auto first = id.find(':');
  if (first == std::string_view::npos) return false;
  auto second = id.find(':', first + 1);
  if (second == std::string_view::npos) return false;
  if (id.find(':', second + 1) != std::string_view::npos) return false;
  if (id.substr(0, first) != "did") return false;
  // method and specific part must be non-empty
  return second > first + 1 && second + 1 < id.size();
}

Identity make_identity(IdentityKind kind, std::string id) {
  if (!is_valid_did(id)) {
    throw LedgerError(Errc::invalid_argument,
                      "malformed identifier '" + id +
                          "': expected did:<method>:<specific>");
  }
  return Identity{kind, std::move(id)};
}

Identity organization(std::string id) {
  return make_identity(IdentityKind::organization, std::move(id));
}

Identity person(std::string id) {
  return make_identity(IdentityKind::person, std::move(id));
}

ScopeKey scope_key_of(std::span<const Identity> members) {
  std::string joined;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i > 0) joined.push_back('\n');
    joined += members[i].id;
  }
  return sha256(joined);
}

bool Scope::is_canonical() const {
  for (std::size_t i = 1; i < members.size(); ++i) {
    if (!(members[i - 1] < members[i])) return false;
  }
  for (const auto& m : members) {
    if (!is_valid_did(m.id)) return false;
  }
  return key == scope_key_of(members);
}

bool Scope::contains(const Identity& who) const {
  return std::binary_search(members.begin(), members.end(), who);
}

std::string Scope::label() const {
  std::string out = "{";
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i > 0) out += ",";
    out += members[i].id;
  }
  return out + "}";
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::genesis_malformed: return "genesis-malformed";
    case ViolationKind::genesis_hash_mismatch: return "genesis-hash-mismatch";
    case ViolationKind::chain_key_mismatch: return "chain-key-mismatch";
    case ViolationKind::duplicate_chain_key: return "duplicate-chain-key";
    case ViolationKind::non_canonical_scope: return "non-canonical-scope";
    case ViolationKind::subroot_malformed: return "subroot-malformed";
    case ViolationKind::subroot_link_break: return "subroot-link-break";
    case ViolationKind::height_gap: return "height-gap";
    case ViolationKind::link_break: return "link-break";
    case ViolationKind::hash_mismatch: return "hash-mismatch";
    case ViolationKind::empty_block: return "empty-block";
    case ViolationKind::scope_mismatch: return "scope-mismatch";
  }
  return "unknown";
}

std::string VerificationReport::describe() const {
  std::ostringstream out;
  for (const auto& v : violations) {
    out << to_string(v.kind) << " chain=" << to_hex(v.chain_key)
        << " height=" << v.height << ": " << v.detail << "\n";
  }
  return out.str();
}

std::string block_hash_input(const Block& block) {
  std::string out;
  put_field(out, block.chain_key);
  put_u64_field(out, block.height);
  put_field(out, block.prev_hash);
  put_u64_field(out, block.created_at);
  put_u64_field(out, block.transactions.size());
  for (const auto& tx : block.transactions) {
    put_field(out, tx.tx_id);
    put_field(out, sha256(tx.payload));
  }
  return out;
}

Digest hash_block(const Block& block) {
  return sha256(block_hash_input(block));
}

ScopeKey genesis_chain_key(std::string_view network_id) {
  return sha256(network_id);
}

LedgerTree make_genesis(std::string network_id, Tick created_at) {
  if (network_id.empty()) {
    throw LedgerError(Errc::invalid_argument, "network_id must be non-empty");
  }
  LedgerTree tree;
  tree.genesis.chain_key = genesis_chain_key(network_id);
  tree.genesis.height = 0;
  tree.genesis.prev_hash = kZeroDigest;
  tree.genesis.created_at = created_at;
  tree.genesis.block_hash = hash_block(tree.genesis);
  tree.network_id = std::move(network_id);
  return tree;
}

Block make_subroot(const LedgerTree& tree, const Scope& scope,
                   Tick created_at) {
  Block subroot;
  subroot.chain_key = scope.key;
  subroot.height = 0;
  subroot.prev_hash = tree.genesis.block_hash;
  subroot.created_at = created_at;
  subroot.block_hash = hash_block(subroot);
  return subroot;
}

namespace {

class Verifier {
 public:
  explicit Verifier(const LedgerTree& tree) : tree_(tree) {}

  VerificationReport run() {
    Digest genesis_hash = check_genesis();
    std::set<ScopeKey> seen_scope_keys;
    for (const auto& [key, chain] : tree_.chains) {
      if (!seen_scope_keys.insert(chain.scope.key).second) {
        add(key, 0, ViolationKind::duplicate_chain_key,
            "scope key shared with another chain");
      }
      check_chain(key, chain, genesis_hash);
    }
    report_.ok = report_.violations.empty();
    return std::move(report_);
  }

 private:
  void add(const ScopeKey& key, std::uint64_t height, ViolationKind kind,
           std::string detail) {
    report_.violations.push_back({key, height, kind, std::move(detail)});
  }

  Digest check_genesis() {
    const Block& g = tree_.genesis;
    const ScopeKey& k = g.chain_key;
    if (g.height != 0 || g.prev_hash != kZeroDigest ||
        !g.transactions.empty() ||
        g.chain_key != genesis_chain_key(tree_.network_id)) {
      add(k, g.height, ViolationKind::genesis_malformed,
          "genesis must be height 0, zero prev_hash, no transactions, keyed "
          "by network id");
    }
    Digest recomputed = hash_block(g);
    if (recomputed != g.block_hash) {
      add(k, 0, ViolationKind::genesis_hash_mismatch,
          "stored " + to_hex(g.block_hash) + " recomputed " +
              to_hex(recomputed));
    }
    return recomputed;
  }

  void check_block_hash(const ScopeKey& key, const Block& b,
                        const Digest& recomputed) {
    if (recomputed != b.block_hash) {
      add(key, b.height, ViolationKind::hash_mismatch,
          "stored " + to_hex(b.block_hash) + " recomputed " +
              to_hex(recomputed));
    }
  }

  void check_chain(const ScopeKey& key, const ContextChain& chain,
                   const Digest& genesis_hash) {
    if (chain.scope.key != key) {
      add(key, 0, ViolationKind::chain_key_mismatch,
          "map key differs from scope key " + to_hex(chain.scope.key));
    }
    if (!chain.scope.is_canonical()) {
      add(key, 0, ViolationKind::non_canonical_scope,
          "scope members unsorted, duplicated or not matching key");
    }

    const Block& sr = chain.subroot;
    if (sr.height != 0 || !sr.transactions.empty()) {
      add(key, sr.height, ViolationKind::subroot_malformed,
          "subroot must be height 0 without transactions");
    }
    if (sr.chain_key != key) {
      add(key, 0, ViolationKind::chain_key_mismatch,
          "subroot chain_key " + to_hex(sr.chain_key));
    }
    if (sr.prev_hash != genesis_hash) {
      add(key, 0, ViolationKind::subroot_link_break,
          "subroot prev_hash does not match genesis");
    }
    Digest prev = hash_block(sr);
    check_block_hash(key, sr, prev);

    for (std::size_t i = 0; i < chain.blocks.size(); ++i) {
      const Block& b = chain.blocks[i];
      if (b.height != i + 1) {
        add(key, b.height, ViolationKind::height_gap,
            "expected height " + std::to_string(i + 1));
      }
      if (b.chain_key != key) {
        add(key, b.height, ViolationKind::chain_key_mismatch,
            "block chain_key " + to_hex(b.chain_key));
      }
      if (b.prev_hash != prev) {
        add(key, b.height, ViolationKind::link_break,
            "prev_hash does not match predecessor");
      }
      if (b.transactions.empty()) {
        add(key, b.height, ViolationKind::empty_block,
            "non-structural block without transactions");
      }
      for (const auto& tx : b.transactions) {
        if (tx.declared_scope.key != key ||
            tx.declared_scope.key != scope_key_of(tx.declared_scope.members)) {
          add(key, b.height, ViolationKind::scope_mismatch,
              "transaction " + tx.tx_id + " declares a different scope");
        }
      }
      prev = hash_block(b);
      check_block_hash(key, b, prev);
    }
  }

  const LedgerTree& tree_;
  VerificationReport report_;
};

void put_block(std::string& out, const Block& b) {
  put_field(out, block_hash_input(b));
  put_field(out, b.block_hash);
  for (const auto& tx : b.transactions) {
    put_u64_field(out, tx.submitted_at);
    put_field(out, tx.payload);
    put_u64_field(out, tx.declared_scope.members.size());
    for (const auto& m : tx.declared_scope.members) {
      put_field(out, m.id);
      put_field(out, to_string(m.kind));
    }
    put_field(out, tx.declared_scope.key);
  }
}

}  // namespace

VerificationReport verify_tree(const LedgerTree& tree) {
  return Verifier(tree).run();
}

std::string serialize_tree(const LedgerTree& tree) {
  std::string out;
  put_field(out, tree.network_id);
  put_block(out, tree.genesis);
  put_u64_field(out, tree.chains.size());
  for (const auto& [key, chain] : tree.chains) {
    put_field(out, key);
    put_u64_field(out, chain.scope.members.size());
    for (const auto& m : chain.scope.members) {
      put_field(out, m.id);
      put_field(out, to_string(m.kind));
    }
    put_field(out, chain.scope.key);
    put_block(out, chain.subroot);
    put_u64_field(out, chain.blocks.size());
    for (const auto& b : chain.blocks) put_block(out, b);
  }
  return out;
}

}  // namespace erasable::core
