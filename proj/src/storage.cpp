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

#include "erasable/storage.hpp"

#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>
#include <system_error>

namespace erasable::storage {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kGenesisFile = "genesis.json";
constexpr const char* kChainsDir = "chains";
constexpr const char* kSubrootFile = "subroot.json";
constexpr const char* kBlocksFile = "blocks.jsonl";
constexpr const char* kJournalFile = "deletion_journal.jsonl";

[[noreturn]] void corrupt(const fs::path& path, const std::string& what) {
  throw LedgerError(Errc::corrupt_layout, path.string() + ": " + what);
}

[[noreturn]] void io_failure(const fs::path& path, const std::string& what) {
  throw LedgerError(Errc::io_error, path.string() + ": " + what);
}

json members_json(const std::vector<core::Identity>& members) {
  json out = json::array();
  for (const auto& m : members) {
    out.push_back({{"id", m.id}, {"kind", core::to_string(m.kind)}});
  }
  return out;
}

json header_json(const core::Block& b) {
  return {{"block_hash", core::to_hex(b.block_hash)},
          {"chain_key", core::to_hex(b.chain_key)},
          {"created_at", b.created_at},
          {"hash_input", core::to_hex(core::block_hash_input(b))},
          {"height", b.height},
          {"prev_hash", core::to_hex(b.prev_hash)}};
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) corrupt(path, "missing or unreadable");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) io_failure(tmp, "cannot open for writing");
    out << contents;
    if (!out.flush()) io_failure(tmp, "write failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) io_failure(path, ec.message());
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

json parse_row(const fs::path& path, const std::string& text, std::size_t row) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    corrupt(path, "row " + std::to_string(row) + ": " + e.what());
  }
}

core::Identity identity_from(const json& j) {
  const auto& kind = j.at("kind").get_ref<const std::string&>();
  core::Identity who;
  if (kind == "organization") {
    who.kind = core::IdentityKind::organization;
  } else if (kind == "person") {
    who.kind = core::IdentityKind::person;
  } else {
    throw LedgerError(Errc::corrupt_layout, "unknown identity kind " + kind);
  }
  who.id = j.at("id").get<std::string>();
  return who;
}

core::Scope scope_from(const json& members) {
  core::Scope scope;
  for (const auto& m : members) scope.members.push_back(identity_from(m));
  scope.key = core::scope_key_of(scope.members);
  return scope;
}

core::Block block_header_from(const json& j) {
  core::Block b;
  b.block_hash = core::digest_from_hex(j.at("block_hash").get<std::string>());
  b.chain_key = core::digest_from_hex(j.at("chain_key").get<std::string>());
  b.created_at = j.at("created_at").get<core::Tick>();
  b.height = j.at("height").get<std::uint64_t>();
  b.prev_hash = core::digest_from_hex(j.at("prev_hash").get<std::string>());
  return b;
}

core::Block block_from(const json& j) {
  core::Block b = block_header_from(j);
  for (const auto& t : j.at("transactions")) {
    core::Transaction tx;
    tx.declared_scope = scope_from(t.at("declared_scope"));
    tx.payload = core::from_hex(t.at("payload").get<std::string>());
    tx.submitted_at = t.at("submitted_at").get<core::Tick>();
    tx.tx_id = t.at("tx_id").get<std::string>();
    b.transactions.push_back(std::move(tx));
  }
  return b;
}

consensus::DeletionRecord record_from(const json& j) {
  consensus::DeletionRecord r;
  r.chain_key = core::digest_from_hex(j.at("chain_key").get<std::string>());
  r.decided_at = j.at("decided_at").get<core::Tick>();
  r.keep_subroot = j.at("keep_subroot").get<bool>();
  r.request_id = j.at("request_id").get<std::string>();
  return r;
}

// Wraps field-level decoding failures into corrupt_layout with path context.
template <typename Fn>
auto decode(const fs::path& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const json::exception& e) {
    corrupt(path, e.what());
  } catch (const LedgerError& e) {
    if (e.code() == Errc::corrupt_layout || e.code() == Errc::invalid_argument) {
      corrupt(path, e.what());
    }
    throw;
  }
}

std::vector<consensus::DeletionRecord> read_journal(const fs::path& path) {
  std::vector<consensus::DeletionRecord> out;
  auto lines = split_lines(read_file(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    json row = parse_row(path, lines[i], i + 1);
    out.push_back(decode(path, [&] { return record_from(row); }));
  }
  return out;
}

}  // namespace

std::string genesis_row(const core::LedgerTree& tree) {
  json j = header_json(tree.genesis);
  j["network_id"] = tree.network_id;
  return j.dump() + "\n";
}

std::string subroot_row(const core::ContextChain& chain) {
  json j = header_json(chain.subroot);
  j["scope"] = members_json(chain.scope.members);
  return j.dump() + "\n";
}

std::string block_row(const core::Block& block) {
  json j = header_json(block);
  json txs = json::array();
  for (const auto& tx : block.transactions) {
    txs.push_back({{"declared_scope", members_json(tx.declared_scope.members)},
                   {"payload", core::to_hex(tx.payload)},
                   {"submitted_at", tx.submitted_at},
                   {"tx_id", tx.tx_id}});
  }
  j["transactions"] = std::move(txs);
  return j.dump() + "\n";
}

std::string journal_row(const consensus::DeletionRecord& record) {
  json j = {{"chain_key", core::to_hex(record.chain_key)},
            {"decided_at", record.decided_at},
            {"keep_subroot", record.keep_subroot},
            {"request_id", record.request_id}};
  return j.dump() + "\n";
}

void save_replica(const core::LedgerTree& tree,
                  std::span<const consensus::DeletionRecord> journal,
                  const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir / kChainsDir, ec);
  if (ec) io_failure(dir / kChainsDir, ec.message());

  const fs::path journal_path = dir / kJournalFile;
  if (fs::exists(journal_path)) {
    auto existing = read_journal(journal_path);
    if (existing.size() > journal.size() ||
        !std::equal(existing.begin(), existing.end(), journal.begin())) {
      throw LedgerError(Errc::invalid_argument,
                        journal_path.string() +
                            ": deletion journal on disk is not a prefix of "
                            "the journal being saved");
    }
  }

  write_file(dir / kGenesisFile, genesis_row(tree));

  std::set<std::string> live;
  for (const auto& [key, chain] : tree.chains) {
    const std::string name = core::to_hex(key);
    live.insert(name);
    const fs::path chain_dir = dir / kChainsDir / name;
    fs::create_directories(chain_dir, ec);
    if (ec) io_failure(chain_dir, ec.message());
    write_file(chain_dir / kSubrootFile, subroot_row(chain));
    if (chain.blocks.empty()) {
      fs::remove(chain_dir / kBlocksFile, ec);
      if (ec) io_failure(chain_dir / kBlocksFile, ec.message());
    } else {
      std::string rows;
      for (const auto& b : chain.blocks) rows += block_row(b);
      write_file(chain_dir / kBlocksFile, rows);
    }
  }

  std::vector<fs::path> stale;
  for (const auto& entry : fs::directory_iterator(dir / kChainsDir)) {
    if (!live.contains(entry.path().filename().string())) {
      stale.push_back(entry.path());
    }
  }
  for (const auto& p : stale) {
    fs::remove_all(p, ec);
    if (ec) io_failure(p, ec.message());
  }

  std::string rows;
  for (const auto& r : journal) rows += journal_row(r);
  write_file(journal_path, rows);
}

Replica load_replica(const fs::path& dir) {
  if (!fs::is_directory(dir)) corrupt(dir, "not a directory");

  Replica replica;
  const fs::path genesis_path = dir / kGenesisFile;
  json genesis = parse_row(genesis_path, read_file(genesis_path), 1);
  decode(genesis_path, [&] {
    replica.tree.genesis = block_header_from(genesis);
    replica.tree.network_id = genesis.at("network_id").get<std::string>();
    return 0;
  });

  const fs::path chains_path = dir / kChainsDir;
  if (!fs::is_directory(chains_path)) corrupt(chains_path, "missing");
  std::vector<fs::path> chain_dirs;
  for (const auto& entry : fs::directory_iterator(chains_path)) {
    chain_dirs.push_back(entry.path());
  }
  std::sort(chain_dirs.begin(), chain_dirs.end());

  for (const auto& chain_dir : chain_dirs) {
    const std::string name = chain_dir.filename().string();
    if (!fs::is_directory(chain_dir)) corrupt(chain_dir, "not a directory");
    core::ScopeKey key = decode(chain_dir, [&] {
      if (name != core::to_hex(core::digest_from_hex(name))) {
        corrupt(chain_dir, "directory name must be lowercase hex");
      }
      return core::digest_from_hex(name);
    });

    core::ContextChain chain;
    const fs::path subroot_path = chain_dir / kSubrootFile;
    json subroot = parse_row(subroot_path, read_file(subroot_path), 1);
    decode(subroot_path, [&] {
      chain.subroot = block_header_from(subroot);
      chain.scope = scope_from(subroot.at("scope"));
      return 0;
    });

    const fs::path blocks_path = chain_dir / kBlocksFile;
    if (fs::exists(blocks_path)) {
      auto lines = split_lines(read_file(blocks_path));
      for (std::size_t i = 0; i < lines.size(); ++i) {
        json row = parse_row(blocks_path, lines[i], i + 1);
        chain.blocks.push_back(decode(blocks_path, [&] { return block_from(row); }));
      }
    }
    replica.tree.chains.emplace(key, std::move(chain));
  }

  const fs::path journal_path = dir / kJournalFile;
  if (!fs::exists(journal_path)) corrupt(journal_path, "missing");
  replica.journal = read_journal(journal_path);

  auto report = core::verify_tree(replica.tree);
  if (!report.ok) throw IntegrityError(std::move(report));
  return replica;
}

}  // namespace erasable::storage
