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

#include <fstream>
#include <sstream>

#include "erasable/consensus.hpp"
#include "erasable/storage.hpp"
#include "support/fixtures.hpp"

namespace erasable::storage {
namespace {

namespace fs = std::filesystem;
using testing::Cast;
using testing::make_tx;
using testing::place;
using testing::scope_of;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) {
      files[fs::relative(e.path(), dir).string()] = slurp(e.path());
    }
  }
  return files;
}

std::size_t occurrences(const fs::path& dir, const std::string& needle) {
  std::size_t n = 0;
  for (const auto& [name, body] : snapshot(dir)) {
    for (auto pos = body.find(needle); pos != std::string::npos;
         pos = body.find(needle, pos + 1)) {
      ++n;
    }
  }
  return n;
}

Errc code_of(const fs::path& dir) {
  try {
    load_replica(dir);
  } catch (const LedgerError& e) {
    return e.code();
  }
  ADD_FAILURE() << "load succeeded";
  return Errc::io_error;
}

fs::path chain_dir(const fs::path& root, const core::ScopeKey& key) {
  return root / "chains" / core::to_hex(key);
}

core::LedgerTree three_block_tree() {
  Cast c;
  auto tree = core::make_genesis("demo", 0);
  for (int i = 1; i <= 3; ++i) {
    tree = place(tree, make_tx("t" + std::to_string(i), "value " + std::to_string(i),
                               {c.org_x, c.p_a}),
                 i);
  }
  return tree;
}

TEST(Storage, RoundTrip) {
  auto dir = testing::fresh_temp_dir("roundtrip");
  auto tree = testing::full_sixteen_tree();
  std::vector<consensus::DeletionRecord> journal{{"r1", tree.chains.begin()->first, true, 4}};
  save_replica(tree, journal, dir);
  EXPECT_TRUE(fs::exists(dir / "genesis.json"));
  EXPECT_TRUE(fs::exists(dir / "deletion_journal.jsonl"));

  auto loaded = load_replica(dir);
  EXPECT_EQ(core::serialize_tree(loaded.tree), core::serialize_tree(tree));
  EXPECT_EQ(loaded.journal, journal);
  EXPECT_EQ(loaded.tree.network_id, "demo");
}

TEST(Storage, SaveLoadSaveIsByteIdentical) {
  auto a = testing::fresh_temp_dir("idem-a");
  auto b = testing::fresh_temp_dir("idem-b");
  std::mt19937_64 rng(4);
  auto tree = testing::random_tree(rng).tree;
  save_replica(tree, {}, a);
  auto loaded = load_replica(a);
  save_replica(loaded.tree, loaded.journal, b);
  EXPECT_EQ(snapshot(a), snapshot(b));
}

TEST(Storage, BinaryPayloadSurvives) {
  auto dir = testing::fresh_temp_dir("binary");
  Cast c;
  std::string payload("\x00\x01\xff\n\"{", 6);
  auto tree = place(core::make_genesis("demo", 0),
                    core::Transaction{"bin", payload, scope_of({c.p_a}), 1}, 1);
  save_replica(tree, {}, dir);
  auto loaded = load_replica(dir);
  EXPECT_EQ(loaded.tree.chains.begin()->second.blocks[0].transactions[0].payload,
            payload);
}

TEST(Storage, RowsAreCompactSortedJson) {
  auto tree = three_block_tree();
  auto row = block_row(tree.chains.begin()->second.blocks[0]);
  EXPECT_EQ(row.find(' '), std::string::npos);
  EXPECT_LT(row.find("\"block_hash\""), row.find("\"chain_key\""));
  EXPECT_LT(row.find("\"height\""), row.find("\"prev_hash\""));
  EXPECT_LT(row.find("\"prev_hash\""), row.find("\"transactions\""));
  EXPECT_EQ(journal_row({"r", core::kZeroDigest, false, 7}),
            "{\"chain_key\":\"" + core::to_hex(core::kZeroDigest) +
                "\",\"decided_at\":7,\"keep_subroot\":false,\"request_id\":\"r\"}\n");
}

TEST(Storage, FullDeletionRemovesChainDirectory) {
  auto dir = testing::fresh_temp_dir("fulldelete");
  auto tree = three_block_tree();
  const auto key = tree.chains.begin()->first;
  save_replica(tree, {}, dir);
  ASSERT_TRUE(fs::exists(chain_dir(dir, key) / "blocks.jsonl"));
  auto after = consensus::apply_deletion(tree, key, false);
  save_replica(after, std::vector<consensus::DeletionRecord>{{"r", key, false, 9}}, dir);
  EXPECT_FALSE(fs::exists(chain_dir(dir, key)));
  EXPECT_EQ(occurrences(dir, "value 2"), 0u);
  EXPECT_TRUE(load_replica(dir).tree.chains.empty());
}

TEST(Storage, KeepSubrootLeavesOnlySubroot) {
  auto dir = testing::fresh_temp_dir("keepsubroot");
  auto tree = three_block_tree();
  const auto key = tree.chains.begin()->first;
  save_replica(tree, {}, dir);
  save_replica(consensus::apply_deletion(tree, key, true), {}, dir);
  EXPECT_TRUE(fs::exists(chain_dir(dir, key) / "subroot.json"));
  EXPECT_FALSE(fs::exists(chain_dir(dir, key) / "blocks.jsonl"));
  auto loaded = load_replica(dir);
  EXPECT_TRUE(loaded.tree.chains.at(key).blocks.empty());
}

TEST(Storage, MissingMiddleRowIsIntegrityFailure) {
  auto dir = testing::fresh_temp_dir("truncated");
  auto tree = three_block_tree();
  const auto key = tree.chains.begin()->first;
  save_replica(tree, {}, dir);
  const auto blocks = chain_dir(dir, key) / "blocks.jsonl";
  std::istringstream rows(slurp(blocks));
  std::string r1, r2, r3;
  std::getline(rows, r1);
  std::getline(rows, r2);
  std::getline(rows, r3);
  spit(blocks, r1 + "\n" + r3 + "\n");

  try {
    load_replica(dir);
    FAIL() << "expected an integrity failure";
  } catch (const IntegrityError& e) {
    EXPECT_EQ(e.code(), Errc::integrity_failure);
    const auto& v = e.report().violations;
    ASSERT_EQ(v.size(), 2u) << e.report().describe();
    std::set<std::pair<core::ViolationKind, std::uint64_t>> got;
    for (const auto& x : v) got.emplace(x.kind, x.height);
    EXPECT_TRUE(got.contains({core::ViolationKind::height_gap, 3}));
    EXPECT_TRUE(got.contains({core::ViolationKind::link_break, 3}));
  }
}

TEST(Storage, TamperedPayloadIsIntegrityFailure) {
  auto dir = testing::fresh_temp_dir("tampered");
  auto tree = three_block_tree();
  save_replica(tree, {}, dir);
  const auto blocks = chain_dir(dir, tree.chains.begin()->first) / "blocks.jsonl";
  auto text = slurp(blocks);
  // "value 2" hex-encoded is 76616c75652032; flip its last digit.
  const auto pos = text.find("76616c75652032");
  ASSERT_NE(pos, std::string::npos);
  text[pos + 13] = '3';
  spit(blocks, text);
  EXPECT_EQ(code_of(dir), Errc::integrity_failure);
}

TEST(Storage, PartialRowIsCorruptLayout) {
  auto dir = testing::fresh_temp_dir("partial");
  auto tree = three_block_tree();
  save_replica(tree, {}, dir);
  const auto blocks = chain_dir(dir, tree.chains.begin()->first) / "blocks.jsonl";
  auto text = slurp(blocks);
  spit(blocks, text.substr(0, text.size() - 20));
  EXPECT_EQ(code_of(dir), Errc::corrupt_layout);
}

TEST(Storage, MissingPiecesAreCorruptLayout) {
  auto empty = testing::fresh_temp_dir("empty");
  EXPECT_EQ(code_of(empty), Errc::corrupt_layout);
  EXPECT_EQ(code_of(empty / "nope"), Errc::corrupt_layout);

  auto dir = testing::fresh_temp_dir("nojournal");
  save_replica(three_block_tree(), {}, dir);
  fs::remove(dir / "deletion_journal.jsonl");
  EXPECT_EQ(code_of(dir), Errc::corrupt_layout);

  auto bad = testing::fresh_temp_dir("badname");
  save_replica(three_block_tree(), {}, bad);
  fs::create_directories(bad / "chains" / "not-hex");
  EXPECT_EQ(code_of(bad), Errc::corrupt_layout);
}

TEST(Storage, ChainStoredUnderWrongKeyIsIntegrityFailure) {
  auto dir = testing::fresh_temp_dir("wrongkey");
  auto tree = three_block_tree();
  const auto key = tree.chains.begin()->first;
  save_replica(tree, {}, dir);
  fs::rename(chain_dir(dir, key), chain_dir(dir, core::sha256("elsewhere")));
  EXPECT_EQ(code_of(dir), Errc::integrity_failure);
}

TEST(Storage, ErasedBytesAreGoneFromDisk) {
  auto dir = testing::fresh_temp_dir("physical");
  Cast c;
  auto tree = testing::full_sixteen_tree();
  tree = place(tree, make_tx("secret-tx-7", "p_a home address 12 Elm St", {c.p_a}), 40);
  save_replica(tree, {}, dir);
  const std::string hex_payload = core::to_hex(std::string_view("p_a home address 12 Elm St"));
  ASSERT_GT(occurrences(dir, hex_payload), 0u);
  ASSERT_GT(occurrences(dir, "secret-tx-7"), 0u);

  const auto key = scope_of({c.p_a}).key;
  auto after = consensus::apply_deletion(tree, key, false);
  save_replica(after, std::vector<consensus::DeletionRecord>{{"erase/1", key, false, 50}}, dir);
  EXPECT_EQ(occurrences(dir, hex_payload), 0u);
  EXPECT_EQ(occurrences(dir, "p_a home address 12 Elm St"), 0u);
  EXPECT_EQ(occurrences(dir, "secret-tx-7"), 0u);
}

TEST(Storage, JournalIsAppendOnly) {
  auto dir = testing::fresh_temp_dir("journal");
  auto tree = three_block_tree();
  const auto key = tree.chains.begin()->first;
  std::vector<consensus::DeletionRecord> j1{{"r1", key, true, 4}};
  std::vector<consensus::DeletionRecord> j2{{"r1", key, true, 4}, {"r2", key, false, 9}};
  save_replica(tree, j1, dir);
  save_replica(tree, j2, dir);
  EXPECT_EQ(load_replica(dir).journal, j2);
  try {
    save_replica(tree, j1, dir);
    FAIL() << "shrinking the journal must fail";
  } catch (const LedgerError& e) {
    EXPECT_EQ(e.code(), Errc::invalid_argument);
  }
  std::vector<consensus::DeletionRecord> rewritten{{"rX", key, true, 4}, {"r2", key, false, 9}};
  EXPECT_THROW(save_replica(tree, rewritten, dir), LedgerError);
  EXPECT_EQ(load_replica(dir).journal, j2);
}

TEST(Storage, JournalHoldsNoIdentities) {
  auto dir = testing::fresh_temp_dir("journalpii");
  auto tree = testing::full_sixteen_tree();
  Cast c;
  const auto key = scope_of({c.org_x, c.p_a}).key;
  save_replica(consensus::apply_deletion(tree, key, false),
               std::vector<consensus::DeletionRecord>{{"erase/abc", key, false, 3}},
               dir);
  const auto journal = slurp(dir / "deletion_journal.jsonl");
  EXPECT_EQ(journal.find("did:"), std::string::npos);
}

}  // namespace
}  // namespace erasable::storage
