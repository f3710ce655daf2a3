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

// On-disk replica layout:
//
//   <dir>/genesis.json
//   <dir>/chains/<hex scope key>/subroot.json
//   <dir>/chains/<hex scope key>/blocks.jsonl   (absent when no blocks)
//   <dir>/deletion_journal.jsonl
//
// All rows are compact JSON with keys in ascending order, one object per
// line. The exact row formats are documented in docs/FORMATS.md.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "erasable/consensus.hpp"
#include "erasable/core.hpp"

namespace erasable::storage {

// Raised by load_replica when the files parse but the ledger does not verify.
class IntegrityError : public LedgerError {
 public:
  explicit IntegrityError(core::VerificationReport report)
      : LedgerError(Errc::integrity_failure,
                    "ledger failed verification:\n" + report.describe()),
        report_(std::move(report)) {}

  const core::VerificationReport& report() const { return report_; }

 private:
  core::VerificationReport report_;
};

struct Replica {
  core::LedgerTree tree;
  std::vector<consensus::DeletionRecord> journal;
};

// Writes the layout, removing directories of chains no longer in the tree.
// The journal is append-only: throws invalid_argument if the journal already
// on disk is not a prefix of `journal`. I/O failures throw io_error with the
// offending path.
void save_replica(const core::LedgerTree& tree,
                  std::span<const consensus::DeletionRecord> journal,
                  const std::filesystem::path& dir);

// Throws corrupt_layout for missing or unparsable files, IntegrityError when
// the loaded tree fails verify_tree.
Replica load_replica(const std::filesystem::path& dir);

// Row encoders, exposed for tests and tooling.
std::string genesis_row(const core::LedgerTree& tree);
std::string subroot_row(const core::ContextChain& chain);
std::string block_row(const core::Block& block);
std::string journal_row(const consensus::DeletionRecord& record);

}  // namespace erasable::storage
