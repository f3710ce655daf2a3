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

// Command implementations behind the erasable-ledger tool. Each returns the
// process exit code and writes human-readable output to the given streams.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>

#include "erasable/consensus.hpp"
#include "erasable/scenario.hpp"

namespace erasable::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Strict parse: unknown fields, undeclared identities and type errors throw
// LedgerError(invalid_argument) naming the line/column or field path.
simnet::Scenario parse_scenario(std::string_view json_text);
simnet::Scenario load_scenario(const std::filesystem::path& path);

struct RunOptions {
  std::optional<std::filesystem::path> trace_out;
  std::optional<std::filesystem::path> replica_out;
  std::optional<std::uint64_t> seed;
};

int cmd_run(const std::filesystem::path& scenario_path,
            const RunOptions& options, std::ostream& out, std::ostream& err);

int cmd_verify(const std::filesystem::path& replica_dir, std::ostream& out,
               std::ostream& err);

struct DemoOptions {
  // Both policies when unset.
  std::optional<consensus::SilenceMode> policy;
  // Materialize five representative scopes instead of all sixteen.
  bool sparse = false;
};

int cmd_demo(const DemoOptions& options, std::ostream& out);

int cmd_branches(int k, int m, std::ostream& out, std::ostream& err);

// Scenario used by cmd_demo, exposed for tests.
simnet::Scenario demo_scenario(consensus::SilenceMode policy, bool sparse);

// Full argv front end (subcommands run, verify, demo, branches).
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace erasable::cli
