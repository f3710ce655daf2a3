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

#include <stdexcept>
#include <string>
#include <string_view>

namespace erasable {

enum class Errc {
  invalid_argument,
  duplicate_transaction,
  not_found,
  forbidden,
  unguarded_scope,
  duplicate_vote,
  not_an_endorser,
  out_of_range,
  corrupt_layout,
  integrity_failure,
  io_error,
};

std::string_view to_string(Errc code);

// Every failure surfaced by the library is a LedgerError carrying a code.
class LedgerError : public std::runtime_error {
 public:
  LedgerError(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace erasable
