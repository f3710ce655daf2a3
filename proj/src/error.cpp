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

#include "erasable/error.hpp"

namespace erasable {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::duplicate_transaction: return "duplicate-transaction";
    case Errc::not_found: return "not-found";
    case Errc::forbidden: return "forbidden";
    case Errc::unguarded_scope: return "unguarded-scope";
    case Errc::duplicate_vote: return "duplicate-vote";
    case Errc::not_an_endorser: return "not-an-endorser";
    case Errc::out_of_range: return "out-of-range";
    case Errc::corrupt_layout: return "corrupt-layout";
    case Errc::integrity_failure: return "integrity-failure";
    case Errc::io_error: return "io-error";
  }
  return "unknown";
}

}  // namespace erasable
