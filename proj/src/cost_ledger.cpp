// Copyright 2026 The spa2nn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spa2nn/cost_ledger.hpp"

namespace spa2nn::leakage {

std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::kBasic: return "basic";
    case Scheme::kMirror: return "mirror";
    case Scheme::kReal: return "real";
  }
  return "unknown";
}

}  // namespace spa2nn::leakage
