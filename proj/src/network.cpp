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

#include "spa2nn/network.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

#include "spa2nn/errors.hpp"

namespace spa2nn::net {

PartyNetwork::PartyNetwork(int parties, bool retain_log) : parties_(parties), retain_(retain_log) {
  if (parties < 1) throw ParameterError("network needs at least one party");
}

std::uint64_t PartyNetwork::next_round() { return ++round_; }

void PartyNetwork::send(PartyId from, std::vector<PartyId> to, std::span<const std::uint64_t> payload) {
  if (from < 0 || from > parties_) throw ParameterError("unknown sender");
  for (PartyId r : to) {
    if (r < 0 || r >= parties_) throw ParameterError("unknown receiver");
  }
  Fnv1a digest;
  digest.update(payload.size());
  for (std::uint64_t w : payload) digest.update(w);

  transcript_.update(round_);
  transcript_.update(static_cast<std::uint64_t>(from));
  transcript_.update(to.size());
  for (PartyId r : to) transcript_.update(static_cast<std::uint64_t>(r));
  transcript_.update(digest.value());
  ++messages_;
  if (retain_) log_.push_back({round_, from, std::move(to), digest.value()});
}

void PartyNetwork::broadcast(PartyId from, std::span<const std::uint64_t> payload) {
  std::vector<PartyId> to;
  to.reserve(static_cast<std::size_t>(parties_));
  for (PartyId u = 0; u < parties_; ++u) {
    if (u != from) to.push_back(u);
  }
  send(from, std::move(to), payload);
}

void PartyNetwork::export_log(std::ostream& out) const {
  char hex[17];
  for (const MessageRecord& m : log_) {
    out << m.round << ' ' << m.sender << ' ';
    for (std::size_t i = 0; i < m.receivers.size(); ++i) {
      if (i) out << ',';
      out << m.receivers[i];
    }
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(m.digest));
    out << ' ' << hex << '\n';
  }
}

std::string PartyNetwork::export_log() const {
  std::ostringstream out;
  export_log(out);
  return out.str();
}

}  // namespace spa2nn::net
