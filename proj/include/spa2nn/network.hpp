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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "spa2nn/random.hpp"

namespace spa2nn::net {

using PartyId = int;

/// One logged message. Payloads are not retained, only their digest.
struct MessageRecord {
  std::uint64_t round = 0;
  PartyId sender = 0;
  std::vector<PartyId> receivers;
  std::uint64_t digest = 0;
};

/// In-process synchronous network between parties 0..n-1 plus a dealer
/// (id n) used only for correlated-randomness distribution.
///
/// Delivery is reliable and ordered. The network does not carry values;
/// protocol code computes with the values it sends, and every send is
/// recorded (round, sender, receivers, payload digest). The running
/// transcript digest covers every record, so two runs agree on the digest
/// iff their logs are byte-identical. Retaining individual records is
/// optional because large experiments send millions of messages.
class PartyNetwork {
 public:
  explicit PartyNetwork(int parties, bool retain_log = true);

  int parties() const { return parties_; }
  PartyId dealer() const { return parties_; }

  /// Opens a new synchronous round and returns its number (1-based).
  std::uint64_t next_round();
  std::uint64_t round() const { return round_; }

  void send(PartyId from, std::vector<PartyId> to, std::span<const std::uint64_t> payload);
  /// Sends to every party other than `from` (every party when `from` is the dealer).
  void broadcast(PartyId from, std::span<const std::uint64_t> payload);

  std::uint64_t message_count() const { return messages_; }
  std::uint64_t transcript_digest() const { return transcript_.value(); }
  bool retains_log() const { return retain_; }
  const std::vector<MessageRecord>& log() const { return log_; }

  /// Line-delimited export: `round sender r1,r2,... digest` with the digest
  /// as 16 hex digits.
  void export_log(std::ostream& out) const;
  std::string export_log() const;

 private:
  int parties_;
  bool retain_;
  std::uint64_t round_ = 0;
  std::uint64_t messages_ = 0;
  Fnv1a transcript_;
  std::vector<MessageRecord> log_;
};

}  // namespace spa2nn::net
