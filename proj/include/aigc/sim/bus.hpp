// Copyright 2026 The aigc-chain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <deque>
#include <map>
#include <string>
#include <vector>

#include "aigc/transaction.hpp"

namespace aigc::sim {

enum class MessageKind : std::uint8_t {
  Request,    // producer -> ESP: service request
  Deny,       // ESP -> producer: busy this round
  Accept,     // ESP -> producer: request taken
  Handshake,  // producer -> ESP: H(R) for the exchange
  Deliver,    // ESP -> producer: generated content
  Claim,      // anyone -> consumer: ownership claim over content
};

struct Message {
  MessageKind kind = MessageKind::Request;
  Address from;
  Address to;
  Height round = 0;
  std::uint64_t session = 0;
  Digest digest{};  // hash lock or product index, by kind
  Bytes body;
};

/// In-process, ordered, lossless off-chain channel. Everything sent in a
/// round is delivered before that round's block.
class MessageBus {
 public:
  void send(Message m) {
    ++sent_;
    inboxes_[m.to].push_back(std::move(m));
  }

  /// Removes and returns everything queued for `to`, oldest first.
  std::vector<Message> take(const Address& to) {
    auto it = inboxes_.find(to);
    if (it == inboxes_.end()) return {};
    std::vector<Message> out(std::make_move_iterator(it->second.begin()),
                             std::make_move_iterator(it->second.end()));
    inboxes_.erase(it);
    return out;
  }

  bool idle() const { return inboxes_.empty(); }
  std::uint64_t sent() const { return sent_; }

 private:
  std::map<Address, std::deque<Message>> inboxes_;
  std::uint64_t sent_ = 0;
};

}  // namespace aigc::sim
