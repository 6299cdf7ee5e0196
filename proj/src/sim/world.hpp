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

#include <map>
#include <set>
#include <string>
#include <vector>

#include "aigc/htl.hpp"
#include "aigc/ledger.hpp"
#include "aigc/reputation.hpp"
#include "aigc/sim/bus.hpp"
#include "aigc/sim/config.hpp"
#include "aigc/sim/metrics.hpp"

namespace aigc::sim::detail {

enum class Role : std::uint8_t { Producer, Esp, Consumer, Attacker };

struct AgentState {
  Role role = Role::Producer;
  std::string label;
  KeyPair keys;
  const Address& address() const { return keys.address(); }
};

/// What a producer knows that never goes on chain as such.
struct ProducerKnowledge {
  std::vector<reputation::InteractionRecord> records;
  std::map<Address, std::uint64_t> familiarity;
  reputation::ReputationTable table;
  std::map<Digest, Bytes> secrets;  // hash lock -> R
};

enum class Stage : std::uint8_t { AwaitProof, AwaitC1, AwaitC2, AwaitRelease1, AwaitRelease2, AwaitExpiry, Done };

/// One request served end to end: registration, delivery, then the
/// ownership-for-fee exchange.
struct Session {
  std::uint64_t id = 0;
  std::size_t producer = 0;
  std::size_t esp = 0;
  Height opened = 0;
  Digest index{};
  Bytes content;
  Stage stage = Stage::AwaitProof;
  bool on_time = false;
  htl::ExchangeSession exchange;
};

/// Chain plus agents for one run. Not copyable: agents are referenced by
/// address lookups into its own vectors.
class World {
 public:
  World(const ScenarioConfig& cfg, std::string scenario, bool with_attacker);
  World(const World&) = delete;
  World& operator=(const World&) = delete;

  const ScenarioConfig& cfg() const { return cfg_; }
  /// Height of the block currently being assembled.
  Height round() const { return chain.tip_height() + 1; }

  std::string label(const Address& a) const;
  const KeyPair& keys_of(const Address& a) const;
  std::vector<Address> esp_addresses() const;

  void event(std::string kind, const Address& actor, std::string subject, std::string detail = {});
  /// Submits to the mempool; a failure is logged and reported.
  bool submit(const Expected<Transaction>& tx, const AgentState& who, std::string_view what);

  /// Producer `p` has been accepted by ESP `e` this round: handshake,
  /// generation and registration.
  void open_session(std::size_t p, std::size_t e);
  void step_sessions();
  bool sessions_open() const;
  std::size_t open_session_count() const;

  void refresh_tables();
  void share_opinions();
  /// Scheduled validator produces the round's block; it must apply.
  void close_block();

  /// Service quality of ESP `e` for a request made in `round`.
  double quality(std::size_t e, Height round) const;

  /// Final audit and hand-over of the log.
  MetricsLog finish();

  ChainState chain;
  std::vector<AgentState> esps;
  std::vector<AgentState> producers;
  AgentState consumer;
  std::optional<AgentState> attacker;
  std::vector<ProducerKnowledge> knowledge;
  std::vector<Session> sessions;
  MessageBus bus;
  MetricsLog log;

 private:
  void step(Session& s);
  void deliver(Session& s);

  ScenarioConfig cfg_;
  std::vector<Rng> image_rng_;    // per ESP
  std::vector<Rng> quality_rng_;  // per ESP
  std::vector<Rng> secret_rng_;   // per producer
  std::map<Address, const AgentState*> by_address_;
};

constexpr std::uint64_t kEspKeyBase = 100;
constexpr std::uint64_t kProducerKeyBase = 200;
constexpr std::uint64_t kAttackerKey = 300;
constexpr std::uint64_t kConsumerKey = 400;

}  // namespace aigc::sim::detail
