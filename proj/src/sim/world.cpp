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

#include "world.hpp"

#include <stdexcept>

#include "aigc/consensus.hpp"
#include "aigc/registry.hpp"
#include "aigc/sim/images.hpp"

namespace aigc::sim::detail {

namespace {

AgentState make_agent(Role role, std::string label, std::uint64_t key_index) {
  return {role, std::move(label), KeyPair::from_index(key_index)};
}

std::string outcome_name(reputation::Outcome o) {
  return o == reputation::Outcome::Positive ? "positive" : "negative";
}

}  // namespace

World::World(const ScenarioConfig& cfg, std::string scenario, bool with_attacker)
    : consumer(make_agent(Role::Consumer, "C1", kConsumerKey)), cfg_(cfg) {
  log.scenario = std::move(scenario);
  log.seed = cfg.seed;

  std::vector<GenesisAllocation> alloc;
  for (std::size_t i = 0; i < cfg.esps.size(); ++i) {
    esps.push_back(make_agent(Role::Esp, "ESP" + std::to_string(i + 1), kEspKeyBase + i));
    alloc.push_back({esps.back().address(), 0, cfg.esps[i].stake});
    image_rng_.push_back(Rng::derive(cfg.seed, "image", i));
    quality_rng_.push_back(Rng::derive(cfg.seed, "quality", i));
  }
  for (std::uint64_t j = 0; j < cfg.producers; ++j) {
    producers.push_back(make_agent(Role::Producer, "P" + std::to_string(j + 1), kProducerKeyBase + j));
    alloc.push_back({producers.back().address(), cfg.producer_balance, 0});
    secret_rng_.push_back(Rng::derive(cfg.seed, "secret", j));
  }
  knowledge.resize(producers.size());
  alloc.push_back({consumer.address(), cfg.producer_balance, 0});
  if (with_attacker) {
    attacker = make_agent(Role::Attacker, "A1", kAttackerKey);
    alloc.push_back({attacker->address(), cfg.producer_balance, cfg.attack.attacker_stakes ? Amount{100} : 0});
  }

  for (const auto& a : esps) by_address_[a.address()] = &a;
  for (const auto& a : producers) by_address_[a.address()] = &a;
  by_address_[consumer.address()] = &consumer;
  if (attacker) by_address_[attacker->address()] = &*attacker;
  for (const auto& [addr, agent] : by_address_) log.audit.labels[agent->label] = addr.hex();

  auto genesis = chain_from_genesis(make_genesis(cfg.chain_params(), alloc));
  if (!genesis) throw std::logic_error("scenario genesis rejected");
  chain = std::move(*genesis);
}

std::string World::label(const Address& a) const {
  if (a.is_system()) return "SYSTEM";
  auto it = by_address_.find(a);
  return it == by_address_.end() ? a.short_hex() : it->second->label;
}

const KeyPair& World::keys_of(const Address& a) const { return by_address_.at(a)->keys; }

std::vector<Address> World::esp_addresses() const {
  std::vector<Address> out;
  for (const auto& e : esps) out.push_back(e.address());
  return out;
}

void World::event(std::string kind, const Address& actor, std::string subject, std::string detail) {
  log.events.push_back({round(), std::move(kind), label(actor), std::move(subject), std::move(detail)});
}

bool World::submit(const Expected<Transaction>& tx, const AgentState& who, std::string_view what) {
  Status st = tx ? submit_transaction(chain, *tx) : Status(tx.error());
  if (st) return true;
  event("tx_rejected", who.address(), std::string(what), std::string(to_string(st.error())));
  return false;
}

double World::quality(std::size_t e, Height round) const {
  const auto& esp = cfg_.esps[e];
  if (esp.misbehave_from_round && round >= *esp.misbehave_from_round) return 0.0;
  return esp.service_quality;
}

void World::open_session(std::size_t p, std::size_t e) {
  const Height t = round();
  const auto& prod = producers[p];
  const auto& esp = esps[e];
  Session s;
  s.id = sessions.size();
  s.producer = p;
  s.esp = e;
  s.opened = t;

  // Producer commits to a fresh secret and hands over its hash.
  const auto r = secret_rng_[p].bytes32();
  Bytes secret(r.begin(), r.end());
  const Digest hash = sha256(secret);
  knowledge[p].secrets[hash] = std::move(secret);
  bus.send({MessageKind::Handshake, prod.address(), esp.address(), t, s.id, hash, {}});

  // ESP generates and registers the content with the producer as owner.
  Digest lock{};
  for (const auto& m : bus.take(esp.address()))
    if (m.kind == MessageKind::Handshake && m.session == s.id) lock = m.digest;
  s.content = similarity::encode_pgm(generate_base(image_rng_[e]));
  ProductMetadata meta{"image-" + std::to_string(s.id), esp.label, t, MediaType::image};
  auto gen = registry::register_product(chain, esp.keys, prod.address(), s.content, meta, t + cfg_.challenge_window, t);
  s.index = gen ? std::get<GenProof>(gen->payload).product_index : sha256(s.content);
  const bool registered = submit(gen, esp, "GenProof");

  s.exchange.giver = esp.address();
  s.exchange.payer = prod.address();
  s.exchange.asset = OwnershipAsset{s.index};
  s.exchange.fee = cfg_.service_fee;
  s.exchange.shared_hash = lock;
  s.exchange.ttl_blocks = cfg_.htl_ttl;
  s.exchange.margin = cfg_.htl_margin;
  s.stage = registered ? Stage::AwaitProof : Stage::Done;
  log.audit.sessions_opened++;
  event("request", prod.address(), esp.label, "session " + std::to_string(s.id));
  if (registered)
    deliver(s);
  else
    log.audit.outcomes["Unregistered"]++;
  sessions.push_back(std::move(s));
}

void World::deliver(Session& s) {
  const Height t = round();
  const auto& prod = producers[s.producer];
  const auto& esp = esps[s.esp];
  s.on_time = quality_rng_[s.esp].bernoulli(quality(s.esp, s.opened));
  if (s.on_time) bus.send({MessageKind::Deliver, esp.address(), prod.address(), t, s.id, s.index, s.content});

  // The producer judges the service only by whether it arrived before the deadline.
  bool received = false;
  for (const auto& m : bus.take(prod.address()))
    if (m.kind == MessageKind::Deliver && m.session == s.id && sha256(m.body) == s.index) received = true;
  const auto outcome = received ? reputation::Outcome::Positive : reputation::Outcome::Negative;
  auto& k = knowledge[s.producer];
  k.records.push_back({prod.address(), esp.address(), t, outcome, cfg_.service_fee});
  if (received || cfg_.familiarity_basis == FamiliarityBasis::attempts) k.familiarity[esp.address()]++;
  event("deliver", prod.address(), esp.label, outcome_name(outcome));
}

void World::step(Session& s) {
  const Height t = round();
  const auto& prod = producers[s.producer];
  const auto& esp = esps[s.esp];
  const auto& world = chain.world;
  auto& ex = s.exchange;
  const htl::HtlContract* c1 = ex.c_ownership ? world.htl.find(*ex.c_ownership) : nullptr;
  const htl::HtlContract* c2 = ex.c_funds ? world.htl.find(*ex.c_funds) : nullptr;
  auto locked = [](const htl::HtlContract* c) { return c && c->state == htl::ContractState::Locked; };

  switch (s.stage) {
    case Stage::AwaitProof: {
      if (!world.registry.find(s.index)) return;
      auto tx = htl::create_lock(chain, esp.keys, OwnershipAsset{s.index}, ex.shared_hash, prod.address(),
                                 t + cfg_.htl_ttl, t);
      if (!submit(tx, esp, "HtlLock")) {
        s.stage = Stage::Done;
        log.audit.outcomes["Unfunded"]++;
        return;
      }
      ex.c_ownership = tx->id;
      s.stage = Stage::AwaitC1;
      return;
    }
    case Stage::AwaitC1: {
      if (!locked(c1)) return;
      if (!s.on_time) {
        s.stage = Stage::AwaitExpiry;  // nothing to pay for
        return;
      }
      auto tx = htl::create_lock(chain, prod.keys, FundsAsset{ex.fee}, ex.shared_hash, esp.address(),
                                 c1->expiration_height + cfg_.htl_margin, t);
      if (submit(tx, prod, "HtlLock")) {
        ex.c_funds = tx->id;
        s.stage = Stage::AwaitC2;
      } else {
        s.stage = Stage::AwaitExpiry;
      }
      return;
    }
    case Stage::AwaitC2: {
      if (!locked(c2)) return;
      const auto& secret = knowledge[s.producer].secrets.at(ex.shared_hash);
      s.stage = submit(htl::release(chain, prod.keys, c1->contract_id, secret, t), prod, "HtlRelease")
                    ? Stage::AwaitRelease1
                    : Stage::AwaitExpiry;
      return;
    }
    case Stage::AwaitRelease1: {
      if (!c1 || c1->state != htl::ContractState::Released) {
        if (!locked(c1)) s.stage = Stage::AwaitExpiry;
        return;
      }
      knowledge[s.producer].secrets.erase(ex.shared_hash);
      s.stage = submit(htl::release(chain, esp.keys, c2->contract_id, c1->preimage, t), esp, "HtlRelease")
                    ? Stage::AwaitRelease2
                    : Stage::AwaitExpiry;
      return;
    }
    case Stage::AwaitRelease2:
    case Stage::AwaitExpiry: {
      const auto outcome = ex.outcome(world);
      if (outcome == htl::ExchangeOutcome::Pending) return;
      for (const auto& owed : world.htl.owed_transfers)
        if (owed.product_index == s.index) return;
      knowledge[s.producer].secrets.erase(ex.shared_hash);
      s.stage = Stage::Done;
      const std::string name(htl::to_string(outcome));
      log.audit.outcomes[name]++;
      event("exchange", esp.address(), prod.label, name);
      return;
    }
    case Stage::Done:
      return;
  }
}

void World::step_sessions() {
  for (auto& s : sessions) step(s);
}

std::size_t World::open_session_count() const {
  std::size_t n = 0;
  for (const auto& s : sessions) n += s.stage != Stage::Done;
  return n;
}

bool World::sessions_open() const { return open_session_count() > 0; }

void World::refresh_tables() {
  const Height t = round();
  const auto esp_addrs = esp_addresses();
  const auto params = cfg_.reputation_params();
  for (std::size_t j = 0; j < producers.size(); ++j) {
    auto& k = knowledge[j];
    k.table = reputation::build_table(producers[j].address(), esp_addrs, k.records, chain.world, params, t);
    for (const auto& e : esps) {
      const auto& entry = k.table.at(e.address());
      const auto& o = entry.final_opinion;
      log.reputation.push_back({t, producers[j].label, e.label, o.p, o.n, o.u, entry.reputation});
    }
  }
}

void World::share_opinions() {
  const auto params = cfg_.reputation_params();
  for (std::size_t j = 0; j < producers.size(); ++j)
    for (const auto& tx : reputation::share_opinions(producers[j].keys, knowledge[j].records, params, round()))
      submit(tx, producers[j], "OpinionShare");
}

void World::close_block() {
  const Height h = round();
  auto who = consensus::next_producer(chain.world.stakes, h);
  if (!who) throw std::logic_error("no scheduled producer");
  auto block = consensus::produce_block(chain, keys_of(*who), cfg_.max_txs_per_block);
  if (!block) throw std::logic_error("block production failed: " + std::string(to_string(block.error())));
  if (auto st = apply_block(chain, *block); !st)
    throw std::logic_error("own block rejected: " + std::string(to_string(st.error())));
}

MetricsLog World::finish() {
  log.audit.supply = audit_supply(chain.world);
  log.audit.blocks = chain.tip_height();
  log.audit.state = state_digest(chain.world);
  log.audit.checks["supply_conserved"] = log.audit.supply.ok();
  log.audit.checks["no_open_sessions"] = !sessions_open();
  log.chain = chain.blocks;
  return std::move(log);
}

}  // namespace aigc::sim::detail
