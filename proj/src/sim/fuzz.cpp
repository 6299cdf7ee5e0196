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

#include <algorithm>
#include <stdexcept>

#include "aigc/consensus.hpp"
#include "aigc/registry.hpp"
#include "aigc/sim/images.hpp"
#include "aigc/sim/scenarios.hpp"
#include "world.hpp"

namespace aigc::sim {

namespace {

using detail::World;
using htl::ContractState;
using htl::ExchangeOutcome;

constexpr Height kForever = std::numeric_limits<Height>::max();

enum class Kind : std::uint8_t { Generation, Trade };

struct Base {
  ChainState chain;
  Digest index{};
  const detail::AgentState* giver = nullptr;
  const detail::AgentState* payer = nullptr;
};

std::function<void(ChainState&)> advancer(const World& w) {
  return [&w](ChainState& c) {
    const Height h = c.tip_height() + 1;
    auto who = consensus::next_producer(c.world.stakes, h);
    if (!who) throw std::logic_error("no scheduled producer");
    auto block = consensus::produce_block(c, w.keys_of(*who), w.cfg().max_txs_per_block);
    if (!block || !apply_block(c, *block)) throw std::logic_error("fuzz block rejected");
  };
}

/// Chain with one registered, undelivered product (ESP1 -> P1), and
/// optionally its honest first sale already settled so P1 can resell it.
Base make_base(const ScenarioConfig& cfg, World& w, htl::ExpiryMode mode, Kind kind) {
  ScenarioConfig c = cfg;
  c.expiry_mode = mode;
  std::vector<GenesisAllocation> alloc;
  for (std::size_t i = 0; i < w.esps.size(); ++i) alloc.push_back({w.esps[i].address(), 0, cfg.esps[i].stake});
  for (const auto& p : w.producers) alloc.push_back({p.address(), cfg.producer_balance, 0});
  alloc.push_back({w.consumer.address(), cfg.producer_balance, 0});
  auto chain = chain_from_genesis(make_genesis(c.chain_params(), alloc));
  if (!chain) throw std::logic_error("fuzz genesis rejected");

  Base b{std::move(*chain), {}, &w.esps.front(), &w.producers.front()};
  Rng img_rng = Rng::derive(cfg.seed, "fuzz-image");
  const Bytes content = similarity::encode_pgm(generate_base(img_rng));
  b.index = sha256(content);
  auto gen = registry::register_product(b.chain, w.esps.front().keys, w.producers.front().address(), content,
                                        {"fuzz", "ESP1", 1, MediaType::image}, 1 + cfg.challenge_window, 1);
  if (!gen || !submit_transaction(b.chain, *gen)) throw std::logic_error("fuzz registration rejected");
  const auto advance = advancer(w);
  advance(b.chain);

  if (kind == Kind::Trade) {
    Bytes r(32, 0x5a);
    const htl::ExchangeParties parties{&w.esps.front().keys, &w.producers.front().keys, nullptr};
    auto run = htl::run_exchange(b.chain, parties, OwnershipAsset{b.index}, cfg.service_fee, cfg.htl_ttl,
                                 cfg.htl_margin, r, htl::ExchangeSchedule{}, advance);
    if (run.outcome != ExchangeOutcome::BothSettled) throw std::logic_error("fuzz base sale failed");
    while (!b.chain.mempool.empty()) advance(b.chain);
    b.giver = &w.producers.front();
    b.payer = &w.consumer;
  }
  return b;
}

htl::PartySchedule random_party(Rng& rng) {
  htl::PartySchedule p;
  p.step_delay = {rng.below(4), rng.below(4)};
  return p;
}

bool contains(const Bytes& hay, const Bytes& needle) {
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

struct Tally {
  std::uint64_t runs = 0;
  std::uint64_t atomic = 0;
  std::uint64_t terminal = 0;
  std::uint64_t ownership_ok = 0;
  std::uint64_t balances_ok = 0;
  std::uint64_t supply_ok = 0;
  std::uint64_t secrecy_ok = 0;
  std::set<std::pair<int, int>> crash_points;  // (party, step)
  std::set<int> modes;
};

}  // namespace

Expected<MetricsLog> run_exchange_fuzz(const ScenarioConfig& cfg) {
  if (auto st = cfg.validate(); !st) return st.error();
  World w(cfg, "exchange-fuzz", false);
  if (w.producers.size() < 2) return Errc::ConfigInvalid;
  const auto& tower = w.producers[1];
  const auto advance = advancer(w);

  std::vector<Base> bases;
  for (auto mode : {htl::ExpiryMode::literal, htl::ExpiryMode::refund})
    for (auto kind : {Kind::Generation, Kind::Trade}) bases.push_back(make_base(cfg, w, mode, kind));

  Tally tally;
  for (std::uint64_t i = 0; i < cfg.fuzz.schedules; ++i) {
    Rng rng = Rng::derive(cfg.seed, "fuzz", i);
    const std::size_t bi = i % bases.size();
    const auto mode = bi < 2 ? htl::ExpiryMode::literal : htl::ExpiryMode::refund;
    const Base& base = bases[bi];
    ChainState chain = base.chain;

    htl::ExchangeSchedule sched;
    sched.giver = random_party(rng);
    sched.payer = random_party(rng);
    if (rng.bernoulli(0.5)) {
      const int party = static_cast<int>(rng.below(2));
      const int step = static_cast<int>(rng.below(2));
      auto& p = party == 0 ? sched.giver : sched.payer;
      p.crash_at_step = step;
      p.crash_blocks = rng.bernoulli(0.25) ? kForever : 1 + rng.below(8);
      tally.crash_points.insert({party, step});
    }
    sched.payer_withholds = rng.bernoulli(0.1);
    sched.payer_eager_release = rng.bernoulli(0.15);
    sched.watchtower = true;
    const Height ttl = 1 + rng.below(cfg.fuzz.max_ttl);
    const Height margin = 1 + rng.below(3);
    const auto r = rng.bytes32();
    const Bytes preimage(r.begin(), r.end());
    tally.modes.insert(static_cast<int>(mode));

    const Address giver = base.giver->address();
    const Address payer = base.payer->address();
    const Amount giver_before = chain.world.balance(giver);
    const Amount payer_before = chain.world.balance(payer);
    const auto before = *chain.world.registry.find(base.index);
    const Height start = chain.tip_height();
    const htl::ExchangeParties parties{&base.giver->keys, &base.payer->keys, &tower.keys};
    const Height budget = ttl + margin + 16 + 8;
    auto run = htl::run_exchange(chain, parties, OwnershipAsset{base.index}, cfg.service_fee, ttl, margin, preimage,
                                 sched, advance, budget);

    const auto& world = chain.world;
    const auto& s = run.session;
    const auto* c1 = s.c_ownership ? world.htl.find(*s.c_ownership) : nullptr;
    const auto* c2 = s.c_funds ? world.htl.find(*s.c_funds) : nullptr;
    const bool got_asset = c1 && c1->state == ContractState::Released;
    const bool got_fee = c2 && c2->state == ContractState::Released;

    const bool terminal = run.outcome != ExchangeOutcome::Pending;
    const bool atomic = run.outcome != ExchangeOutcome::OwnershipOnly && run.outcome != ExchangeOutcome::FundsOnly;

    const auto* rec = world.registry.find(base.index);
    const bool c1_expired = c1 && c1->state == ContractState::Expired;
    const bool ownership_ok =
        rec && rec->locked_by.has_value() == rec->frozen &&
        (got_asset ? rec->owner == payer && rec->delivered && !rec->frozen
                   : rec->owner == before.owner && rec->delivered == before.delivered &&
                         rec->frozen == (c1_expired && mode == htl::ExpiryMode::literal));

    // Coinbase paid to the giver while it also validates.
    Amount giver_rewards = 0;
    for (std::size_t b = start + 1; b < chain.blocks.size(); ++b)
      if (chain.blocks[b].producer == giver)
        giver_rewards += std::get<Coinbase>(chain.blocks[b].transactions.front().payload).reward;
    const Amount fee = cfg.service_fee;
    const bool fee_gone = got_fee || (c2 && mode == htl::ExpiryMode::literal);
    const bool balances_ok = world.balance(payer) == payer_before - (fee_gone ? fee : 0) &&
                             world.balance(giver) == giver_before + giver_rewards + (got_fee ? fee : 0);

    const bool supply_ok = audit_supply(world).ok();

    std::optional<Height> first_seen;
    for (std::size_t b = start + 1; b < chain.blocks.size() && !first_seen; ++b)
      if (contains(chain.blocks[b].encode(), preimage)) first_seen = chain.blocks[b].height;
    const bool secrecy_ok = first_seen == run.preimage_revealed_at;

    tally.runs++;
    tally.atomic += atomic;
    tally.terminal += terminal;
    tally.ownership_ok += ownership_ok;
    tally.balances_ok += balances_ok;
    tally.supply_ok += supply_ok;
    tally.secrecy_ok += secrecy_ok;
    const std::string outcome(htl::to_string(run.outcome));
    w.log.audit.outcomes[outcome]++;
    w.log.audit.sessions_opened++;
    std::string violations;
    for (const auto& [name, good] : {std::pair{"terminal", terminal}, {"atomic", atomic}, {"ownership", ownership_ok},
                                     {"balances", balances_ok}, {"supply", supply_ok}, {"secrecy", secrecy_ok}})
      if (!good) violations += std::string(" !") + name;
    w.log.events.push_back({i, "exchange", bi % 2 ? "trade" : "generation",
                            std::string(mode == htl::ExpiryMode::literal ? "literal" : "refund") +
                                " ttl=" + std::to_string(ttl) + " margin=" + std::to_string(margin),
                            outcome + violations});
  }

  auto& checks = w.log.audit.checks;
  checks["atomic"] = tally.atomic == tally.runs;
  checks["terminal"] = tally.terminal == tally.runs;
  checks["ownership_consistent"] = tally.ownership_ok == tally.runs;
  checks["balances_consistent"] = tally.balances_ok == tally.runs;
  checks["supply_conserved_each_run"] = tally.supply_ok == tally.runs;
  checks["preimage_secret_until_release"] = tally.secrecy_ok == tally.runs;
  checks["covers_both_modes"] = tally.runs < 2 || tally.modes.size() == 2;
  checks["covers_every_crash_point"] = tally.runs < 64 || tally.crash_points.size() == 4;
  MetricsLog log = w.finish();
  log.chain = bases.front().chain.blocks;
  return log;
}

}  // namespace aigc::sim
