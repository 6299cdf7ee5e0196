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

#include "aigc/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "aigc/encoding.hpp"

namespace aigc {

// ---- params ---------------------------------------------------------------------

Bytes ChainParams::encode() const {
  Writer w;
  w.f64(reward.annual_inflation_rate);
  w.u64(reward.blocks_per_year);
  w.u64(reward.initial_supply);
  w.u64(min_challenge_deposit);
  w.f64(thresholds.histogram_min);
  w.u32(static_cast<std::uint32_t>(thresholds.phash_max_distance));
  w.u32(static_cast<std::uint32_t>(thresholds.dhash_max_distance));
  w.u8(static_cast<std::uint8_t>(expiry_mode));
  w.u8(static_cast<std::uint8_t>(owner_check));
  w.u64(mempool_max_age);
  return std::move(w).take();
}

Expected<ChainParams> ChainParams::decode(std::span<const std::uint8_t> bytes) {
  try {
    Reader r(bytes);
    ChainParams p;
    p.reward.annual_inflation_rate = r.f64();
    p.reward.blocks_per_year = r.u64();
    p.reward.initial_supply = r.u64();
    p.min_challenge_deposit = r.u64();
    p.thresholds.histogram_min = r.f64();
    p.thresholds.phash_max_distance = static_cast<int>(r.u32());
    p.thresholds.dhash_max_distance = static_cast<int>(r.u32());
    const auto mode = r.u8();
    const auto check = r.u8();
    p.mempool_max_age = r.u64();
    r.expect_end();
    if (mode > 1 || check > 1 || !p.thresholds.valid() || !std::isfinite(p.reward.annual_inflation_rate))
      return Errc::DecodeFailure;
    p.expiry_mode = static_cast<htl::ExpiryMode>(mode);
    p.owner_check = static_cast<OwnerCheck>(check);
    return p;
  } catch (const DecodeError&) {
    return Errc::DecodeFailure;
  }
}

Amount WorldState::balance(const Address& a) const {
  auto it = balances.find(a);
  return it == balances.end() ? 0 : it->second;
}

std::size_t DigestHash::operator()(const Digest& d) const noexcept {
  std::size_t v;
  std::memcpy(&v, d.data(), sizeof v);
  return v;
}

const Digest& ChainState::tip_hash() const {
  static const Digest kZero{};
  return blocks.empty() ? kZero : blocks.back().block_hash;
}

// ---- per-transaction rules --------------------------------------------------------

namespace detail {

bool is_system_only(const Payload& p) {
  if (std::holds_alternative<Deregister>(p) || std::holds_alternative<Transfer>(p) ||
      std::holds_alternative<Coinbase>(p) || std::holds_alternative<Slash>(p))
    return true;
  if (auto* h = std::get_if<HtlAction>(&p)) return std::holds_alternative<HtlExpire>(h->action);
  return false;
}

namespace {
bool is_protocol_tx(const Transaction& tx) { return tx.sender.is_system() && !tx.signature; }
}  // namespace

Transaction make_coinbase(const WorldState& w, const Address& producer, Height h) {
  return Transaction::make_system(producer, Coinbase{w.params.reward.per_block() + w.registry.pending_forfeit}, h);
}

Status apply_coinbase(WorldState& w, const Transaction& tx, const Address& producer, Height) {
  const auto* cb = std::get_if<Coinbase>(&tx.payload);
  if (!cb || !is_protocol_tx(tx) || tx.receiver != producer) return Errc::InvalidTxInBlock;
  const Amount reward = w.params.reward.per_block();
  if (cb->reward != reward + w.registry.pending_forfeit) return Errc::InvalidTxInBlock;
  w.balances[producer] += cb->reward;
  w.supply.minted += reward;
  w.supply.coinbase_total += cb->reward;
  w.registry.pending_forfeit = 0;
  return {};
}

Status apply_slash(const ChainState& base, WorldState& w, const Transaction& tx, Height h) {
  const auto* s = std::get_if<Slash>(&tx.payload);
  if (!s || !is_protocol_tx(tx) || tx.receiver != s->offender) return Errc::BadEvidence;
  Block ev;
  try {
    ev = decode_block(s->evidence);
  } catch (const DecodeError&) {
    return Errc::BadEvidence;
  }
  if (ev.height != h || ev.prev_hash != base.tip_hash() || ev.producer != s->offender) return Errc::BadEvidence;
  auto scheduled = consensus::next_producer(w.stakes, h);
  if (!scheduled || *scheduled != s->offender) return Errc::BadEvidence;
  const auto& sig = ev.producer_signature;
  if (!sig || Address::from_public_key(sig->public_key) != s->offender || !verify(*sig, ev.block_hash))
    return Errc::BadEvidence;
  // Evidence only counts if the signed block really is invalid on this tip.
  WorldState scratch = base.world;
  if (apply_block_to(base, scratch, ev, false)) return Errc::BadEvidence;
  auto slashed = consensus::slash(w.stakes, s->offender);
  if (!slashed) return Errc::BadEvidence;
  w.stakes = std::move(*slashed);
  return {};
}

Status apply_settlement(WorldState& w, const Transaction& tx, Height h) {
  if (!is_protocol_tx(tx)) return Errc::InvalidTxInBlock;
  if (std::holds_alternative<Deregister>(tx.payload)) return registry::detail::apply_deregister(w, tx, h);
  if (std::holds_alternative<Transfer>(tx.payload)) return registry::detail::apply_transfer(w, tx, h);
  if (auto* a = std::get_if<HtlAction>(&tx.payload); a && std::holds_alternative<HtlExpire>(a->action))
    return htl::detail::apply_expire(w, tx, h);
  return Errc::InvalidTxInBlock;
}

Status apply_user_tx(WorldState& w, const Transaction& tx, Height h) {
  if (tx.sender.is_system() || !tx.signature || is_system_only(tx.payload)) return Errc::MalformedPayload;
  if (auto* p = std::get_if<Payment>(&tx.payload)) {
    if (tx.receiver.is_system() || tx.receiver == tx.sender) return Errc::MalformedPayload;
    if (p->balance == 0) return Errc::InvalidAmount;
    if (w.balance(tx.sender) < p->balance) return Errc::InsufficientBalance;
    w.balances[tx.sender] -= p->balance;
    w.balances[tx.receiver] += p->balance;
    return {};
  }
  if (std::holds_alternative<GenProof>(tx.payload)) return registry::detail::apply_gen_proof(w, tx, h);
  if (std::holds_alternative<Challenge>(tx.payload)) return registry::detail::apply_challenge(w, tx, h);
  if (auto* s = std::get_if<OpinionShare>(&tx.payload)) {
    const auto& o = s->opinion;
    // Components are checked individually so raw-proportion opinions remain expressible.
    auto unit = [](double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; };
    if (tx.receiver != s->target_esp || s->target_esp.is_system() || s->target_esp == tx.sender || !unit(o.p) ||
        !unit(o.n) || !unit(o.u))
      return Errc::MalformedPayload;
    w.opinions[{tx.sender, s->target_esp}] = SharedOpinion{*s, h};
    return {};
  }
  if (auto* st = std::get_if<Stake>(&tx.payload)) {
    if (!tx.receiver.is_system()) return Errc::MalformedPayload;
    auto reg = consensus::register_stake(w.stakes, w.balances, tx.sender, st->amount);
    if (!reg) return reg.error();
    w.stakes = std::move(*reg);
    return {};
  }
  if (auto* a = std::get_if<HtlAction>(&tx.payload)) {
    if (std::holds_alternative<HtlLock>(a->action)) return htl::detail::apply_lock(w, tx, h);
    return htl::detail::apply_release(w, tx, h);
  }
  return Errc::MalformedPayload;
}

}  // namespace detail

// ---- genesis ----------------------------------------------------------------------

Block make_genesis(const ChainParams& params, std::span<const GenesisAllocation> allocations) {
  Block g;
  g.producer = Address::system();
  g.genesis_params = params.encode();
  for (const auto& a : allocations) {
    if (a.balance > 0) g.transactions.push_back(Transaction::make_system(a.account, Payment{a.balance}, 0));
    if (a.stake > 0) g.transactions.push_back(Transaction::make_system(a.account, Stake{a.stake}, 0));
  }
  g.block_hash = g.compute_hash();
  return g;
}

Expected<ChainState> chain_from_genesis(const Block& genesis) {
  if (genesis.height != 0 || genesis.prev_hash != Digest{} || !genesis.producer.is_system() ||
      genesis.producer_signature || genesis.block_hash != genesis.compute_hash())
    return Errc::BadHash;
  auto params = ChainParams::decode(genesis.genesis_params);
  if (!params) return params.error();

  ChainState state;
  auto& w = state.world;
  w.params = *params;
  for (const auto& tx : genesis.transactions) {
    if (tx.id != tx.compute_id() || !tx.sender.is_system() || tx.signature || tx.receiver.is_system())
      return Errc::InvalidTxInBlock;
    if (auto* p = std::get_if<Payment>(&tx.payload)) {
      w.balances[tx.receiver] += p->balance;
      w.supply.genesis += p->balance;
    } else if (auto* s = std::get_if<Stake>(&tx.payload)) {
      w.stakes.stakes[tx.receiver].amount += s->amount;
      w.supply.genesis += s->amount;
    } else {
      return Errc::InvalidTxInBlock;
    }
    if (!state.tx_index.emplace(tx.id, 0).second) return Errc::InvalidTxInBlock;
  }
  w.stakes.rebuild_schedule();
  state.blocks.push_back(genesis);
  return state;
}

// ---- mempool ------------------------------------------------------------------------

Status submit_transaction(ChainState& state, const Transaction& tx) {
  if (tx.sender.is_system() || detail::is_system_only(tx.payload)) return Errc::MalformedPayload;
  Transaction sealed = tx;
  sealed.seal();
  if (state.tx_index.contains(sealed.id)) return Errc::DuplicateTx;
  for (const auto& e : state.mempool)
    if (e.tx.id == sealed.id) return Errc::DuplicateTx;
  if (!state.verified.contains(sealed.id)) {
    if (!sealed.signature_valid()) return Errc::BadSignature;
    state.verified.insert(sealed.id);
  }
  state.mempool.push_back({std::move(sealed), state.tip_height()});
  return {};
}

// ---- blocks ---------------------------------------------------------------------------

std::vector<Transaction> owed_settlements(const WorldState& world, Height height) {
  std::vector<Transaction> out;
  for (const auto& d : world.registry.owed_deregisters)
    out.push_back(Transaction::make_system(d.challenger, d.payload, height));
  for (const auto& t : world.htl.owed_transfers)
    out.push_back(Transaction::make_system(t.new_owner, Transfer{t.product_index, t.new_owner}, height));
  for (const auto& [id, c] : world.htl.contracts)
    if (c.state == htl::ContractState::Locked && c.expiration_height <= height)
      out.push_back(Transaction::make_system(c.refund_party, HtlAction{HtlExpire{id}}, height));
  return out;
}

namespace detail {

Status apply_block_to(const ChainState& base, WorldState& w, const Block& block, bool use_cache) {
  const Height h = block.height;
  if (base.blocks.empty() || h != base.tip_height() + 1 || block.prev_hash != base.tip_hash()) return Errc::BadLink;
  if (!block.genesis_params.empty() || block.block_hash != block.compute_hash()) return Errc::BadHash;
  const auto& txs = block.transactions;
  for (const auto& tx : txs)
    if (tx.id != tx.compute_id()) return Errc::InvalidTxInBlock;
  if (txs.empty()) return Errc::InvalidTxInBlock;

  std::size_t i = 1;
  for (; i < txs.size() && std::holds_alternative<Slash>(txs[i].payload); ++i)
    if (!apply_slash(base, w, txs[i], h)) return Errc::InvalidTxInBlock;

  auto scheduled = consensus::next_producer(w.stakes, h);
  if (!scheduled || *scheduled != block.producer) return Errc::BadProducer;
  const auto& sig = block.producer_signature;
  if (!sig || Address::from_public_key(sig->public_key) != block.producer || !verify(*sig, block.block_hash))
    return Errc::BadProducer;

  if (!apply_coinbase(w, txs[0], block.producer, h)) return Errc::InvalidTxInBlock;

  const auto owed = owed_settlements(w, h);
  w.registry.owed_deregisters.clear();
  w.htl.owed_transfers.clear();
  for (const auto& expected : owed) {
    if (i >= txs.size() || txs[i].id != expected.id) return Errc::MissingSettlement;
    if (!apply_settlement(w, txs[i], h)) return Errc::InvalidTxInBlock;
    ++i;
  }

  std::unordered_set<Digest, DigestHash> seen;
  for (; i < txs.size(); ++i) {
    const auto& tx = txs[i];
    if (base.tx_index.contains(tx.id) || !seen.insert(tx.id).second) return Errc::InvalidTxInBlock;
    if (tx.sender.is_system() || is_system_only(tx.payload)) return Errc::InvalidTxInBlock;
    const bool sig_ok = (use_cache && base.verified.contains(tx.id)) || tx.signature_valid();
    if (!sig_ok) return Errc::InvalidTxInBlock;
    if (auto st = apply_user_tx(w, tx, h); !st)
      return st.error() == Errc::InsufficientBalance ? Errc::OverspendInBlock : Errc::InvalidTxInBlock;
  }
  w.height = h;
  return {};
}

}  // namespace detail

namespace {

void commit(ChainState& state, const Block& block, WorldState&& w) {
  state.world = std::move(w);
  for (const auto& tx : block.transactions) {
    state.tx_index.emplace(tx.id, block.height);
    if (tx.signature) state.verified.insert(tx.id);
  }
  state.blocks.push_back(block);
  const Height h = block.height;
  const Height max_age = state.world.params.mempool_max_age;
  std::erase_if(state.mempool, [&](const MempoolEntry& e) {
    return state.tx_index.contains(e.tx.id) || h - e.arrival >= max_age;
  });
}

}  // namespace

Status apply_block(ChainState& state, const Block& block) {
  if (state.blocks.empty()) {
    auto fresh = chain_from_genesis(block);
    if (!fresh) return fresh.error();
    state = std::move(*fresh);
    return {};
  }
  WorldState w = state.world;
  if (auto st = detail::apply_block_to(state, w, block, true); !st) return st;
  commit(state, block, std::move(w));
  return {};
}

ValidationReport validate_blocks(std::span<const Block> blocks) {
  if (blocks.empty()) return {};
  auto state = chain_from_genesis(blocks[0]);
  if (!state) return {false, 0, state.error()};
  for (std::size_t k = 1; k < blocks.size(); ++k) {
    WorldState w = state->world;
    if (auto st = detail::apply_block_to(*state, w, blocks[k], false); !st) return {false, k, st.error()};
    commit(*state, blocks[k], std::move(w));
  }
  return {};
}

ValidationReport validate_chain(const ChainState& state) { return validate_blocks(state.blocks); }

Expected<ChainState> replay(std::span<const Block> blocks) {
  if (blocks.empty()) return Errc::BadLink;
  auto state = chain_from_genesis(blocks[0]);
  if (!state) return state.error();
  for (std::size_t k = 1; k < blocks.size(); ++k)
    if (auto st = apply_block(*state, blocks[k]); !st) return st.error();
  return state;
}

// ---- queries ----------------------------------------------------------------------------

std::vector<TraceEvent> trace_product(const ChainState& state, const Digest& index) {
  std::vector<TraceEvent> out;
  for (const auto& b : state.blocks) {
    for (const auto& tx : b.transactions) {
      bool hit = false;
      if (auto* g = std::get_if<GenProof>(&tx.payload)) hit = g->product_index == index;
      else if (auto* c = std::get_if<Challenge>(&tx.payload)) hit = c->index_1 == index || c->index_2 == index;
      else if (auto* d = std::get_if<Deregister>(&tx.payload)) hit = d->index_2 == index;
      else if (auto* t = std::get_if<Transfer>(&tx.payload)) hit = t->product_index == index;
      if (hit) out.push_back({std::string(payload_name(tx.payload)), b.height, tx.id, tx.sender, tx.receiver});
    }
  }
  return out;
}

SupplyAudit audit_supply(const WorldState& w) {
  SupplyAudit a;
  for (const auto& [_, v] : w.balances) a.holdings += v;
  a.holdings += w.stakes.total_staked() + w.registry.escrowed + w.registry.pending_forfeit + w.htl.locked_funds;
  a.expected = w.supply.genesis + w.supply.minted - w.htl.burned;
  a.coinbase_total = w.supply.coinbase_total;
  a.coinbase_expected = w.supply.minted + w.supply.forfeited - w.registry.pending_forfeit;
  return a;
}

Digest state_digest(const WorldState& s) {
  Writer w;
  w.raw(s.params.encode());
  w.u64(s.height);
  w.u64(s.balances.size());
  for (const auto& [a, v] : s.balances) {
    w.fixed(a.raw);
    w.u64(v);
  }
  w.u64(s.stakes.stakes.size());
  for (const auto& [a, e] : s.stakes.stakes) {
    w.fixed(a.raw);
    w.u64(e.amount);
    w.u8(e.locked);
  }
  for (const auto& a : s.stakes.schedule_order) w.fixed(a.raw);
  const auto& reg = s.registry;
  w.u64(reg.products.size());
  for (const auto& [idx, r] : reg.products) {
    w.fixed(idx);
    w.fixed(r.owner.raw);
    w.fixed(r.original_owner.raw);
    w.fixed(r.registrant.raw);
    w.str(r.metadata.title);
    w.str(r.metadata.creator_hint);
    w.u64(r.metadata.created_round);
    w.u64(r.registered_height);
    w.u64(r.challenge_expiration);
    w.u8(static_cast<std::uint8_t>(r.status));
    w.fixed(r.gen_tx_id);
    w.u8(r.delivered);
    w.u8(r.frozen);
    w.fixed(r.locked_by.value_or(Digest{}));
    w.u8(r.pending_deregistration);
  }
  w.u64(reg.challenges.size());
  for (const auto& c : reg.challenges) {
    w.fixed(c.chall_tx_id);
    w.u64(c.height);
    w.u64(c.escrowed);
    w.u8(c.verdict.success);
    w.f64(c.verdict.similarity.histogram);
    w.f64(c.verdict.similarity.phash);
    w.f64(c.verdict.similarity.dhash);
    w.u8(static_cast<std::uint8_t>(c.verdict.deposit_disposition));
  }
  w.u64(reg.escrowed);
  w.u64(reg.pending_forfeit);
  for (const auto& d : reg.owed_deregisters) w.fixed(d.payload.index_2);
  w.u64(s.htl.contracts.size());
  for (const auto& [id, c] : s.htl.contracts) {
    w.fixed(id);
    w.u8(static_cast<std::uint8_t>(c.state));
    w.u64(c.expiration_height);
    w.bytes(c.preimage);
  }
  for (const auto& t : s.htl.owed_transfers) w.fixed(t.product_index);
  w.u64(s.htl.locked_funds);
  w.u64(s.htl.burned);
  w.u64(s.opinions.size());
  for (const auto& [key, o] : s.opinions) {
    w.fixed(key.first.raw);
    w.fixed(key.second.raw);
    w.f64(o.share.opinion.p);
    w.f64(o.share.opinion.n);
    w.f64(o.share.opinion.u);
    w.u64(o.share.familiarity);
    w.u64(o.share.value);
    w.u64(o.height);
  }
  w.u64(s.supply.genesis);
  w.u64(s.supply.minted);
  w.u64(s.supply.coinbase_total);
  w.u64(s.supply.forfeited);
  return sha256(w.data());
}

}  // namespace aigc
