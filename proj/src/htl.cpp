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

#include "aigc/htl.hpp"

#include <limits>

#include "aigc/ledger.hpp"

namespace aigc::htl {

const HtlContract* HtlState::find(const Digest& id) const {
  auto it = contracts.find(id);
  return it == contracts.end() ? nullptr : &it->second;
}

namespace {

Status check_lock(const WorldState& w, const Address& creator, const Address& receiver, const HtlLock& lock,
                  Height h) {
  if (receiver != lock.beneficiary || lock.beneficiary.is_system() || lock.beneficiary == creator)
    return Errc::MalformedPayload;
  if (auto* f = std::get_if<FundsAsset>(&lock.asset)) {
    if (f->amount == 0) return Errc::InvalidAmount;
    if (w.balance(creator) < f->amount) return Errc::InsufficientBalance;
  } else {
    const auto& idx = std::get<OwnershipAsset>(lock.asset).product_index;
    const auto* rec = w.registry.find(idx);
    if (!rec || rec->status != registry::ProductStatus::Active || rec->pending_deregistration)
      return Errc::NotOwner;
    const bool may_lock = (rec->owner == creator && rec->delivered) || (rec->registrant == creator && !rec->delivered);
    if (!may_lock) return Errc::NotOwner;
    if (rec->locked_by || rec->frozen) return Errc::AlreadyLocked;
  }
  if (lock.expiration_height <= h) return Errc::ExpirationInPast;
  return {};
}

Status check_release(const WorldState& w, const HtlRelease& rel, Height h) {
  const auto* c = w.htl.find(rel.contract_id);
  if (!c) return Errc::UnknownContract;
  if (c->state != ContractState::Locked) return Errc::NotLocked;
  if (h >= c->expiration_height) return Errc::PastExpiration;
  if (sha256(rel.preimage) != c->hash_lock) return Errc::BadPreimage;
  // The counterpart paying this contract's refund party must still be claimable.
  for (const auto& [id, other] : w.htl.contracts) {
    if (id == c->contract_id || other.hash_lock != c->hash_lock || other.beneficiary != c->refund_party) continue;
    if (other.state == ContractState::Released) return {};
    if (other.state == ContractState::Locked && other.expiration_height > h + 1) return {};
  }
  return Errc::CounterpartMissing;
}

Status check_expire(const WorldState& w, const HtlExpire& e, Height h) {
  const auto* c = w.htl.find(e.contract_id);
  if (!c) return Errc::UnknownContract;
  if (c->state != ContractState::Locked) return Errc::NotLocked;
  if (h < c->expiration_height) return Errc::NotYetExpired;
  return {};
}

}  // namespace

Expected<Transaction> create_lock(const ChainState& state, const KeyPair& creator, HtlAsset asset,
                                  const Digest& hash_lock, const Address& beneficiary,
                                  Height expiration_height, std::uint64_t timestamp) {
  HtlLock lock{std::move(asset), hash_lock, beneficiary, expiration_height};
  if (auto st = check_lock(state.world, creator.address(), beneficiary, lock, state.tip_height() + 1); !st)
    return st.error();
  return Transaction::make_signed(creator, beneficiary, HtlAction{std::move(lock)}, timestamp);
}

Expected<Transaction> release(const ChainState& state, const KeyPair& caller, const Digest& contract_id,
                              std::span<const std::uint8_t> preimage, std::uint64_t timestamp) {
  HtlRelease rel{contract_id, Bytes(preimage.begin(), preimage.end())};
  if (auto st = check_release(state.world, rel, state.tip_height() + 1); !st) return st.error();
  const auto& c = *state.world.htl.find(contract_id);
  return Transaction::make_signed(caller, c.beneficiary, HtlAction{std::move(rel)}, timestamp);
}

Expected<Transaction> expire(const WorldState& world, const Digest& contract_id, Height current_height) {
  HtlExpire e{contract_id};
  if (auto st = check_expire(world, e, current_height); !st) return st.error();
  const auto& c = *world.htl.find(contract_id);
  return Transaction::make_system(c.refund_party, HtlAction{e}, current_height);
}

namespace detail {

Status apply_lock(WorldState& w, const Transaction& tx, Height h) {
  const auto& lock = std::get<HtlLock>(std::get<HtlAction>(tx.payload).action);
  if (auto st = check_lock(w, tx.sender, tx.receiver, lock, h); !st) return st;
  if (w.htl.contracts.contains(tx.id)) return Errc::DuplicateTx;
  if (auto* f = std::get_if<FundsAsset>(&lock.asset)) {
    w.balances[tx.sender] -= f->amount;
    w.htl.locked_funds += f->amount;
  } else {
    w.registry.products.at(std::get<OwnershipAsset>(lock.asset).product_index).locked_by = tx.id;
  }
  HtlContract c;
  c.contract_id = tx.id;
  c.asset = lock.asset;
  c.hash_lock = lock.hash_lock;
  c.beneficiary = lock.beneficiary;
  c.refund_party = tx.sender;
  c.created_height = h;
  c.expiration_height = lock.expiration_height;
  w.htl.contracts.emplace(c.contract_id, std::move(c));
  return {};
}

Status apply_release(WorldState& w, const Transaction& tx, Height h) {
  const auto& rel = std::get<HtlRelease>(std::get<HtlAction>(tx.payload).action);
  if (auto st = check_release(w, rel, h); !st) return st;
  auto& c = w.htl.contracts.at(rel.contract_id);
  if (tx.receiver != c.beneficiary) return Errc::MalformedPayload;
  c.state = ContractState::Released;
  c.preimage = rel.preimage;
  c.settled_height = h;
  if (auto* f = std::get_if<FundsAsset>(&c.asset)) {
    w.htl.locked_funds -= f->amount;
    w.balances[c.beneficiary] += f->amount;
  } else {
    // The owner changes through the Transfer settlement in the next block.
    w.htl.owed_transfers.push_back({std::get<OwnershipAsset>(c.asset).product_index, c.beneficiary});
  }
  return {};
}

Status apply_expire(WorldState& w, const Transaction& tx, Height h) {
  const auto& e = std::get<HtlExpire>(std::get<HtlAction>(tx.payload).action);
  if (auto st = check_expire(w, e, h); !st) return st;
  auto& c = w.htl.contracts.at(e.contract_id);
  c.state = ContractState::Expired;
  c.settled_height = h;
  const bool refund = w.params.expiry_mode == ExpiryMode::refund;
  if (auto* f = std::get_if<FundsAsset>(&c.asset)) {
    w.htl.locked_funds -= f->amount;
    if (refund)
      w.balances[c.refund_party] += f->amount;
    else
      w.htl.burned += f->amount;
  } else {
    auto& rec = w.registry.products.at(std::get<OwnershipAsset>(c.asset).product_index);
    if (refund)
      rec.locked_by.reset();
    else
      rec.frozen = true;
  }
  return {};
}

}  // namespace detail

// ---- exchange -------------------------------------------------------------------

std::string_view to_string(ExchangeOutcome o) {
  switch (o) {
    case ExchangeOutcome::Pending: return "Pending";
    case ExchangeOutcome::BothSettled: return "BothSettled";
    case ExchangeOutcome::BothExpired: return "BothExpired";
    case ExchangeOutcome::OwnershipOnly: return "OwnershipOnly";
    case ExchangeOutcome::FundsOnly: return "FundsOnly";
  }
  return "?";
}

ExchangeOutcome ExchangeSession::outcome(const WorldState& world) const {
  const HtlContract* c1 = c_ownership ? world.htl.find(*c_ownership) : nullptr;
  const HtlContract* c2 = c_funds ? world.htl.find(*c_funds) : nullptr;
  const bool open = (c1 && c1->state == ContractState::Locked) || (c2 && c2->state == ContractState::Locked);
  if (open) return ExchangeOutcome::Pending;
  const bool own = c1 && c1->state == ContractState::Released;
  const bool funds = c2 && c2->state == ContractState::Released;
  if (own && funds) return ExchangeOutcome::BothSettled;
  if (own) return ExchangeOutcome::OwnershipOnly;
  if (funds) return ExchangeOutcome::FundsOnly;
  return ExchangeOutcome::BothExpired;
}

namespace {

constexpr Height kNever = std::numeric_limits<Height>::max();

/// Blocks a party waits once step `step` is possible.
Height wait_for(const PartySchedule& p, int step) {
  Height wait = p.step_delay[static_cast<std::size_t>(step)];
  if (p.crash_at_step && *p.crash_at_step == step) {
    if (p.crash_blocks == kNever) return kNever;
    wait += p.crash_blocks;
  }
  return wait;
}

struct Step {
  std::optional<Height> enabled_at;  // block count when the step became possible
  bool done = false;

  bool due(Height now, Height wait) {
    if (done) return false;
    if (!enabled_at) enabled_at = now;
    return wait != kNever && now >= *enabled_at + wait;
  }
};

}  // namespace

ExchangeRun run_exchange(ChainState& state, const ExchangeParties& parties, HtlAsset asset, Amount fee,
                         Height ttl_blocks, Height margin, const Bytes& preimage,
                         const ExchangeSchedule& schedule, const std::function<void(ChainState&)>& advance,
                         Height max_blocks) {
  ExchangeRun run;
  auto& s = run.session;
  s.giver = parties.giver->address();
  s.payer = parties.payer->address();
  s.asset = asset;
  s.fee = fee;
  s.shared_hash = sha256(preimage);
  s.ttl_blocks = ttl_blocks;
  s.margin = margin;

  Step giver_lock, giver_release, payer_lock, payer_release, tower_release;
  bool giver_gave_up = false;
  bool payer_gave_up = false;
  bool eager_sent = false;

  auto submit = [&](const Expected<Transaction>& tx) {
    return tx && submit_transaction(state, *tx).has_value();
  };

  for (Height now = 0; now < max_blocks; ++now) {
    const Height next = state.tip_height() + 1;
    const auto& world = state.world;
    const HtlContract* c1 = s.c_ownership ? world.htl.find(*s.c_ownership) : nullptr;
    const HtlContract* c2 = s.c_funds ? world.htl.find(*s.c_funds) : nullptr;
    const bool c1_locked = c1 && c1->state == ContractState::Locked;
    const bool c1_released = c1 && c1->state == ContractState::Released;
    const bool c2_locked = c2 && c2->state == ContractState::Locked;

    // Giver: lock the asset for the payer.
    if (!s.c_ownership && !giver_gave_up && giver_lock.due(now, wait_for(schedule.giver, 0))) {
      giver_lock.done = true;
      auto tx = create_lock(state, *parties.giver, asset, s.shared_hash, s.payer, next + ttl_blocks, next);
      if (submit(tx))
        s.c_ownership = tx->id;
      else
        giver_gave_up = true;
    }

    // Payer: fund the counterpart once C1 is on chain and still releasable after it.
    if (c1_locked && !s.c_funds && !payer_gave_up) {
      if (schedule.payer_eager_release && !eager_sent) {
        eager_sent = true;
        auto raw = Transaction::make_signed(*parties.payer, c1->beneficiary, HtlAction{HtlRelease{c1->contract_id, preimage}}, next);
        (void)submit_transaction(state, raw);
      }
      if (payer_lock.due(now, wait_for(schedule.payer, 0))) {
        payer_lock.done = true;
        if (next + 1 < c1->expiration_height) {
          auto tx = create_lock(state, *parties.payer, FundsAsset{fee}, s.shared_hash, s.giver,
                                c1->expiration_height + margin, next);
          if (submit(tx))
            s.c_funds = tx->id;
          else
            payer_gave_up = true;
        } else {
          payer_gave_up = true;
        }
      }
    }

    // Payer: claim C1, exposing R.
    if (c1_locked && c2_locked && !schedule.payer_withholds &&
        payer_release.due(now, wait_for(schedule.payer, 1))) {
      payer_release.done = true;
      (void)submit(release(state, *parties.payer, c1->contract_id, preimage, next));
    }

    // Giver, or a watchtower on its behalf: claim C2 with the exposed R.
    if (c1_released && !run.preimage_revealed_at) run.preimage_revealed_at = c1->settled_height;
    if (c1_released && c2_locked) {
      const Bytes& exposed = c1->preimage;
      if (giver_release.due(now, wait_for(schedule.giver, 1))) {
        giver_release.done = true;
        (void)submit(release(state, *parties.giver, c2->contract_id, exposed, next));
      }
      if (schedule.watchtower && parties.watchtower && tower_release.due(now, 0)) {
        tower_release.done = true;
        (void)submit(release(state, *parties.watchtower, c2->contract_id, exposed, next));
      }
    }

    const bool nothing_started = !s.c_ownership && giver_gave_up;
    const bool funding_abandoned = s.c_ownership && !s.c_funds && payer_gave_up;
    const auto outcome = s.outcome(state.world);
    if (nothing_started || ((s.c_funds || funding_abandoned) && outcome != ExchangeOutcome::Pending &&
                            state.world.htl.owed_transfers.empty())) {
      run.outcome = nothing_started ? ExchangeOutcome::BothExpired : outcome;
      run.blocks = now;
      return run;
    }
    advance(state);
  }
  run.outcome = s.outcome(state.world);
  run.blocks = max_blocks;
  return run;
}

}  // namespace aigc::htl
