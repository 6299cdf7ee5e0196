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

#include "aigc/registry.hpp"

#include "aigc/ledger.hpp"

namespace aigc::registry {

const ProductRecord* RegistryState::find(const Digest& index) const {
  auto it = products.find(index);
  return it == products.end() ? nullptr : &it->second;
}

bool in_free_window(const ProductRecord& original, Height inclusion_height) {
  return inclusion_height > original.registered_height && inclusion_height <= original.challenge_expiration;
}

namespace {

bool is_live(const ProductRecord* r) {
  return r && r->status == ProductStatus::Active && !r->pending_deregistration;
}

Amount escrow_for(const ProductRecord& original, const Challenge& c, Height h) {
  return in_free_window(original, h) ? 0 : c.pledge_deposit;
}

Status check_gen_proof(const WorldState& w, const Address& receiver, const GenProof& g) {
  if (receiver.is_system()) return Errc::MalformedPayload;
  if (g.challenge_expiration == 0) return Errc::ZeroExpiration;
  if (w.registry.products.contains(g.product_index)) return Errc::DuplicateIndex;
  return {};
}

Status check_challenge(const WorldState& w, const Address& challenger, const Address& receiver,
                       const Challenge& c, Height h) {
  if (!receiver.is_system()) return Errc::MalformedPayload;
  if (c.index_1 == c.index_2) return Errc::MalformedPayload;
  const auto* original = w.registry.find(c.index_1);
  const auto* duplicate = w.registry.find(c.index_2);
  if (!is_live(original) || !is_live(duplicate)) return Errc::UnknownProduct;
  const Amount escrow = escrow_for(*original, c, h);
  if (!in_free_window(*original, h) && escrow < w.params.min_challenge_deposit) return Errc::InsufficientDeposit;
  if (escrow > w.balance(challenger)) return Errc::InsufficientBalance;
  return {};
}

}  // namespace

Expected<Transaction> register_product(const ChainState& state, const KeyPair& esp, const Address& owner,
                                       std::span<const std::uint8_t> content, ProductMetadata metadata,
                                       std::uint64_t challenge_expiration, std::uint64_t timestamp) {
  GenProof g{sha256(content), std::move(metadata), challenge_expiration};
  if (auto st = check_gen_proof(state.world, owner, g); !st) return st.error();
  return Transaction::make_signed(esp, owner, std::move(g), timestamp);
}

Expected<Transaction> initiate_challenge(const ChainState& state, const KeyPair& challenger,
                                         std::span<const std::uint8_t> original,
                                         std::span<const std::uint8_t> duplicate, Amount deposit,
                                         std::uint64_t timestamp) {
  Challenge c;
  c.product_1.assign(original.begin(), original.end());
  c.index_1 = sha256(original);
  c.product_2.assign(duplicate.begin(), duplicate.end());
  c.index_2 = sha256(duplicate);
  c.pledge_deposit = deposit;
  const Height h = state.tip_height() + 1;
  if (auto st = check_challenge(state.world, challenger.address(), Address::system(), c, h); !st)
    return st.error();
  return Transaction::make_signed(challenger, Address::system(), std::move(c), timestamp);
}

ChallengeVerdict adjudicate_challenge(const WorldState& world, const Transaction& chall_tx,
                                      Height inclusion_height, const SimilarityThresholds& thresholds) {
  ChallengeVerdict v;
  const auto* c = std::get_if<Challenge>(&chall_tx.payload);
  if (!c) {
    v.failure = Errc::MalformedPayload;
    v.deposit_disposition = Disposition::Waived;
    return v;
  }
  const auto* original = world.registry.find(c->index_1);
  const auto* duplicate = world.registry.find(c->index_2);
  const Amount escrow = original ? escrow_for(*original, *c, inclusion_height) : 0;
  auto fail = [&](Errc e) {
    v.success = false;
    v.failure = e;
    v.deposit_disposition = escrow == 0 ? Disposition::Waived : Disposition::Forfeited;
    return v;
  };

  // Step 1: both proofs must be on record.
  if (!is_live(original) || !is_live(duplicate)) return fail(Errc::UnknownProduct);

  // Step 2: only the owner of the original may challenge.
  const Address& owner =
      world.params.owner_check == OwnerCheck::current ? original->owner : original->original_owner;
  if (chall_tx.sender != owner) return fail(Errc::NotOwner);

  // Step 3: the submitted content must match the registered digests.
  if (sha256(c->product_1) != c->index_1 || sha256(c->product_2) != c->index_2)
    return fail(Errc::HashMismatch);
  auto img1 = similarity::decode_pgm(c->product_1);
  auto img2 = similarity::decode_pgm(c->product_2);
  if (!img1 || !img2) return fail(Errc::MalformedPayload);

  // Step 4: majority of the three metrics.
  const auto report = similarity::is_duplicate(*img1, *img2, thresholds);
  v.similarity = report.tuple;
  v.passed_metrics = report.passed;
  v.success = report.verdict;
  if (escrow == 0)
    v.deposit_disposition = Disposition::Waived;
  else
    v.deposit_disposition = v.success ? Disposition::Refunded : Disposition::Forfeited;
  return v;
}

Settlement settle_challenge(const ChallengeVerdict& verdict, const Transaction& chall_tx, Amount escrowed,
                            Height settlement_height) {
  Settlement s;
  const auto* c = std::get_if<Challenge>(&chall_tx.payload);
  if (!c) return s;
  if (verdict.success) {
    s.deregister = Transaction::make_system(chall_tx.sender, Deregister{c->index_2, escrowed, verdict.similarity},
                                            settlement_height);
    s.refund = escrowed;
  } else {
    s.forfeited = escrowed;
  }
  return s;
}

const ChallengeRecord* find_challenge(const WorldState& world, const Digest& chall_tx_id) {
  for (const auto& c : world.registry.challenges)
    if (c.chall_tx_id == chall_tx_id) return &c;
  return nullptr;
}

namespace detail {

Status apply_gen_proof(WorldState& w, const Transaction& tx, Height h) {
  const auto& g = std::get<GenProof>(tx.payload);
  if (auto st = check_gen_proof(w, tx.receiver, g); !st) return st;
  ProductRecord r;
  r.index = g.product_index;
  r.owner = tx.receiver;
  r.original_owner = tx.receiver;
  r.registrant = tx.sender;
  r.metadata = g.metadata;
  r.registered_height = h;
  r.challenge_expiration = g.challenge_expiration;
  r.gen_tx_id = tx.id;
  w.registry.products.emplace(r.index, std::move(r));
  return {};
}

Status apply_challenge(WorldState& w, const Transaction& tx, Height h) {
  const auto& c = std::get<Challenge>(tx.payload);
  if (auto st = check_challenge(w, tx.sender, tx.receiver, c, h); !st) return st;
  const Amount escrow = escrow_for(w.registry.products.at(c.index_1), c, h);

  auto verdict = adjudicate_challenge(w, tx, h, w.params.thresholds);

  if (escrow > 0) {
    w.balances[tx.sender] -= escrow;
    w.registry.escrowed += escrow;
  }
  auto settlement = settle_challenge(verdict, tx, escrow, h + 1);
  if (settlement.deregister) {
    w.registry.products.at(c.index_2).pending_deregistration = true;
    w.registry.owed_deregisters.push_back(
        {tx.sender, std::get<Deregister>(settlement.deregister->payload)});
  }
  if (settlement.forfeited > 0) {
    w.registry.escrowed -= settlement.forfeited;
    w.registry.pending_forfeit += settlement.forfeited;
    w.supply.forfeited += settlement.forfeited;
  }
  w.registry.challenges.push_back({tx.id, tx.sender, c.index_1, c.index_2, h, escrow, std::move(verdict)});
  return {};
}

Status apply_deregister(WorldState& w, const Transaction& tx, Height) {
  const auto& d = std::get<Deregister>(tx.payload);
  auto it = w.registry.products.find(d.index_2);
  if (it == w.registry.products.end() || it->second.status != ProductStatus::Active) return Errc::UnknownProduct;
  if (d.pledge_deposit > w.registry.escrowed) return Errc::InvalidAmount;
  auto& rec = it->second;
  rec.status = ProductStatus::Deregistered;
  rec.pending_deregistration = false;
  w.registry.escrowed -= d.pledge_deposit;
  if (d.pledge_deposit > 0) w.balances[tx.receiver] += d.pledge_deposit;
  // A validator that claimed a plagiarised product loses its stake.
  if (w.stakes.is_active(rec.original_owner)) {
    auto slashed = consensus::slash(w.stakes, rec.original_owner);
    if (slashed) w.stakes = std::move(*slashed);
  }
  return {};
}

Status apply_transfer(WorldState& w, const Transaction& tx, Height) {
  const auto& t = std::get<Transfer>(tx.payload);
  auto it = w.registry.products.find(t.product_index);
  if (it == w.registry.products.end()) return Errc::UnknownProduct;
  auto& rec = it->second;
  rec.owner = t.new_owner;
  rec.delivered = true;
  rec.locked_by.reset();
  return {};
}

}  // namespace detail
}  // namespace aigc::registry
