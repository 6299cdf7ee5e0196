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

#include "aigc/consensus.hpp"

#include <algorithm>
#include <cmath>

#include "aigc/ledger.hpp"

namespace aigc::consensus {

__extension__ using u128 = unsigned __int128;

void StakeRegistry::rebuild_schedule() {
  schedule_order.clear();
  for (const auto& [addr, entry] : stakes)
    if (!entry.locked && entry.amount > 0) schedule_order.push_back(addr);
  std::stable_sort(schedule_order.begin(), schedule_order.end(), [&](const Address& a, const Address& b) {
    const auto sa = stakes.at(a).amount;
    const auto sb = stakes.at(b).amount;
    if (sa != sb) return sa > sb;
    return a < b;
  });
}

bool StakeRegistry::is_active(const Address& a) const {
  auto it = stakes.find(a);
  return it != stakes.end() && !it->second.locked && it->second.amount > 0;
}

Amount StakeRegistry::total_staked() const {
  Amount total = 0;
  for (const auto& [_, e] : stakes) total += e.amount;
  return total;
}

Amount RewardPolicy::per_block() const {
  constexpr std::int64_t kScale = 1'000'000'000;
  if (blocks_per_year == 0 || !(annual_inflation_rate > 0.0)) return 0;
  const auto rate = static_cast<u128>(std::llround(annual_inflation_rate * kScale));
  const u128 num = rate * initial_supply;
  const u128 den = static_cast<u128>(kScale) * blocks_per_year;
  return static_cast<Amount>(num / den);
}

Expected<StakeRegistry> register_stake(const StakeRegistry& reg, std::map<Address, Amount>& balances,
                                       const Address& esp, Amount amount) {
  if (amount == 0 || esp.is_system()) return Errc::InvalidAmount;
  auto it = reg.stakes.find(esp);
  if (it != reg.stakes.end() && it->second.locked) return Errc::AlreadyLocked;
  auto bal = balances.find(esp);
  if (bal == balances.end() || bal->second < amount) return Errc::InsufficientBalance;
  StakeRegistry next = reg;
  bal->second -= amount;
  next.stakes[esp].amount += amount;
  next.rebuild_schedule();
  return next;
}

Expected<Address> next_producer(const StakeRegistry& reg, Height height) {
  if (reg.schedule_order.empty()) return Errc::NoValidators;
  return reg.schedule_order[height % reg.schedule_order.size()];
}

Expected<StakeRegistry> slash(const StakeRegistry& reg, const Address& esp) {
  auto it = reg.stakes.find(esp);
  if (it == reg.stakes.end() || it->second.locked) return Errc::UnknownValidator;
  StakeRegistry next = reg;
  next.stakes[esp].locked = true;
  next.rebuild_schedule();
  return next;
}

Expected<Block> produce_block(const ChainState& state, const KeyPair& producer, std::size_t max_txs,
                              std::span<const Block> slash_evidence) {
  if (state.blocks.empty()) return Errc::BadLink;
  const Height h = state.tip_height() + 1;
  WorldState w = state.world;

  Block block;
  block.height = h;
  block.prev_hash = state.tip_hash();
  block.producer = producer.address();

  std::vector<Transaction> slashes;
  for (const auto& ev : slash_evidence) {
    auto tx = Transaction::make_system(ev.producer, Slash{ev.producer, ev.encode()}, h);
    if (!detail::apply_slash(state, w, tx, h)) return Errc::BadEvidence;
    slashes.push_back(std::move(tx));
  }

  auto scheduled = next_producer(w.stakes, h);
  if (!scheduled) return scheduled.error();
  if (*scheduled != producer.address()) return Errc::NotScheduled;

  auto coinbase = detail::make_coinbase(w, producer.address(), h);
  if (!detail::apply_coinbase(w, coinbase, producer.address(), h)) return Errc::InvalidTxInBlock;
  block.transactions.push_back(std::move(coinbase));
  for (auto& s : slashes) block.transactions.push_back(std::move(s));

  for (auto& tx : owed_settlements(w, h)) {
    if (!detail::apply_settlement(w, tx, h)) return Errc::MissingSettlement;
    block.transactions.push_back(std::move(tx));
  }

  std::unordered_set<Digest, DigestHash> packed;
  std::size_t user_txs = 0;
  for (const auto& entry : state.mempool) {
    if (user_txs >= max_txs) break;
    const auto& tx = entry.tx;
    if (state.tx_index.contains(tx.id) || packed.contains(tx.id)) continue;
    if (!state.verified.contains(tx.id) && !tx.signature_valid()) continue;
    // apply_user_tx leaves `w` untouched on failure.
    if (!detail::apply_user_tx(w, tx, h)) continue;
    packed.insert(tx.id);
    block.transactions.push_back(tx);
    ++user_txs;
  }

  block.seal_and_sign(producer);
  return block;
}

}  // namespace aigc::consensus
