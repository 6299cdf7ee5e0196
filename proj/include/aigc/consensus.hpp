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

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "aigc/result.hpp"
#include "aigc/transaction.hpp"

namespace aigc {

struct ChainState;

namespace consensus {

struct StakeEntry {
  Amount amount = 0;
  bool locked = false;
  bool operator==(const StakeEntry&) const = default;
};

/// Delegated proof-of-stake validator set.
///
/// schedule_order always holds exactly the unlocked stakers sorted by
/// (stake descending, address ascending). Locked stakes stay in `stakes`
/// forever; there is no unlock.
struct StakeRegistry {
  std::map<Address, StakeEntry> stakes;
  std::vector<Address> schedule_order;

  void rebuild_schedule();
  bool is_active(const Address& a) const;
  Amount total_staked() const;

  bool operator==(const StakeRegistry&) const = default;
};

/// Coinbase reward derived from a target inflation rate.
///
/// The rate is held as a fixed-point fraction with nine decimal places so
/// that per_block() is an exact integer computation.
struct RewardPolicy {
  double annual_inflation_rate = 0.05;
  std::uint64_t blocks_per_year = 10'000;
  Amount initial_supply = 1'000'000;

  /// floor(rate * initial_supply / blocks_per_year)
  Amount per_block() const;
  bool operator==(const RewardPolicy&) const = default;
};

/// Adds `amount` to esp's stake, debiting `balances[esp]`.
/// Errors: InvalidAmount, InsufficientBalance, AlreadyLocked.
Expected<StakeRegistry> register_stake(const StakeRegistry& reg, std::map<Address, Amount>& balances,
                                       const Address& esp, Amount amount);

/// schedule_order[height mod len]. Errors: NoValidators.
Expected<Address> next_producer(const StakeRegistry& reg, Height height);

/// Locks esp's stake and drops it from the schedule. Errors: UnknownValidator
/// (not a staker, or already locked).
Expected<StakeRegistry> slash(const StakeRegistry& reg, const Address& esp);

/// Builds the next block on top of `state`: Coinbase first, then any owed
/// protocol settlements, then up to `max_txs` mempool transactions in arrival
/// order. Mempool entries that would fail at this height are skipped.
/// `slash_evidence` blocks (signed by the scheduled producer and invalid on
/// the current tip) become Slash transactions; the schedule is evaluated
/// after those slashes take effect.
/// Errors: NotScheduled, BadEvidence.
Expected<Block> produce_block(const ChainState& state, const KeyPair& producer, std::size_t max_txs,
                              std::span<const Block> slash_evidence = {});

}  // namespace consensus
}  // namespace aigc
