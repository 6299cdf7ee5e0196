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

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "aigc/result.hpp"
#include "aigc/transaction.hpp"

namespace aigc {

struct ChainState;
struct WorldState;

namespace htl {

enum class ContractState : std::uint8_t { Locked = 0, Released = 1, Expired = 2 };

/// What happens to a locked asset when its contract expires.
enum class ExpiryMode : std::uint8_t {
  literal = 0,  // funds burned, ownership frozen
  refund = 1,   // asset returns to the refund party
};

struct HtlContract {
  Digest contract_id{};  // id of the Lock transaction
  HtlAsset asset;
  Digest hash_lock{};
  Address beneficiary;
  Address refund_party;
  Height created_height = 0;
  Height expiration_height = 0;
  ContractState state = ContractState::Locked;
  Bytes preimage;  // set on release
  Height settled_height = 0;

  bool operator==(const HtlContract&) const = default;
};

struct PendingTransfer {
  Digest product_index{};
  Address new_owner;
  bool operator==(const PendingTransfer&) const = default;
};

struct HtlState {
  std::map<Digest, HtlContract> contracts;
  std::vector<PendingTransfer> owed_transfers;
  Amount locked_funds = 0;
  Amount burned = 0;

  const HtlContract* find(const Digest& id) const;
  bool operator==(const HtlState&) const = default;
};

/// Lock an asset under `hash_lock`, claimable by `beneficiary` before
/// `expiration_height`. Checked against the next block height.
/// Errors: NotOwner, InsufficientBalance, AlreadyLocked, ExpirationInPast, InvalidAmount.
Expected<Transaction> create_lock(const ChainState& state, const KeyPair& creator, HtlAsset asset,
                                  const Digest& hash_lock, const Address& beneficiary,
                                  Height expiration_height, std::uint64_t timestamp);

/// Claim a contract with the preimage. Anyone may call; the asset always goes
/// to the beneficiary. The first release of a pair additionally requires a
/// counterpart contract with the same hash lock paying this contract's
/// refund party.
/// Errors: UnknownContract, NotLocked, PastExpiration, BadPreimage, CounterpartMissing.
Expected<Transaction> release(const ChainState& state, const KeyPair& caller, const Digest& contract_id,
                              std::span<const std::uint8_t> preimage, std::uint64_t timestamp);

/// SYSTEM settlement marking a contract Expired at `current_height`.
/// Errors: UnknownContract, NotLocked, NotYetExpired.
Expected<Transaction> expire(const WorldState& world, const Digest& contract_id, Height current_height);

// ---- two-way exchange ---------------------------------------------------------

enum class ExchangeOutcome : std::uint8_t {
  Pending,
  BothSettled,
  BothExpired,  // neither side transferred (includes never-funded sessions)
  OwnershipOnly,
  FundsOnly,
};

std::string_view to_string(ExchangeOutcome o);

/// Behaviour of one party in a scripted exchange. Delays are extra blocks
/// waited after a step becomes possible; a crash suspends the party from the
/// given step for `crash_blocks` blocks (UINT64_MAX = forever).
struct PartySchedule {
  std::array<Height, 2> step_delay{0, 0};
  std::optional<int> crash_at_step;
  Height crash_blocks = 0;
};

struct ExchangeSchedule {
  PartySchedule giver;  // steps: 0 = lock C1, 1 = release C2
  PartySchedule payer;  // steps: 0 = lock C2, 1 = release C1
  /// Payer deliberately withholds R (e.g. service was not delivered on time).
  bool payer_withholds = false;
  /// Payer tries to claim C1 before funding C2 (protocol deviation).
  bool payer_eager_release = false;
  /// A third party claims C2 on the giver's behalf once R is public.
  bool watchtower = true;
};

/// One fund <-> ownership swap: C1 locks the giver's asset for the payer,
/// C2 locks the payer's fee for the giver, both under H(R) where the payer
/// knows R. C2 expires `margin` blocks after C1.
struct ExchangeSession {
  Address giver;
  Address payer;
  HtlAsset asset;
  Amount fee = 0;
  Digest shared_hash{};
  Height ttl_blocks = 0;
  Height margin = 2;
  std::optional<Digest> c_ownership;  // C1
  std::optional<Digest> c_funds;      // C2

  ExchangeOutcome outcome(const WorldState& world) const;
};

/// Agents taking part in run_exchange.
struct ExchangeParties {
  const KeyPair* giver = nullptr;
  const KeyPair* payer = nullptr;
  const KeyPair* watchtower = nullptr;
};

/// Drives the session one block at a time: lock(C1 by giver) -> lock(C2 by
/// payer) -> release(C1 by payer, exposing R) -> release(C2 by giver or
/// watchtower). `advance` must produce and apply exactly one block. Stops at a
/// terminal outcome or after `max_blocks`.
struct ExchangeRun {
  ExchangeSession session;
  ExchangeOutcome outcome = ExchangeOutcome::Pending;
  Height blocks = 0;
  /// Height of the first block carrying R, if any.
  std::optional<Height> preimage_revealed_at;
};

ExchangeRun run_exchange(ChainState& state, const ExchangeParties& parties, HtlAsset asset, Amount fee,
                         Height ttl_blocks, Height margin, const Bytes& preimage,
                         const ExchangeSchedule& schedule, const std::function<void(ChainState&)>& advance,
                         Height max_blocks = 64);

namespace detail {
Status apply_lock(WorldState& w, const Transaction& tx, Height h);
Status apply_release(WorldState& w, const Transaction& tx, Height h);
Status apply_expire(WorldState& w, const Transaction& tx, Height h);
}  // namespace detail

}  // namespace htl
}  // namespace aigc
