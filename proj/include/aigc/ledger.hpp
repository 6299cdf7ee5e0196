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
#include <istream>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "aigc/consensus.hpp"
#include "aigc/htl.hpp"
#include "aigc/registry.hpp"
#include "aigc/result.hpp"
#include "aigc/transaction.hpp"

namespace aigc {

/// Which owner a challenger must match when contesting a product.
enum class OwnerCheck : std::uint8_t {
  current = 0,   // owner after any transfers
  original = 1,  // receiver of the GenProof
};

/// Protocol parameters. Committed to by the genesis block.
struct ChainParams {
  consensus::RewardPolicy reward;
  Amount min_challenge_deposit = 10;
  SimilarityThresholds thresholds;
  htl::ExpiryMode expiry_mode = htl::ExpiryMode::literal;
  OwnerCheck owner_check = OwnerCheck::current;
  /// Mempool entries are dropped once they have waited this many blocks.
  Height mempool_max_age = 10;

  Bytes encode() const;
  static Expected<ChainParams> decode(std::span<const std::uint8_t> bytes);
  bool operator==(const ChainParams&) const = default;
};

struct SharedOpinion {
  OpinionShare share;
  Height height = 0;
  bool operator==(const SharedOpinion&) const = default;
};

/// Supply counters maintained by block application.
struct SupplyCounters {
  Amount genesis = 0;
  Amount minted = 0;          // policy rewards paid
  Amount coinbase_total = 0;  // rewards plus recycled forfeits
  Amount forfeited = 0;

  bool operator==(const SupplyCounters&) const = default;
};

/// Everything block application mutates. Copied per block so that a
/// failing block leaves the committed state untouched.
struct WorldState {
  ChainParams params;
  Height height = 0;
  std::map<Address, Amount> balances;
  consensus::StakeRegistry stakes;
  registry::RegistryState registry;
  htl::HtlState htl;
  /// Latest share per (sharer, target ESP).
  std::map<std::pair<Address, Address>, SharedOpinion> opinions;
  SupplyCounters supply;

  Amount balance(const Address& a) const;
  bool operator==(const WorldState&) const = default;
};

struct DigestHash {
  std::size_t operator()(const Digest& d) const noexcept;
};

struct MempoolEntry {
  Transaction tx;
  Height arrival = 0;  // tip height at submission
};

struct ChainState {
  WorldState world;
  std::vector<Block> blocks;
  std::deque<MempoolEntry> mempool;
  std::unordered_map<Digest, Height, DigestHash> tx_index;
  /// Transaction ids whose signatures have already been checked.
  std::unordered_set<Digest, DigestHash> verified;

  Height tip_height() const { return blocks.empty() ? 0 : blocks.back().height; }
  const Digest& tip_hash() const;
  const ChainParams& params() const { return world.params; }
};

// ---- genesis ----------------------------------------------------------------

struct GenesisAllocation {
  Address account;
  Amount balance = 0;
  Amount stake = 0;
};

/// Height-0 block: SYSTEM Payment and Stake transactions, unsigned.
Block make_genesis(const ChainParams& params, std::span<const GenesisAllocation> allocations);

/// Validates and applies a genesis block. Errors: BadHash, InvalidTxInBlock, DecodeFailure.
Expected<ChainState> chain_from_genesis(const Block& genesis);

// ---- transactions and blocks ----------------------------------------------------

/// Admits a user transaction to the mempool.
/// Errors: MalformedPayload (SYSTEM-only payload or SYSTEM sender),
/// BadSignature, DuplicateTx.
Status submit_transaction(ChainState& state, const Transaction& tx);

/// SYSTEM settlements the block at `height` must carry right after the
/// coinbase and any slashes: deregistrations, HTL ownership transfers, then
/// expiries in contract-id order.
std::vector<Transaction> owed_settlements(const WorldState& world, Height height);

/// Validates and appends a block. On error the state is unchanged.
/// Errors: BadLink, BadHash, BadProducer, InvalidTxInBlock, OverspendInBlock,
/// MissingSettlement.
Status apply_block(ChainState& state, const Block& block);

struct ValidationReport {
  bool ok = true;
  Height first_bad_height = 0;
  Errc reason = Errc::BadHash;
};

/// Full replay from genesis, checking every link, hash, producer and
/// transaction.
ValidationReport validate_chain(const ChainState& state);
ValidationReport validate_blocks(std::span<const Block> blocks);

/// Replays blocks into a fresh state.
Expected<ChainState> replay(std::span<const Block> blocks);

// ---- queries ----------------------------------------------------------------------

struct TraceEvent {
  std::string kind;  // GenProof, Challenge, Deregister or Transfer
  Height height = 0;
  Digest tx_id{};
  Address sender;
  Address receiver;
};

/// Lifecycle events touching `index` in chain order.
std::vector<TraceEvent> trace_product(const ChainState& state, const Digest& index);

struct SupplyAudit {
  Amount holdings = 0;  // balances + stakes + escrow + HTL-locked funds
  Amount expected = 0;  // genesis + minted - burned
  Amount coinbase_total = 0;
  Amount coinbase_expected = 0;  // minted + forfeited
  bool ok() const { return holdings == expected && coinbase_total == coinbase_expected; }
  bool operator==(const SupplyAudit&) const = default;
};
SupplyAudit audit_supply(const WorldState& world);

/// Hash of the canonical encoding of the full world state.
Digest state_digest(const WorldState& world);

// ---- persistence ------------------------------------------------------------------

/// One JSON object per block, in height order; digests as lowercase hex.
std::string dump_ndjson(std::span<const Block> blocks);
Expected<std::vector<Block>> parse_ndjson(std::istream& in);

namespace detail {
/// Applies `block` (height >= 1) to `w`, a copy of base.world.
Status apply_block_to(const ChainState& base, WorldState& w, const Block& block, bool use_cache);

Transaction make_coinbase(const WorldState& w, const Address& producer, Height h);
Status apply_coinbase(WorldState& w, const Transaction& tx, const Address& producer, Height h);
/// Checks the evidence against `base` and locks the offender's stake in `w`.
Status apply_slash(const ChainState& base, WorldState& w, const Transaction& tx, Height h);
Status apply_settlement(WorldState& w, const Transaction& tx, Height h);
/// User transaction effects; the signature is checked by the caller.
Status apply_user_tx(WorldState& w, const Transaction& tx, Height h);
/// Payloads only the protocol may send.
bool is_system_only(const Payload& p);
}  // namespace detail

}  // namespace aigc
