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
#include <optional>
#include <vector>

#include "aigc/result.hpp"
#include "aigc/transaction.hpp"

namespace aigc {

struct ChainState;
struct WorldState;

namespace registry {

enum class ProductStatus : std::uint8_t { Active = 0, Deregistered = 1 };

struct ProductRecord {
  Digest index{};
  Address owner;
  Address original_owner;  // Receiver of the GenProof
  Address registrant;      // Sender of the GenProof (the generating ESP)
  ProductMetadata metadata;
  Height registered_height = 0;
  std::uint64_t challenge_expiration = 0;
  ProductStatus status = ProductStatus::Active;
  Digest gen_tx_id{};
  /// First ownership has been settled through a released lock (or a refund).
  bool delivered = false;
  /// Permanently locked by an expired contract in literal expiry mode.
  bool frozen = false;
  std::optional<Digest> locked_by;
  bool pending_deregistration = false;

  bool operator==(const ProductRecord&) const = default;
};

enum class Disposition : std::uint8_t { Waived = 0, Refunded = 1, Forfeited = 2 };

struct ChallengeVerdict {
  bool success = false;
  SimilarityTuple similarity;
  int passed_metrics = 0;
  Disposition deposit_disposition = Disposition::Waived;
  /// NotOwner (step 2) or HashMismatch (step 3), when adjudication stopped early.
  std::optional<Errc> failure;

  bool operator==(const ChallengeVerdict&) const = default;
};

struct ChallengeRecord {
  Digest chall_tx_id{};
  Address challenger;
  Digest index_1{};
  Digest index_2{};
  Height height = 0;
  Amount escrowed = 0;
  ChallengeVerdict verdict;

  bool operator==(const ChallengeRecord&) const = default;
};

struct PendingDeregister {
  Address challenger;
  Deregister payload;
  bool operator==(const PendingDeregister&) const = default;
};

struct RegistryState {
  std::map<Digest, ProductRecord> products;
  std::vector<ChallengeRecord> challenges;
  Amount escrowed = 0;
  /// Settlements the next block must carry.
  std::vector<PendingDeregister> owed_deregisters;
  /// Forfeited deposits added to the next coinbase.
  Amount pending_forfeit = 0;

  const ProductRecord* find(const Digest& index) const;
  bool operator==(const RegistryState&) const = default;
};

/// Challenges against `original` need no deposit when included at heights
/// registered_height + 1 .. challenge_expiration (the expiration is the last
/// free block height).
bool in_free_window(const ProductRecord& original, Height inclusion_height);

/// Builds the ESP-signed GenProof for `content` with Receiver = owner.
/// Errors: DuplicateIndex, ZeroExpiration.
Expected<Transaction> register_product(const ChainState& state, const KeyPair& esp, const Address& owner,
                                       std::span<const std::uint8_t> content, ProductMetadata metadata,
                                       std::uint64_t challenge_expiration, std::uint64_t timestamp);

/// Builds the challenger-signed Challenge, addressed to the SYSTEM escrow.
/// The deposit window is evaluated for inclusion in the next block.
/// Errors: UnknownProduct, InsufficientDeposit, InsufficientBalance.
Expected<Transaction> initiate_challenge(const ChainState& state, const KeyPair& challenger,
                                         std::span<const std::uint8_t> original,
                                         std::span<const std::uint8_t> duplicate, Amount deposit,
                                         std::uint64_t timestamp);

/// Four-step adjudication against the world state at inclusion time.
/// Pure: every validator reaches the same verdict.
ChallengeVerdict adjudicate_challenge(const WorldState& world, const Transaction& chall_tx,
                                      Height inclusion_height, const SimilarityThresholds& thresholds);

/// Consequence of a verdict.
struct Settlement {
  std::optional<Transaction> deregister;  // SYSTEM -> challenger, owed by the next block
  Amount refund = 0;
  Amount forfeited = 0;
};
Settlement settle_challenge(const ChallengeVerdict& verdict, const Transaction& chall_tx, Amount escrowed,
                            Height settlement_height);

/// Looks up a recorded challenge by transaction id.
const ChallengeRecord* find_challenge(const WorldState& world, const Digest& chall_tx_id);

namespace detail {
Status apply_gen_proof(WorldState& w, const Transaction& tx, Height h);
Status apply_challenge(WorldState& w, const Transaction& tx, Height h);
Status apply_deregister(WorldState& w, const Transaction& tx, Height h);
Status apply_transfer(WorldState& w, const Transaction& tx, Height h);
}  // namespace detail

}  // namespace registry
}  // namespace aigc
