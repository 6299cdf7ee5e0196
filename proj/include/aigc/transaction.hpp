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

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "aigc/crypto.hpp"
#include "aigc/opinion.hpp"
#include "aigc/similarity.hpp"

namespace aigc {

using Amount = std::uint64_t;
using Height = std::uint64_t;

using similarity::SimilarityThresholds;
using similarity::SimilarityTuple;

enum class MediaType : std::uint8_t { image = 0 };

struct ProductMetadata {
  std::string title;
  std::string creator_hint;
  std::uint64_t created_round = 0;
  MediaType media_type = MediaType::image;
  bool operator==(const ProductMetadata&) const = default;
};

// ---- payload variants -------------------------------------------------------

struct GenProof {
  Digest product_index{};
  ProductMetadata metadata;
  std::uint64_t challenge_expiration = 0;
  bool operator==(const GenProof&) const = default;
};

struct Challenge {
  Bytes product_1;
  Digest index_1{};
  Bytes product_2;
  Digest index_2{};
  Amount pledge_deposit = 0;
  bool operator==(const Challenge&) const = default;
};

struct Deregister {
  Digest index_2{};
  Amount pledge_deposit = 0;
  SimilarityTuple similarity;
  bool operator==(const Deregister&) const = default;
};

struct Payment {
  Amount balance = 0;
  bool operator==(const Payment&) const = default;
};

struct Transfer {
  Digest product_index{};
  Address new_owner;
  bool operator==(const Transfer&) const = default;
};

struct OpinionShare {
  Address target_esp;
  Opinion opinion;
  std::uint64_t familiarity = 0;
  Amount value = 0;
  bool operator==(const OpinionShare&) const = default;
};

struct Coinbase {
  Amount reward = 0;
  bool operator==(const Coinbase&) const = default;
};

/// Asset held by a hash-time-lock contract.
struct FundsAsset {
  Amount amount = 0;
  bool operator==(const FundsAsset&) const = default;
};
struct OwnershipAsset {
  Digest product_index{};
  bool operator==(const OwnershipAsset&) const = default;
};
using HtlAsset = std::variant<FundsAsset, OwnershipAsset>;

struct HtlLock {
  HtlAsset asset;
  Digest hash_lock{};
  Address beneficiary;
  Height expiration_height = 0;
  bool operator==(const HtlLock&) const = default;
};
struct HtlRelease {
  Digest contract_id{};
  Bytes preimage;
  bool operator==(const HtlRelease&) const = default;
};
struct HtlExpire {
  Digest contract_id{};
  bool operator==(const HtlExpire&) const = default;
};

struct HtlAction {
  std::variant<HtlLock, HtlRelease, HtlExpire> action;
  bool operator==(const HtlAction&) const = default;
};

/// Validator stake deposit. SYSTEM-sent only in the genesis block.
struct Stake {
  Amount amount = 0;
  bool operator==(const Stake&) const = default;
};

/// Proof that the scheduled producer signed a block that fails validation.
/// `evidence` is the canonical encoding of that block.
struct Slash {
  Address offender;
  Bytes evidence;
  bool operator==(const Slash&) const = default;
};

/// Wire tags follow the variant order.
using Payload = std::variant<GenProof, Challenge, Deregister, Payment, Transfer, OpinionShare, Coinbase,
                             HtlAction, Stake, Slash>;

std::string_view payload_name(const Payload& p);

// ---- transaction ---------------------------------------------------------------

struct Transaction {
  Address sender;
  Address receiver;
  Payload payload;
  std::uint64_t timestamp = 0;
  std::optional<Signature> signature;  // absent only for SYSTEM-sent transactions
  Digest id{};                          // SHA-256 of encode(); see seal()

  /// sender || receiver || payload || timestamp -- the signed message.
  Bytes signing_bytes() const;
  /// signing_bytes() followed by the optional signature envelope.
  Bytes encode() const;
  Digest compute_id() const;

  /// Recomputes `id` from the current contents.
  void seal() { id = compute_id(); }

  static Transaction make_signed(const KeyPair& keys, const Address& receiver, Payload payload,
                                 std::uint64_t timestamp);
  static Transaction make_system(const Address& receiver, Payload payload, std::uint64_t timestamp);

  /// Signature present, key hashes to the sender, and Ed25519 verifies.
  bool signature_valid() const;

  bool operator==(const Transaction&) const = default;
};

/// Throws DecodeError on malformed input. The returned transaction is sealed.
Transaction decode_transaction(std::span<const std::uint8_t> data);

// ---- block ----------------------------------------------------------------------

struct Block {
  Height height = 0;
  Digest prev_hash{};
  Address producer;
  std::vector<Transaction> transactions;
  /// Protocol parameters committed to by the genesis block only; canonical bytes.
  Bytes genesis_params;
  Digest block_hash{};
  std::optional<Signature> producer_signature;

  /// SHA-256 over (height, prev_hash, producer, tx count, ordered tx ids, genesis_params).
  Digest compute_hash() const;
  Bytes encode() const;

  /// Fills block_hash and signs it.
  void seal_and_sign(const KeyPair& producer_keys);

  bool operator==(const Block&) const = default;
};

Block decode_block(std::span<const std::uint8_t> data);

}  // namespace aigc
