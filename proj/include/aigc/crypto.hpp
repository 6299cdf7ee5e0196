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

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aigc {

using Bytes = std::vector<std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;
using PublicKey = std::array<std::uint8_t, 32>;
using RawSignature = std::array<std::uint8_t, 64>;

Digest sha256(std::span<const std::uint8_t> data);
Digest sha256(std::string_view data);

std::string to_hex(std::span<const std::uint8_t> data);
std::optional<Bytes> from_hex(std::string_view hex);
std::optional<Digest> digest_from_hex(std::string_view hex);

/// 32-byte account identifier: SHA-256 of the Ed25519 public key.
/// The all-zero address is the SYSTEM account and has no key.
struct Address {
  Digest raw{};

  static Address system() { return {}; }
  static Address from_public_key(const PublicKey& pk);

  bool is_system() const noexcept { return raw == Digest{}; }
  std::string hex() const { return to_hex(raw); }
  /// First four bytes in hex, for logs.
  std::string short_hex() const { return hex().substr(0, 8); }

  auto operator<=>(const Address&) const = default;
};

/// Detached signature together with the signer's public key, so a
/// verifier only needs the address to authenticate the signer.
struct Signature {
  PublicKey public_key{};
  RawSignature sig{};

  auto operator<=>(const Signature&) const = default;
};

bool verify(const Signature& signature, std::span<const std::uint8_t> message);

/// Ed25519 key pair. Deterministic from a 32-byte seed.
class KeyPair {
 public:
  static KeyPair from_seed(const Digest& seed);
  /// Test and simulation fixtures: seed i expands to SHA-256("aigc-key" || le64(i)).
  static KeyPair from_index(std::uint64_t index);

  const PublicKey& public_key() const noexcept { return pk_; }
  const Address& address() const noexcept { return address_; }

  Signature sign(std::span<const std::uint8_t> message) const;

 private:
  PublicKey pk_{};
  std::array<std::uint8_t, 64> sk_{};
  Address address_;
};

}  // namespace aigc
