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

#include "aigc/crypto.hpp"

#include <openssl/evp.h>
#include <sodium.h>

#include <stdexcept>

namespace aigc {
namespace {

struct SodiumInit {
  SodiumInit() {
    if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
  }
};

void ensure_sodium() { static const SodiumInit init; }

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

// OpenSSL picks up SHA extensions where the CPU has them.
Digest sha256(std::span<const std::uint8_t> data) {
  Digest out;
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 || len != out.size())
    throw std::runtime_error("sha256 failed");
  return out;
}

Digest sha256(std::string_view data) {
  return sha256(std::span(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

std::string to_hex(std::span<const std::uint8_t> data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (auto b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

std::optional<Bytes> from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) return std::nullopt;
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = hex_value(hex[2 * i]);
    int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return out;
}

std::optional<Digest> digest_from_hex(std::string_view hex) {
  auto bytes = from_hex(hex);
  if (!bytes || bytes->size() != 32) return std::nullopt;
  Digest d;
  std::copy(bytes->begin(), bytes->end(), d.begin());
  return d;
}

Address Address::from_public_key(const PublicKey& pk) { return Address{sha256(pk)}; }

bool verify(const Signature& signature, std::span<const std::uint8_t> message) {
  ensure_sodium();
  return crypto_sign_verify_detached(signature.sig.data(), message.data(), message.size(),
                                     signature.public_key.data()) == 0;
}

KeyPair KeyPair::from_seed(const Digest& seed) {
  ensure_sodium();
  KeyPair kp;
  crypto_sign_seed_keypair(kp.pk_.data(), kp.sk_.data(), seed.data());
  kp.address_ = Address::from_public_key(kp.pk_);
  return kp;
}

KeyPair KeyPair::from_index(std::uint64_t index) {
  std::string material = "aigc-key";
  for (int i = 0; i < 8; ++i) material.push_back(static_cast<char>((index >> (8 * i)) & 0xff));
  return from_seed(sha256(material));
}

Signature KeyPair::sign(std::span<const std::uint8_t> message) const {
  Signature s;
  s.public_key = pk_;
  crypto_sign_detached(s.sig.data(), nullptr, message.data(), message.size(), sk_.data());
  return s;
}

}  // namespace aigc
