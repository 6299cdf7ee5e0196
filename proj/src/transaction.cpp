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

#include "aigc/transaction.hpp"

#include "aigc/encoding.hpp"

namespace aigc {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void put_address(Writer& w, const Address& a) { w.fixed(a.raw); }
Address get_address(Reader& r) { return Address{r.fixed<32>()}; }

void put_opinion(Writer& w, const Opinion& o) {
  w.f64(o.p);
  w.f64(o.n);
  w.f64(o.u);
}

void put_signature(Writer& w, const std::optional<Signature>& s) {
  if (!s) {
    w.u8(0);
    return;
  }
  w.u8(1);
  w.fixed(s->public_key);
  w.fixed(s->sig);
}

std::optional<Signature> get_signature(Reader& r) {
  switch (r.u8()) {
    case 0: return std::nullopt;
    case 1: {
      Signature s;
      s.public_key = r.fixed<32>();
      s.sig = r.fixed<64>();
      return s;
    }
    default: throw DecodeError("bad signature flag");
  }
}

void put_payload(Writer& w, const Payload& payload) {
  w.u8(static_cast<std::uint8_t>(payload.index()));
  std::visit(overloaded{
                 [&](const GenProof& g) {
                   w.fixed(g.product_index);
                   w.str(g.metadata.title);
                   w.str(g.metadata.creator_hint);
                   w.u64(g.metadata.created_round);
                   w.u8(static_cast<std::uint8_t>(g.metadata.media_type));
                   w.u64(g.challenge_expiration);
                 },
                 [&](const Challenge& c) {
                   w.bytes(c.product_1);
                   w.fixed(c.index_1);
                   w.bytes(c.product_2);
                   w.fixed(c.index_2);
                   w.u64(c.pledge_deposit);
                 },
                 [&](const Deregister& d) {
                   w.fixed(d.index_2);
                   w.u64(d.pledge_deposit);
                   w.f64(d.similarity.histogram);
                   w.f64(d.similarity.phash);
                   w.f64(d.similarity.dhash);
                 },
                 [&](const Payment& p) { w.u64(p.balance); },
                 [&](const Transfer& t) {
                   w.fixed(t.product_index);
                   put_address(w, t.new_owner);
                 },
                 [&](const OpinionShare& s) {
                   put_address(w, s.target_esp);
                   put_opinion(w, s.opinion);
                   w.u64(s.familiarity);
                   w.u64(s.value);
                 },
                 [&](const Coinbase& c) { w.u64(c.reward); },
                 [&](const HtlAction& h) {
                   w.u8(static_cast<std::uint8_t>(h.action.index()));
                   std::visit(overloaded{
                                  [&](const HtlLock& l) {
                                    w.u8(static_cast<std::uint8_t>(l.asset.index()));
                                    if (auto* f = std::get_if<FundsAsset>(&l.asset))
                                      w.u64(f->amount);
                                    else
                                      w.fixed(std::get<OwnershipAsset>(l.asset).product_index);
                                    w.fixed(l.hash_lock);
                                    put_address(w, l.beneficiary);
                                    w.u64(l.expiration_height);
                                  },
                                  [&](const HtlRelease& r) {
                                    w.fixed(r.contract_id);
                                    w.bytes(r.preimage);
                                  },
                                  [&](const HtlExpire& e) { w.fixed(e.contract_id); },
                              },
                              h.action);
                 },
                 [&](const Stake& s) { w.u64(s.amount); },
                 [&](const Slash& s) {
                   put_address(w, s.offender);
                   w.bytes(s.evidence);
                 },
             },
             payload);
}

Payload get_payload(Reader& r) {
  switch (r.u8()) {
    case 0: {
      GenProof g;
      g.product_index = r.fixed<32>();
      g.metadata.title = r.str();
      g.metadata.creator_hint = r.str();
      g.metadata.created_round = r.u64();
      if (r.u8() != 0) throw DecodeError("unknown media type");
      g.challenge_expiration = r.u64();
      return g;
    }
    case 1: {
      Challenge c;
      c.product_1 = r.bytes();
      c.index_1 = r.fixed<32>();
      c.product_2 = r.bytes();
      c.index_2 = r.fixed<32>();
      c.pledge_deposit = r.u64();
      return c;
    }
    case 2: {
      Deregister d;
      d.index_2 = r.fixed<32>();
      d.pledge_deposit = r.u64();
      d.similarity.histogram = r.f64();
      d.similarity.phash = r.f64();
      d.similarity.dhash = r.f64();
      return d;
    }
    case 3: return Payment{r.u64()};
    case 4: {
      Transfer t;
      t.product_index = r.fixed<32>();
      t.new_owner = get_address(r);
      return t;
    }
    case 5: {
      OpinionShare s;
      s.target_esp = get_address(r);
      s.opinion.p = r.f64();
      s.opinion.n = r.f64();
      s.opinion.u = r.f64();
      s.familiarity = r.u64();
      s.value = r.u64();
      return s;
    }
    case 6: return Coinbase{r.u64()};
    case 7: {
      HtlAction h;
      switch (r.u8()) {
        case 0: {
          HtlLock l;
          switch (r.u8()) {
            case 0: l.asset = FundsAsset{r.u64()}; break;
            case 1: l.asset = OwnershipAsset{r.fixed<32>()}; break;
            default: throw DecodeError("unknown htl asset");
          }
          l.hash_lock = r.fixed<32>();
          l.beneficiary = get_address(r);
          l.expiration_height = r.u64();
          h.action = l;
          break;
        }
        case 1: {
          HtlRelease rel;
          rel.contract_id = r.fixed<32>();
          rel.preimage = r.bytes();
          h.action = rel;
          break;
        }
        case 2: h.action = HtlExpire{r.fixed<32>()}; break;
        default: throw DecodeError("unknown htl action");
      }
      return h;
    }
    case 8: return Stake{r.u64()};
    case 9: {
      Slash s;
      s.offender = get_address(r);
      s.evidence = r.bytes();
      return s;
    }
    default: throw DecodeError("unknown payload tag");
  }
}

Transaction read_transaction(Reader& r) {
  Transaction tx;
  tx.sender = get_address(r);
  tx.receiver = get_address(r);
  tx.payload = get_payload(r);
  tx.timestamp = r.u64();
  tx.signature = get_signature(r);
  tx.seal();
  return tx;
}

}  // namespace

std::string_view payload_name(const Payload& p) {
  static constexpr std::string_view kNames[] = {"GenProof",     "Challenge", "Deregister", "Payment",
                                                "Transfer",     "OpinionShare", "Coinbase", "HtlAction",
                                                "Stake",        "Slash"};
  return kNames[p.index()];
}

Bytes Transaction::signing_bytes() const {
  Writer w;
  put_address(w, sender);
  put_address(w, receiver);
  put_payload(w, payload);
  w.u64(timestamp);
  return std::move(w).take();
}

Bytes Transaction::encode() const {
  Writer w;
  w.raw(signing_bytes());
  put_signature(w, signature);
  return std::move(w).take();
}

Digest Transaction::compute_id() const { return sha256(encode()); }

Transaction Transaction::make_signed(const KeyPair& keys, const Address& receiver, Payload payload,
                                     std::uint64_t timestamp) {
  Transaction tx;
  tx.sender = keys.address();
  tx.receiver = receiver;
  tx.payload = std::move(payload);
  tx.timestamp = timestamp;
  tx.signature = keys.sign(tx.signing_bytes());
  tx.seal();
  return tx;
}

Transaction Transaction::make_system(const Address& receiver, Payload payload, std::uint64_t timestamp) {
  Transaction tx;
  tx.sender = Address::system();
  tx.receiver = receiver;
  tx.payload = std::move(payload);
  tx.timestamp = timestamp;
  tx.seal();
  return tx;
}

bool Transaction::signature_valid() const {
  if (!signature) return false;
  if (Address::from_public_key(signature->public_key) != sender) return false;
  return verify(*signature, signing_bytes());
}

Transaction decode_transaction(std::span<const std::uint8_t> data) {
  Reader r(data);
  auto tx = read_transaction(r);
  r.expect_end();
  return tx;
}

Digest Block::compute_hash() const {
  Writer w;
  w.u64(height);
  w.fixed(prev_hash);
  put_address(w, producer);
  w.u32(static_cast<std::uint32_t>(transactions.size()));
  for (const auto& tx : transactions) w.fixed(tx.compute_id());
  w.bytes(genesis_params);
  return sha256(w.data());
}

Bytes Block::encode() const {
  Writer w;
  w.u64(height);
  w.fixed(prev_hash);
  put_address(w, producer);
  w.u32(static_cast<std::uint32_t>(transactions.size()));
  for (const auto& tx : transactions) w.bytes(tx.encode());
  w.bytes(genesis_params);
  w.fixed(block_hash);
  put_signature(w, producer_signature);
  return std::move(w).take();
}

void Block::seal_and_sign(const KeyPair& producer_keys) {
  block_hash = compute_hash();
  producer_signature = producer_keys.sign(block_hash);
}

Block decode_block(std::span<const std::uint8_t> data) {
  Reader r(data);
  Block b;
  b.height = r.u64();
  b.prev_hash = r.fixed<32>();
  b.producer = get_address(r);
  const auto n = r.u32();
  if (n > data.size()) throw DecodeError("implausible transaction count");
  b.transactions.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    auto raw = r.bytes();
    b.transactions.push_back(decode_transaction(raw));
  }
  b.genesis_params = r.bytes();
  b.block_hash = r.fixed<32>();
  b.producer_signature = get_signature(r);
  r.expect_end();
  return b;
}

}  // namespace aigc
