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

#include <nlohmann/json.hpp>
#include <sstream>

#include "aigc/ledger.hpp"

namespace aigc {
namespace {

using nlohmann::json;

struct JsonError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string hex(std::span<const std::uint8_t> b) { return to_hex(b); }

Digest digest_at(const json& j, const char* key) {
  auto d = digest_from_hex(j.at(key).get<std::string>());
  if (!d) throw JsonError(std::string("bad digest in ") + key);
  return *d;
}

Bytes bytes_at(const json& j, const char* key) {
  auto b = from_hex(j.at(key).get<std::string>());
  if (!b) throw JsonError(std::string("bad hex in ") + key);
  return *b;
}

Address address_at(const json& j, const char* key) { return Address{digest_at(j, key)}; }

json signature_json(const std::optional<Signature>& s) {
  if (!s) return nullptr;
  return {{"public_key", hex(s->public_key)}, {"sig", hex(s->sig)}};
}

std::optional<Signature> signature_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  Signature s;
  auto pk = from_hex(j.at("public_key").get<std::string>());
  auto sig = from_hex(j.at("sig").get<std::string>());
  if (!pk || !sig || pk->size() != 32 || sig->size() != 64) throw JsonError("bad signature");
  std::copy(pk->begin(), pk->end(), s.public_key.begin());
  std::copy(sig->begin(), sig->end(), s.sig.begin());
  return s;
}

json asset_json(const HtlAsset& a) {
  if (auto* f = std::get_if<FundsAsset>(&a)) return {{"kind", "Funds"}, {"amount", f->amount}};
  return {{"kind", "Ownership"}, {"product_index", hex(std::get<OwnershipAsset>(a).product_index)}};
}

HtlAsset asset_from(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "Funds") return FundsAsset{j.at("amount").get<Amount>()};
  if (kind == "Ownership") return OwnershipAsset{digest_at(j, "product_index")};
  throw JsonError("unknown asset kind");
}

json similarity_json(const SimilarityTuple& s) {
  return {{"histogram", s.histogram}, {"phash", s.phash}, {"dhash", s.dhash}};
}

SimilarityTuple similarity_from(const json& j) {
  return {j.at("histogram").get<double>(), j.at("phash").get<double>(), j.at("dhash").get<double>()};
}

json payload_json(const Payload& payload) {
  json j;
  j["type"] = std::string(payload_name(payload));
  if (auto* g = std::get_if<GenProof>(&payload)) {
    j["product_index"] = hex(g->product_index);
    j["metadata"] = {{"title", g->metadata.title},
                     {"creator_hint", g->metadata.creator_hint},
                     {"created_round", g->metadata.created_round},
                     {"media_type", "image"}};
    j["challenge_expiration"] = g->challenge_expiration;
  } else if (auto* c = std::get_if<Challenge>(&payload)) {
    j["product_1"] = hex(c->product_1);
    j["index_1"] = hex(c->index_1);
    j["product_2"] = hex(c->product_2);
    j["index_2"] = hex(c->index_2);
    j["pledge_deposit"] = c->pledge_deposit;
  } else if (auto* d = std::get_if<Deregister>(&payload)) {
    j["index_2"] = hex(d->index_2);
    j["pledge_deposit"] = d->pledge_deposit;
    j["similarity"] = similarity_json(d->similarity);
  } else if (auto* p = std::get_if<Payment>(&payload)) {
    j["balance"] = p->balance;
  } else if (auto* t = std::get_if<Transfer>(&payload)) {
    j["product_index"] = hex(t->product_index);
    j["new_owner"] = t->new_owner.hex();
  } else if (auto* s = std::get_if<OpinionShare>(&payload)) {
    j["target_esp"] = s->target_esp.hex();
    j["opinion"] = {{"p", s->opinion.p}, {"n", s->opinion.n}, {"u", s->opinion.u}};
    j["familiarity"] = s->familiarity;
    j["value"] = s->value;
  } else if (auto* cb = std::get_if<Coinbase>(&payload)) {
    j["reward"] = cb->reward;
  } else if (auto* h = std::get_if<HtlAction>(&payload)) {
    if (auto* l = std::get_if<HtlLock>(&h->action)) {
      j["action"] = "Lock";
      j["asset"] = asset_json(l->asset);
      j["hash_lock"] = hex(l->hash_lock);
      j["beneficiary"] = l->beneficiary.hex();
      j["expiration_height"] = l->expiration_height;
    } else if (auto* r = std::get_if<HtlRelease>(&h->action)) {
      j["action"] = "Release";
      j["contract_id"] = hex(r->contract_id);
      j["preimage"] = hex(r->preimage);
    } else {
      j["action"] = "Expire";
      j["contract_id"] = hex(std::get<HtlExpire>(h->action).contract_id);
    }
  } else if (auto* st = std::get_if<Stake>(&payload)) {
    j["amount"] = st->amount;
  } else if (auto* sl = std::get_if<Slash>(&payload)) {
    j["offender"] = sl->offender.hex();
    j["evidence"] = hex(sl->evidence);
  }
  return j;
}

Payload payload_from(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "GenProof") {
    GenProof g;
    g.product_index = digest_at(j, "product_index");
    const auto& m = j.at("metadata");
    g.metadata.title = m.at("title").get<std::string>();
    g.metadata.creator_hint = m.at("creator_hint").get<std::string>();
    g.metadata.created_round = m.at("created_round").get<std::uint64_t>();
    if (m.at("media_type").get<std::string>() != "image") throw JsonError("unknown media type");
    g.challenge_expiration = j.at("challenge_expiration").get<std::uint64_t>();
    return g;
  }
  if (type == "Challenge") {
    return Challenge{bytes_at(j, "product_1"), digest_at(j, "index_1"), bytes_at(j, "product_2"),
                     digest_at(j, "index_2"), j.at("pledge_deposit").get<Amount>()};
  }
  if (type == "Deregister")
    return Deregister{digest_at(j, "index_2"), j.at("pledge_deposit").get<Amount>(), similarity_from(j.at("similarity"))};
  if (type == "Payment") return Payment{j.at("balance").get<Amount>()};
  if (type == "Transfer") return Transfer{digest_at(j, "product_index"), address_at(j, "new_owner")};
  if (type == "OpinionShare") {
    const auto& o = j.at("opinion");
    return OpinionShare{address_at(j, "target_esp"),
                        Opinion{o.at("p").get<double>(), o.at("n").get<double>(), o.at("u").get<double>()},
                        j.at("familiarity").get<std::uint64_t>(), j.at("value").get<Amount>()};
  }
  if (type == "Coinbase") return Coinbase{j.at("reward").get<Amount>()};
  if (type == "HtlAction") {
    const auto action = j.at("action").get<std::string>();
    if (action == "Lock")
      return HtlAction{HtlLock{asset_from(j.at("asset")), digest_at(j, "hash_lock"), address_at(j, "beneficiary"),
                               j.at("expiration_height").get<Height>()}};
    if (action == "Release") return HtlAction{HtlRelease{digest_at(j, "contract_id"), bytes_at(j, "preimage")}};
    if (action == "Expire") return HtlAction{HtlExpire{digest_at(j, "contract_id")}};
    throw JsonError("unknown htl action");
  }
  if (type == "Stake") return Stake{j.at("amount").get<Amount>()};
  if (type == "Slash") return Slash{address_at(j, "offender"), bytes_at(j, "evidence")};
  throw JsonError("unknown payload type");
}

json tx_json(const Transaction& tx) {
  return {{"id", hex(tx.id)},
          {"sender", tx.sender.hex()},
          {"receiver", tx.receiver.hex()},
          {"timestamp", tx.timestamp},
          {"payload", payload_json(tx.payload)},
          {"signature", signature_json(tx.signature)}};
}

Transaction tx_from(const json& j) {
  Transaction tx;
  tx.sender = address_at(j, "sender");
  tx.receiver = address_at(j, "receiver");
  tx.timestamp = j.at("timestamp").get<std::uint64_t>();
  tx.payload = payload_from(j.at("payload"));
  tx.signature = signature_from(j.at("signature"));
  // Keep the recorded id; validation recomputes and compares it.
  tx.id = digest_at(j, "id");
  return tx;
}

}  // namespace

std::string dump_ndjson(std::span<const Block> blocks) {
  std::ostringstream out;
  for (const auto& b : blocks) {
    json j;
    j["height"] = b.height;
    j["prev_hash"] = hex(b.prev_hash);
    j["producer"] = b.producer.hex();
    j["block_hash"] = hex(b.block_hash);
    j["producer_signature"] = signature_json(b.producer_signature);
    if (b.height == 0) {
      j["genesis_params"] = hex(b.genesis_params);
      if (auto p = ChainParams::decode(b.genesis_params)) {
        j["params"] = {{"inflation_rate", p->reward.annual_inflation_rate},
                       {"blocks_per_year", p->reward.blocks_per_year},
                       {"initial_supply", p->reward.initial_supply},
                       {"min_challenge_deposit", p->min_challenge_deposit},
                       {"expiry_mode", p->expiry_mode == htl::ExpiryMode::literal ? "literal" : "refund"}};
      }
    }
    auto& txs = j["transactions"] = json::array();
    for (const auto& tx : b.transactions) txs.push_back(tx_json(tx));
    out << j.dump() << '\n';
  }
  return out.str();
}

Expected<std::vector<Block>> parse_ndjson(std::istream& in) {
  std::vector<Block> blocks;
  std::string line;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto j = json::parse(line);
      Block b;
      b.height = j.at("height").get<Height>();
      b.prev_hash = digest_at(j, "prev_hash");
      b.producer = address_at(j, "producer");
      b.block_hash = digest_at(j, "block_hash");
      b.producer_signature = signature_from(j.at("producer_signature"));
      if (j.contains("genesis_params")) b.genesis_params = bytes_at(j, "genesis_params");
      for (const auto& t : j.at("transactions")) b.transactions.push_back(tx_from(t));
      blocks.push_back(std::move(b));
    }
  } catch (const std::exception&) {
    return Errc::DecodeFailure;
  }
  return blocks;
}

}  // namespace aigc
