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

#include <doctest.h>

#include "fixture.hpp"

using namespace aigc;
using aigc::testing::TestChain;

namespace {

const Bytes kSecret(32, 0x5a);

struct Market {
  TestChain c;
  const KeyPair& esp;
  const KeyPair& producer;
  const KeyPair& tower;
  Bytes content = aigc::testing::image_bytes(5);
  Digest index = sha256(content);
  Digest lock_hash = sha256(kSecret);

  explicit Market(ChainParams params = {})
      : c(3, 3, params), esp(c.validators[0]), producer(c.users[0]), tower(c.users[2]) {
    auto g = registry::register_product(c.state, esp, producer.address(), content, {}, 50, 1);
    REQUIRE(g);
    REQUIRE(submit_transaction(c.state, *g));
    REQUIRE(c.advance());
  }

  htl::ExchangeRun exchange(const htl::ExchangeSchedule& schedule, Height ttl = 4, Amount fee = 10) {
    htl::ExchangeParties parties{&esp, &producer, &tower};
    return htl::run_exchange(c.state, parties, OwnershipAsset{index}, fee, ttl, 2, kSecret, schedule,
                             [this](ChainState&) { REQUIRE(c.advance()); });
  }

  Digest lock_c1(Height expiration) {
    auto tx = htl::create_lock(c.state, esp, OwnershipAsset{index}, lock_hash, producer.address(), expiration, 0);
    REQUIRE(tx);
    REQUIRE(submit_transaction(c.state, *tx));
    REQUIRE(c.advance());
    return tx->id;
  }

  Digest lock_c2(Height expiration, Amount fee = 10) {
    auto tx = htl::create_lock(c.state, producer, FundsAsset{fee}, lock_hash, esp.address(), expiration, 0);
    REQUIRE(tx);
    REQUIRE(submit_transaction(c.state, *tx));
    REQUIRE(c.advance());
    return tx->id;
  }
};

}  // namespace

TEST_CASE("honest generation exchange settles both sides") {
  Market m;
  const auto esp_before = m.c.state.world.balance(m.esp.address());
  const auto producer_before = m.c.state.world.balance(m.producer.address());
  auto run = m.exchange({});
  CHECK(run.outcome == htl::ExchangeOutcome::BothSettled);
  const auto* rec = m.c.state.world.registry.find(m.index);
  CHECK(rec->owner == m.producer.address());
  CHECK(rec->delivered);
  CHECK_FALSE(rec->locked_by);
  CHECK(m.c.state.world.balance(m.producer.address()) == producer_before - 10);
  // The ESP is also a validator, so strip its coinbase income before comparing.
  Amount rewards = 0;
  for (const auto& b : m.c.state.blocks)
    if (b.height > 1 && b.producer == m.esp.address())
      rewards += std::get<Coinbase>(b.transactions.front().payload).reward;
  CHECK(m.c.state.world.balance(m.esp.address()) == esp_before + 10 + rewards);

  const auto trace = trace_product(m.c.state, m.index);
  REQUIRE(trace.size() == 2);
  CHECK(trace[0].kind == "GenProof");
  CHECK(trace[0].height == 1);
  CHECK(trace[1].kind == "Transfer");
  CHECK(trace[1].receiver == m.producer.address());
  CHECK(audit_supply(m.c.state.world).ok());
}

TEST_CASE("R stays off chain until the first release") {
  Market m;
  auto run = m.exchange({});
  REQUIRE(run.preimage_revealed_at);
  for (const auto& b : m.c.state.blocks) {
    if (b.height >= *run.preimage_revealed_at) break;
    const auto enc = b.encode();
    CHECK(std::search(enc.begin(), enc.end(), kSecret.begin(), kSecret.end()) == enc.end());
  }
}

TEST_CASE("payer withholding R leads to both contracts expiring") {
  Market m;
  htl::ExchangeSchedule s;
  s.payer_withholds = true;
  auto run = m.exchange(s);
  CHECK(run.outcome == htl::ExchangeOutcome::BothExpired);
  const auto* rec = m.c.state.world.registry.find(m.index);
  CHECK(rec->owner == m.producer.address());
  CHECK_FALSE(rec->delivered);
  CHECK(rec->frozen);
  CHECK(m.c.state.world.htl.burned == 10);
  CHECK(audit_supply(m.c.state.world).ok());
}

TEST_CASE("giver crashing after the C1 release is covered by the watchtower") {
  Market m;
  htl::ExchangeSchedule s;
  s.giver.crash_at_step = 1;
  s.giver.crash_blocks = std::numeric_limits<Height>::max();
  auto run = m.exchange(s);
  CHECK(run.outcome == htl::ExchangeOutcome::BothSettled);
}

TEST_CASE("eager payer cannot claim C1 before funding C2") {
  Market m;
  const auto c1 = m.lock_c1(m.c.next() + 6);
  auto early = htl::release(m.c.state, m.producer, c1, kSecret, 0);
  REQUIRE_FALSE(early);
  CHECK(early.error() == Errc::CounterpartMissing);

  htl::ExchangeSchedule s;
  s.payer_eager_release = true;
  Market m2;
  auto run = m2.exchange(s);
  CHECK(run.outcome == htl::ExchangeOutcome::BothSettled);
}

TEST_CASE("lock preconditions") {
  Market m;
  SUBCASE("expiration must lie beyond the inclusion height") {
    auto tx = htl::create_lock(m.c.state, m.esp, OwnershipAsset{m.index}, m.lock_hash, m.producer.address(),
                               m.c.next(), 0);
    REQUIRE_FALSE(tx);
    CHECK(tx.error() == Errc::ExpirationInPast);
  }
  SUBCASE("only the registrant may lock before delivery") {
    auto tx = htl::create_lock(m.c.state, m.producer, OwnershipAsset{m.index}, m.lock_hash, m.esp.address(), 20, 0);
    REQUIRE_FALSE(tx);
    CHECK(tx.error() == Errc::NotOwner);
  }
  SUBCASE("a locked product cannot be locked again") {
    m.lock_c1(20);
    auto tx = htl::create_lock(m.c.state, m.esp, OwnershipAsset{m.index}, m.lock_hash, m.c.users[1].address(), 20, 0);
    REQUIRE_FALSE(tx);
    CHECK(tx.error() == Errc::AlreadyLocked);
  }
  SUBCASE("funds beyond the balance") {
    auto tx = htl::create_lock(m.c.state, m.producer, FundsAsset{5000}, m.lock_hash, m.esp.address(), 20, 0);
    REQUIRE_FALSE(tx);
    CHECK(tx.error() == Errc::InsufficientBalance);
  }
}

TEST_CASE("release rules") {
  Market m;
  const Height exp1 = m.c.next() + 4;
  const auto c1 = m.lock_c1(exp1);
  const auto c2 = m.lock_c2(exp1 + 2);

  auto wrong = htl::release(m.c.state, m.producer, c1, Bytes(32, 1), 0);
  REQUIRE_FALSE(wrong);
  CHECK(wrong.error() == Errc::BadPreimage);
  CHECK(m.c.state.world.htl.find(c1)->state == htl::ContractState::Locked);

  auto early_expire = htl::expire(m.c.state.world, c2, m.c.next());
  REQUIRE_FALSE(early_expire);
  CHECK(early_expire.error() == Errc::NotYetExpired);

  auto unknown = htl::release(m.c.state, m.producer, Digest{}, kSecret, 0);
  REQUIRE_FALSE(unknown);
  CHECK(unknown.error() == Errc::UnknownContract);

  m.c.advance_to(exp1 - 1);
  auto late = htl::release(m.c.state, m.producer, c1, kSecret, 0);
  REQUIRE_FALSE(late);
  CHECK(late.error() == Errc::PastExpiration);

  REQUIRE(m.c.advance());  // block exp1 carries the C1 expiry
  CHECK(m.c.state.world.htl.find(c1)->state == htl::ContractState::Expired);
  auto after = htl::release(m.c.state, m.producer, c1, kSecret, 0);
  REQUIRE_FALSE(after);
  CHECK(after.error() == Errc::NotLocked);
}

TEST_CASE("expiry burns funds in literal mode and refunds in refund mode") {
  for (auto mode : {htl::ExpiryMode::literal, htl::ExpiryMode::refund}) {
    CAPTURE(static_cast<int>(mode));
    ChainParams p;
    p.expiry_mode = mode;
    Market m(p);
    const auto before = m.c.state.world.balance(m.producer.address());
    const Height exp1 = m.c.next() + 3;
    m.lock_c1(exp1);
    m.lock_c2(exp1 + 2);
    CHECK(m.c.state.world.balance(m.producer.address()) == before - 10);
    m.c.advance_to(exp1 + 2);
    const auto* rec = m.c.state.world.registry.find(m.index);
    if (mode == htl::ExpiryMode::literal) {
      CHECK(m.c.state.world.htl.burned == 10);
      CHECK(m.c.state.world.balance(m.producer.address()) == before - 10);
      CHECK(rec->frozen);
    } else {
      CHECK(m.c.state.world.htl.burned == 0);
      CHECK(m.c.state.world.balance(m.producer.address()) == before);
      CHECK_FALSE(rec->frozen);
      CHECK_FALSE(rec->locked_by);
    }
    CHECK(m.c.state.world.htl.locked_funds == 0);
    CHECK(audit_supply(m.c.state.world).ok());
  }
}

TEST_CASE("delivered owner can sell on to a third party") {
  Market m;
  REQUIRE(m.exchange({}).outcome == htl::ExchangeOutcome::BothSettled);
  const auto& buyer = m.c.users[1];
  htl::ExchangeParties parties{&m.producer, &buyer, &m.tower};
  const Bytes secret2(32, 0x33);
  auto run = htl::run_exchange(m.c.state, parties, OwnershipAsset{m.index}, 25, 4, 2, secret2, {},
                               [&](ChainState&) { REQUIRE(m.c.advance()); });
  CHECK(run.outcome == htl::ExchangeOutcome::BothSettled);
  CHECK(m.c.state.world.registry.find(m.index)->owner == buyer.address());
  const auto trace = trace_product(m.c.state, m.index);
  REQUIRE(trace.size() == 3);
  CHECK(trace[2].kind == "Transfer");
}
