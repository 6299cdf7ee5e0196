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

#include <sstream>

#include "aigc/encoding.hpp"
#include "fixture.hpp"

using namespace aigc;
using aigc::testing::TestChain;

namespace {

Transaction pay(const KeyPair& from, const Address& to, Amount amount, std::uint64_t ts = 1) {
  return Transaction::make_signed(from, to, Payment{amount}, ts);
}

Block with_extra_tx(const TestChain& c, const Transaction& tx) {
  Block b = c.make_block();
  b.transactions.push_back(tx);
  b.seal_and_sign(c.scheduled(b.height));
  return b;
}

}  // namespace

TEST_CASE("sha256 of the empty string") {
  CHECK(to_hex(sha256(std::string_view{})) ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("submit_transaction admission rules") {
  TestChain c;
  const auto& alice = c.users[0];
  const auto& bob = c.users[1];

  auto tx = pay(alice, bob.address(), 10);
  REQUIRE(submit_transaction(c.state, tx));
  CHECK(c.state.mempool.size() == 1);

  auto again = submit_transaction(c.state, tx);
  REQUIRE_FALSE(again);
  CHECK(again.error() == Errc::DuplicateTx);

  auto altered = pay(alice, bob.address(), 10, 2);
  std::get<Payment>(altered.payload).balance = 11;
  altered.seal();
  auto bad = submit_transaction(c.state, altered);
  REQUIRE_FALSE(bad);
  CHECK(bad.error() == Errc::BadSignature);

  auto sys = Transaction::make_signed(alice, bob.address(), Coinbase{5}, 3);
  auto mal = submit_transaction(c.state, sys);
  REQUIRE_FALSE(mal);
  CHECK(mal.error() == Errc::MalformedPayload);

  CHECK(c.advance());
  auto on_chain = submit_transaction(c.state, tx);
  REQUIRE_FALSE(on_chain);
  CHECK(on_chain.error() == Errc::DuplicateTx);
}

TEST_CASE("coinbase pays the scheduled producer") {
  TestChain c;
  CHECK(c.state.params().reward.per_block() == 5);
  const auto producer = c.scheduled(1).address();
  const auto before = c.state.world.balance(producer);
  REQUIRE(c.advance());
  CHECK(c.state.world.balance(producer) == before + 5);
  const auto& cb = c.state.blocks.back().transactions.front();
  CHECK(std::get<Coinbase>(cb.payload).reward == 5);
  CHECK(cb.receiver == producer);
}

TEST_CASE("apply_block rejections leave state unchanged") {
  TestChain c(3, 3, {}, 3);
  const auto digest = state_digest(c.state.world);

  SUBCASE("bad link") {
    Block b = c.make_block();
    b.prev_hash[0] ^= 1;
    b.seal_and_sign(c.scheduled(b.height));
    auto st = apply_block(c.state, b);
    REQUIRE_FALSE(st);
    CHECK(st.error() == Errc::BadLink);
  }
  SUBCASE("overspend") {
    auto st = apply_block(c.state, with_extra_tx(c, pay(c.users[0], c.users[1].address(), 4)));
    REQUIRE_FALSE(st);
    CHECK(st.error() == Errc::OverspendInBlock);
  }
  SUBCASE("unscheduled producer") {
    Block b = c.make_block();
    const auto& other = c.scheduled(b.height + 1);
    b.producer = other.address();
    b.transactions.front() = Transaction::make_system(other.address(), Coinbase{5}, b.height);
    b.seal_and_sign(other);
    auto st = apply_block(c.state, b);
    REQUIRE_FALSE(st);
    CHECK(st.error() == Errc::BadProducer);
  }
  SUBCASE("wrong coinbase amount") {
    Block b = c.make_block();
    b.transactions.front() = Transaction::make_system(b.producer, Coinbase{6}, b.height);
    b.seal_and_sign(c.scheduled(b.height));
    auto st = apply_block(c.state, b);
    REQUIRE_FALSE(st);
    CHECK(st.error() == Errc::InvalidTxInBlock);
  }
  SUBCASE("stale block hash") {
    Block b = c.make_block();
    b.block_hash[3] ^= 0x10;
    auto st = apply_block(c.state, b);
    REQUIRE_FALSE(st);
    CHECK(st.error() == Errc::BadHash);
  }
  CHECK(state_digest(c.state.world) == digest);
  CHECK(c.state.blocks.size() == 1);
}

TEST_CASE("packing follows arrival order and skips failing entries") {
  TestChain c(3, 3, {}, 10);
  const auto& a = c.users[0];
  const auto& b = c.users[1];
  const auto& d = c.users[2];
  std::vector<Transaction> txs{pay(a, b.address(), 8, 1), pay(a, d.address(), 8, 2), pay(b, d.address(), 3, 3),
                               pay(d, a.address(), 1, 4)};
  for (const auto& t : txs) REQUIRE(submit_transaction(c.state, t));
  REQUIRE(c.advance());
  const auto& packed = c.state.blocks.back().transactions;
  REQUIRE(packed.size() == 4);  // coinbase + 3
  CHECK(packed[1].id == txs[0].id);
  CHECK(packed[2].id == txs[2].id);
  CHECK(packed[3].id == txs[3].id);
  REQUIRE(c.state.mempool.size() == 1);
  CHECK(c.state.mempool.front().tx.id == txs[1].id);

  SUBCASE("max_txs bounds the user section") {
    REQUIRE(submit_transaction(c.state, pay(b, a.address(), 1, 5)));
    REQUIRE(submit_transaction(c.state, pay(b, a.address(), 1, 6)));
    REQUIRE(c.advance(1));
    CHECK(c.state.blocks.back().transactions.size() == 2);
  }
  SUBCASE("stale entries are dropped after ten blocks") {
    for (int i = 0; i < 8; ++i) REQUIRE(c.advance());  // nine packing attempts so far
    CHECK(c.state.mempool.size() == 1);
    REQUIRE(c.advance());
    CHECK(c.state.mempool.empty());
  }
}

TEST_CASE("validate_chain detects tampering at the mutated height") {
  TestChain c;
  for (int h = 1; h <= 10; ++h) {
    REQUIRE(submit_transaction(c.state, pay(c.users[h % 3], c.users[(h + 1) % 3].address(), 1, h)));
    REQUIRE(c.advance());
  }
  CHECK(validate_chain(c.state).ok);

  SUBCASE("payload byte flip") {
    auto copy = c.state;
    auto& tx = copy.blocks[4].transactions[1];
    std::get<Payment>(tx.payload).balance ^= 1;
    auto r = validate_chain(copy);
    CHECK_FALSE(r.ok);
    CHECK(r.first_bad_height == 4);
  }
  SUBCASE("re-sealed by an unscheduled key") {
    auto copy = c.state;
    auto& b = copy.blocks[4];
    auto& tx = b.transactions[1];
    std::get<Payment>(tx.payload).balance = 2;
    tx.seal();
    const KeyPair* other = nullptr;
    for (const auto& v : c.validators)
      if (v.address() != b.producer) other = &v;
    b.seal_and_sign(*other);
    auto r = validate_chain(copy);
    CHECK_FALSE(r.ok);
    CHECK(r.first_bad_height == 4);
  }
}

TEST_CASE("block and transaction encodings round-trip") {
  TestChain c;
  REQUIRE(submit_transaction(c.state, pay(c.users[0], c.users[1].address(), 7)));
  REQUIRE(c.advance());
  const auto& b = c.state.blocks.back();
  CHECK(decode_block(b.encode()) == b);
  const auto& tx = b.transactions[1];
  CHECK(decode_transaction(tx.encode()) == tx);
  auto enc = tx.encode();
  enc.push_back(0);
  CHECK_THROWS_AS(decode_transaction(enc), DecodeError);
  enc.resize(enc.size() - 5);
  CHECK_THROWS_AS(decode_transaction(enc), DecodeError);
}

TEST_CASE("payment encoding layout") {
  // sender(32) receiver(32) tag(1) amount(8 LE) timestamp(8 LE) sigflag(1)
  auto tx = Transaction::make_system(Address{Digest{1}}, Payment{0x0102}, 7);
  const auto enc = tx.encode();
  REQUIRE(enc.size() == 32 + 32 + 1 + 8 + 8 + 1);
  CHECK(enc[64] == 3);
  CHECK(enc[65] == 0x02);
  CHECK(enc[66] == 0x01);
  CHECK(enc[73] == 7);
  CHECK(enc.back() == 0);
}

TEST_CASE("ndjson dump restores the same chain") {
  TestChain c;
  for (int h = 1; h <= 4; ++h) {
    REQUIRE(submit_transaction(c.state, pay(c.users[0], c.users[1].address(), 1, h)));
    REQUIRE(c.advance());
  }
  const auto text = dump_ndjson(c.state.blocks);
  std::istringstream in(text);
  auto blocks = parse_ndjson(in);
  REQUIRE(blocks);
  CHECK(*blocks == c.state.blocks);
  auto replayed = replay(*blocks);
  REQUIRE(replayed);
  CHECK(state_digest(replayed->world) == state_digest(c.state.world));
  CHECK(dump_ndjson(*blocks) == text);
  CHECK(text.find("\"prev_hash\":\"0000000000000000") != std::string::npos);
}

TEST_CASE("genesis commits to the protocol parameters") {
  ChainParams p;
  p.min_challenge_deposit = 25;
  auto g = make_genesis(p, std::vector<GenesisAllocation>{{KeyPair::from_index(0).address(), 0, 10}});
  auto s = chain_from_genesis(g);
  REQUIRE(s);
  CHECK(s->params() == p);
  g.genesis_params = ChainParams{}.encode();
  CHECK_FALSE(chain_from_genesis(g));
}

TEST_CASE("trace of an unknown product is empty") {
  TestChain c;
  CHECK(trace_product(c.state, sha256(std::string_view("nothing"))).empty());
}

TEST_CASE("supply audit holds across payments and rewards") {
  TestChain c;
  for (int h = 1; h <= 6; ++h) {
    REQUIRE(submit_transaction(c.state, pay(c.users[h % 3], c.users[(h + 2) % 3].address(), 3, h)));
    REQUIRE(c.advance());
  }
  const auto a = audit_supply(c.state.world);
  CHECK(a.ok());
  CHECK(a.holdings == 3 * 1000 + 3 * 100 + 6 * 5);
}
