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

TEST_CASE("reward policy is exact fixed-point arithmetic") {
  consensus::RewardPolicy p;
  CHECK(p.per_block() == 5);
  p.annual_inflation_rate = 0.07;
  p.blocks_per_year = 3;
  p.initial_supply = 100;
  CHECK(p.per_block() == 2);  // floor(7 / 3)
  p.annual_inflation_rate = 0.0;
  CHECK(p.per_block() == 0);
  p.annual_inflation_rate = 0.1;
  p.initial_supply = 10'000'000'000'000'000'000ull;
  p.blocks_per_year = 10;
  CHECK(p.per_block() == 100'000'000'000'000'000ull);
}

TEST_CASE("schedule orders by stake then address") {
  consensus::StakeRegistry reg;
  std::map<Address, Amount> bal;
  const auto a = KeyPair::from_index(1).address();
  const auto b = KeyPair::from_index(2).address();
  const auto c = KeyPair::from_index(3).address();
  bal[a] = bal[b] = bal[c] = 100;
  auto r = consensus::register_stake(reg, bal, a, 10);
  REQUIRE(r);
  r = consensus::register_stake(*r, bal, b, 30);
  REQUIRE(r);
  r = consensus::register_stake(*r, bal, c, 10);
  REQUIRE(r);
  CHECK(bal[b] == 70);
  REQUIRE(r->schedule_order.size() == 3);
  CHECK(r->schedule_order[0] == b);
  CHECK(r->schedule_order[1] == std::min(a, c));
  CHECK(r->schedule_order[2] == std::max(a, c));
  CHECK(*consensus::next_producer(*r, 0) == b);
  CHECK(*consensus::next_producer(*r, 4) == r->schedule_order[1]);

  auto over = consensus::register_stake(*r, bal, a, 1000);
  REQUIRE_FALSE(over);
  CHECK(over.error() == Errc::InsufficientBalance);
  auto zero = consensus::register_stake(*r, bal, a, 0);
  REQUIRE_FALSE(zero);
  CHECK(zero.error() == Errc::InvalidAmount);

  auto s = consensus::slash(*r, b);
  REQUIRE(s);
  CHECK(s->schedule_order.size() == 2);
  CHECK(s->stakes.at(b).locked);
  CHECK(s->total_staked() == 50);
  auto twice = consensus::slash(*s, b);
  REQUIRE_FALSE(twice);
  CHECK(twice.error() == Errc::UnknownValidator);
  auto restake = consensus::register_stake(*s, bal, b, 5);
  REQUIRE_FALSE(restake);
  CHECK(restake.error() == Errc::AlreadyLocked);

  consensus::StakeRegistry empty;
  auto none = consensus::next_producer(empty, 3);
  REQUIRE_FALSE(none);
  CHECK(none.error() == Errc::NoValidators);
}

TEST_CASE("equal stakers produce in strict rotation") {
  TestChain c(3, 0);
  std::map<Address, int> produced;
  for (int i = 0; i < 30; ++i) {
    REQUIRE(c.advance());
    ++produced[c.state.blocks.back().producer];
  }
  REQUIRE(produced.size() == 3);
  for (const auto& [_, n] : produced) CHECK(n == 10);
}

TEST_CASE("produce_block refuses an unscheduled key") {
  TestChain c(3, 0);
  const auto& wrong = c.validators[0].address() == c.scheduled(1).address() ? c.validators[1] : c.validators[0];
  auto b = consensus::produce_block(c.state, wrong, 10);
  REQUIRE_FALSE(b);
  CHECK(b.error() == Errc::NotScheduled);
}

TEST_CASE("user stake joins the schedule") {
  TestChain c(2, 1);
  const auto& u = c.users[0];
  REQUIRE(submit_transaction(c.state, Transaction::make_signed(u, Address::system(), Stake{500}, 1)));
  REQUIRE(c.advance());
  CHECK(c.state.world.stakes.is_active(u.address()));
  CHECK(c.state.world.stakes.schedule_order.front() == u.address());
  CHECK(audit_supply(c.state.world).ok());
}

TEST_CASE("a signed invalid block is slashing evidence") {
  TestChain c(3, 2, {}, 3);
  const Height h = c.next();
  const auto& cheat = c.scheduled(h);
  Block bad = c.make_block();
  bad.transactions.push_back(Transaction::make_signed(c.users[0], c.users[1].address(), Payment{4}, 1));
  bad.seal_and_sign(cheat);
  REQUIRE_FALSE(apply_block(c.state, bad));

  consensus::StakeRegistry after = *consensus::slash(c.state.world.stakes, cheat.address());
  const auto& next = *c.keys.at(*consensus::next_producer(after, h));
  auto good = consensus::produce_block(c.state, next, 10, std::vector<Block>{bad});
  REQUIRE(good);
  REQUIRE(apply_block(c.state, *good));
  CHECK(std::holds_alternative<Slash>(good->transactions[1].payload));
  CHECK_FALSE(c.state.world.stakes.is_active(cheat.address()));
  CHECK(c.state.world.stakes.schedule_order.size() == 2);

  SUBCASE("a valid block is not evidence") {
    TestChain d(3, 2);
    Block fine = d.make_block();
    const auto& p = d.scheduled(fine.height);
    consensus::StakeRegistry a2 = *consensus::slash(d.state.world.stakes, p.address());
    const auto& n2 = *d.keys.at(*consensus::next_producer(a2, fine.height));
    auto r = consensus::produce_block(d.state, n2, 10, std::vector<Block>{fine});
    REQUIRE_FALSE(r);
    CHECK(r.error() == Errc::BadEvidence);
  }
}
