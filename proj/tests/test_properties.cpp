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

// Randomised invariant checks across modules, plus pinned goldens.

#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "aigc/crypto.hpp"
#include "aigc/htl.hpp"
#include "aigc/registry.hpp"
#include "aigc/reputation.hpp"
#include "aigc/sim/scenarios.hpp"
#include "fixture.hpp"

using namespace aigc;
using aigc::testing::TestChain;

namespace {

std::vector<std::vector<std::string>> read_rows(const std::string& name) {
  std::ifstream in(std::string(AIGC_TEST_DATA) + "/" + name);
  REQUIRE(in);
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(in, line);) {
    std::istringstream ls(line);
    std::vector<std::string> cols;
    for (std::string c; ls >> c;) cols.push_back(c);
    if (!cols.empty()) rows.push_back(cols);
  }
  return rows;
}

Amount holdings(const WorldState& w) {
  Amount sum = w.registry.escrowed + w.registry.pending_forfeit + w.htl.locked_funds;
  for (const auto& [_, b] : w.balances) sum += b;
  for (const auto& [_, s] : w.stakes.stakes) sum += s.amount;
  return sum;
}

Opinion random_opinion(Rng& rng) {
  const double a = rng.uniform01(), b = rng.uniform01();
  const double lo = std::min(a, b), hi = std::max(a, b);
  return {lo, hi - lo, 1.0 - hi};
}

std::vector<reputation::InteractionRecord> random_records(Rng& rng, std::size_t max_len) {
  std::vector<reputation::InteractionRecord> out(rng.below(max_len + 1));
  for (auto& r : out) r.outcome = rng.bernoulli(0.6) ? reputation::Outcome::Positive : reputation::Outcome::Negative;
  return out;
}

}  // namespace

// ---- ledger ----------------------------------------------------------------------

TEST_CASE("random payment traffic conserves supply and replays bit-identically") {
  for (std::uint64_t trial = 0; trial < 4; ++trial) {
    Rng rng = Rng::derive(trial, "payments");
    TestChain c(3, 4);
    const Amount genesis = holdings(c.state.world);
    const Amount reward = c.state.params().reward.per_block();
    for (Height h = 1; h <= 25; ++h) {
      const auto n = rng.below(7);
      for (std::uint64_t i = 0; i < n; ++i) {
        const auto& from = c.users[rng.below(c.users.size())];
        const auto& to = c.users[rng.below(c.users.size())];
        // Some of these overspend and must be skipped at packing time.
        const Amount amount = 1 + rng.below(700);
        CHECK(submit_transaction(c.state, Transaction::make_signed(from, to.address(), Payment{amount}, h * 100 + i)));
      }
      REQUIRE(c.advance());
      const auto audit = audit_supply(c.state.world);
      CHECK(audit.ok());
      CHECK(holdings(c.state.world) == genesis + h * reward);
      for (const auto& [_, b] : c.state.world.balances) CHECK(b >= 0);
    }
    auto again = replay(c.state.blocks);
    REQUIRE(again);
    CHECK(state_digest(again->world) == state_digest(c.state.world));
    CHECK(again->world == c.state.world);
    CHECK(validate_chain(c.state).ok);
  }
}

TEST_CASE("packed transactions keep submission order") {
  for (std::uint64_t trial = 0; trial < 4; ++trial) {
    Rng rng = Rng::derive(trial, "fcfs");
    TestChain c(2, 3, {}, 300);
    std::map<Digest, std::size_t> order;
    std::size_t next = 0;
    for (Height h = 1; h <= 20; ++h) {
      for (auto i = rng.below(6); i > 0; --i) {
        const auto& from = c.users[rng.below(c.users.size())];
        auto tx = Transaction::make_signed(from, c.users[0].address(), Payment{1 + rng.below(200)}, next);
        REQUIRE(submit_transaction(c.state, tx));
        order[tx.id] = next++;
      }
      REQUIRE(c.advance(1 + rng.below(4)));
      std::vector<std::size_t> packed;
      for (const auto& tx : c.state.blocks.back().transactions)
        if (auto it = order.find(tx.id); it != order.end()) packed.push_back(it->second);
      CHECK(std::is_sorted(packed.begin(), packed.end()));
    }
  }
}

// ---- consensus -------------------------------------------------------------------

TEST_CASE("every active staker produces exactly k blocks per k rotations") {
  Rng rng = Rng::derive(0, "rotation");
  for (int trial = 0; trial < 50; ++trial) {
    consensus::StakeRegistry reg;
    std::map<Address, Amount> balances;
    const auto v = 1 + rng.below(7);
    for (std::uint64_t i = 0; i < v; ++i) {
      const Address a = KeyPair::from_index(i).address();
      balances[a] = 1000;
      auto r = consensus::register_stake(reg, balances, a, 1 + static_cast<Amount>(rng.below(500)));
      REQUIRE(r);
      reg = *r;
    }
    if (v > 1 && rng.bernoulli(0.5)) {
      const Address victim = reg.schedule_order[rng.below(reg.schedule_order.size())];
      auto r = consensus::slash(reg, victim);
      REQUIRE(r);
      reg = *r;
      CHECK(std::find(reg.schedule_order.begin(), reg.schedule_order.end(), victim) == reg.schedule_order.end());
      CHECK_FALSE(consensus::register_stake(reg, balances, victim, 1));
    }
    const auto len = reg.schedule_order.size();
    const auto k = 1 + rng.below(5);
    const Height start = rng.below(1000);
    std::map<Address, std::uint64_t> count;
    for (Height h = start; h < start + k * len; ++h) count[*consensus::next_producer(reg, h)]++;
    CHECK(count.size() == len);
    for (const auto& a : reg.schedule_order) CHECK(count[a] == k);
    for (const auto& [a, e] : reg.stakes)
      if (e.locked) CHECK(count.count(a) == 0);
  }
}

// ---- registry --------------------------------------------------------------------

TEST_CASE("every escrowed deposit is either refunded or forfeited") {
  TestChain c(3, 2, {}, 2000);
  const KeyPair& esp = c.validators[0];
  const KeyPair& owner = c.users[0];
  const KeyPair& other = c.users[1];
  const Bytes original = aigc::testing::image_bytes(300);
  std::vector<Bytes> suspects;
  for (std::uint64_t i = 0; i < 4; ++i) suspects.push_back(aigc::testing::noised_bytes(original, 6.0, 310 + i));
  for (std::uint64_t i = 0; i < 4; ++i) suspects.push_back(aigc::testing::image_bytes(320 + i));

  auto reg = [&](const Bytes& content, const Address& to) {
    auto tx = registry::register_product(c.state, esp, to, content, {"p", "e", 1}, 1, 1);
    REQUIRE(tx);
    REQUIRE(submit_transaction(c.state, *tx));
  };
  reg(original, owner.address());
  for (const auto& s : suspects) reg(s, other.address());
  c.advance_to(3);

  Rng rng = Rng::derive(0, "deposits");
  rng.shuffle(suspects.begin(), suspects.end());
  const Amount start_balance = c.state.world.balance(owner.address());
  Amount deposited = 0;
  std::vector<Digest> ids;
  for (const auto& s : suspects) {
    const Amount deposit = 10 + static_cast<Amount>(rng.below(41));
    auto tx = registry::initiate_challenge(c.state, owner, original, s, deposit, c.next());
    REQUIRE(tx);
    REQUIRE(submit_transaction(c.state, *tx));
    deposited += deposit;
    ids.push_back(tx->id);
    c.advance_to(c.next() + rng.below(2));
  }
  c.advance_to(c.next() + 1);

  Amount refunded = 0, forfeited = 0;
  for (const auto& id : ids) {
    const auto* rec = registry::find_challenge(c.state.world, id);
    REQUIRE(rec);
    if (rec->verdict.success) {
      CHECK(rec->verdict.deposit_disposition == registry::Disposition::Refunded);
      refunded += rec->escrowed;
    } else {
      CHECK(rec->verdict.deposit_disposition == registry::Disposition::Forfeited);
      forfeited += rec->escrowed;
    }
  }
  CHECK(refunded + forfeited == deposited);
  CHECK(refunded > 0);
  CHECK(forfeited > 0);
  CHECK(c.state.world.registry.escrowed == 0);
  CHECK(c.state.world.registry.pending_forfeit == 0);
  CHECK(c.state.world.supply.forfeited == forfeited);
  CHECK(c.state.world.balance(owner.address()) == start_balance - forfeited);
  CHECK(audit_supply(c.state.world).ok());
}

// ---- htl -------------------------------------------------------------------------

TEST_CASE("locked assets cannot be locked or spent twice") {
  Rng rng = Rng::derive(0, "double-spend");
  for (int trial = 0; trial < 6; ++trial) {
    TestChain c(2, 2, {}, 1000);
    const KeyPair& a = c.users[0];
    const KeyPair& b = c.users[1];
    const Digest lock = sha256(std::string_view("secret"));
    const Amount first = 1 + static_cast<Amount>(rng.below(999));
    auto l1 = htl::create_lock(c.state, a, FundsAsset{first}, lock, b.address(), 20, 1);
    REQUIRE(l1);
    REQUIRE(submit_transaction(c.state, *l1));
    REQUIRE(c.advance());
    CHECK(c.state.world.balance(a.address()) == 1000 - first);
    CHECK(htl::create_lock(c.state, a, FundsAsset{1000 - first + 1}, lock, b.address(), 20, 2).error() ==
          Errc::InsufficientBalance);

    // A payment larger than the unlocked remainder is never packed.
    auto pay = Transaction::make_signed(a, b.address(), Payment{1000 - first + 1}, 3);
    REQUIRE(submit_transaction(c.state, pay));
    REQUIRE(c.advance());
    CHECK(c.state.tx_index.count(pay.id) == 0);

    // Ownership: one lock per product.
    const Bytes content = aigc::testing::image_bytes(400 + static_cast<std::uint64_t>(trial));
    // Until delivery the generating ESP is the party that locks.
    const KeyPair& esp = c.validators[0];
    auto gen = registry::register_product(c.state, esp, a.address(), content, {"p", "e", 1}, 5, 4);
    REQUIRE(gen);
    REQUIRE(submit_transaction(c.state, *gen));
    REQUIRE(c.advance());
    const Digest index = sha256(content);
    auto o1 = htl::create_lock(c.state, esp, OwnershipAsset{index}, lock, a.address(), c.next() + 10, 5);
    REQUIRE(o1);
    REQUIRE(submit_transaction(c.state, *o1));
    REQUIRE(c.advance());
    CHECK(htl::create_lock(c.state, esp, OwnershipAsset{index}, lock, b.address(), c.next() + 10, 6).error() ==
          Errc::AlreadyLocked);
    CHECK(audit_supply(c.state.world).ok());
  }
}

// ---- reputation ------------------------------------------------------------------

TEST_CASE("opinion operators stay on the simplex") {
  Rng rng = Rng::derive(0, "simplex");
  for (int i = 0; i < 2000; ++i) {
    const auto records = random_records(rng, 30);
    const double u_loc = rng.uniform01();
    const auto local = reputation::local_opinion(records, u_loc);
    CHECK(local.on_simplex());

    std::vector<reputation::WeightedOpinion> recs(rng.below(6));
    std::vector<std::uint64_t> fams;
    std::vector<Amount> vals;
    for (std::size_t k = 0; k < recs.size(); ++k) {
      fams.push_back(rng.below(20));
      vals.push_back(static_cast<Amount>(rng.below(50)));
    }
    const auto w = reputation::recommendation_weights(fams, vals, {0.35, 0.65});
    if (!recs.empty()) CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
    for (std::size_t k = 0; k < recs.size(); ++k) recs[k] = {random_opinion(rng), w[k]};
    const auto overall = reputation::overall_opinion(recs);
    CHECK(overall.on_simplex());

    const auto fin = reputation::fuse(local, overall);
    CHECK(fin.on_simplex());
    const double score = reputation::reputation_score(fin);
    CHECK(score >= 0.0);
    CHECK(score <= 1.0 + 1e-12);
  }
}

TEST_CASE("vacuous opinion is the fusion identity") {
  Rng rng = Rng::derive(0, "identity");
  for (int i = 0; i < 1000; ++i) {
    const auto x = random_opinion(rng);
    for (const auto& y : {reputation::fuse(x, Opinion::vacuous()), reputation::fuse(Opinion::vacuous(), x)}) {
      CHECK(y.p == doctest::Approx(x.p).epsilon(1e-12));
      CHECK(y.n == doctest::Approx(x.n).epsilon(1e-12));
      CHECK(y.u == doctest::Approx(x.u).epsilon(1e-12));
    }
  }
}

TEST_CASE("positive interactions never lower the local score, negative never raise it") {
  Rng rng = Rng::derive(0, "monotone");
  for (int i = 0; i < 2000; ++i) {
    auto records = random_records(rng, 40);
    if (records.empty()) records.push_back({.outcome = reputation::Outcome::Negative});
    const double u_loc = rng.uniform01();
    const double before = reputation::reputation_score(reputation::local_opinion(records, u_loc));
    auto plus = records;
    plus.push_back({.outcome = reputation::Outcome::Positive});
    auto minus = records;
    minus.push_back({.outcome = reputation::Outcome::Negative});
    CHECK(reputation::reputation_score(reputation::local_opinion(plus, u_loc)) >= before - 1e-12);
    CHECK(reputation::reputation_score(reputation::local_opinion(minus, u_loc)) <= before + 1e-12);
  }
}

// With no records the local opinion is vacuous and scores 0 under p + u*n, so
// a first Negative interaction raises the score to u*(1-u). Monotonicity holds
// from one record onwards; this pins the boundary behaviour.
TEST_CASE("first negative interaction from an empty history") {
  for (double u : {0.1, 0.5, 0.9}) {
    const std::vector<reputation::InteractionRecord> none;
    const std::vector<reputation::InteractionRecord> one{{.outcome = reputation::Outcome::Negative}};
    CHECK(reputation::reputation_score(reputation::local_opinion(none, u)) == 0.0);
    CHECK(reputation::reputation_score(reputation::local_opinion(one, u)) == doctest::Approx(u * (1 - u)));
    CHECK(reputation::reputation_score(reputation::local_opinion(one, u), reputation::ScoreForm::base_rate) <
          reputation::reputation_score(reputation::local_opinion(none, u), reputation::ScoreForm::base_rate));
  }
}

TEST_CASE("deterministic selection is invariant under positive scaling") {
  Rng rng = Rng::derive(0, "argmax");
  const reputation::SelectionMode mode{reputation::SelectionKind::Deterministic, 1.0};
  for (int i = 0; i < 500; ++i) {
    reputation::ReputationTable table;
    const auto n = 1 + rng.below(6);
    for (std::uint64_t k = 0; k < n; ++k)
      table[KeyPair::from_index(k).address()].reputation = static_cast<double>(rng.below(5)) / 4.0;
    std::set<Address> denied;
    for (const auto& [a, _] : table)
      if (denied.size() + 1 < table.size() && rng.bernoulli(0.3)) denied.insert(a);
    auto scaled = table;
    const double c = 0.01 + 10.0 * rng.uniform01();
    for (auto& [_, e] : scaled) e.reputation *= c;
    Rng r1(1), r2(2);
    CHECK(*reputation::select_esp(table, mode, denied, r1) == *reputation::select_esp(scaled, mode, denied, r2));
  }
}

// ---- similarity ------------------------------------------------------------------

TEST_CASE("similarity metrics are symmetric") {
  const SimilarityThresholds t;
  for (std::uint64_t i = 0; i < 20; ++i) {
    Rng rng = Rng::derive(5, "symmetry", i);
    const auto a = sim::generate_base(rng);
    const auto b = rng.bernoulli(0.5) ? sim::generate_noised(a, 10.0 * rng.uniform01(), rng)
                                      : sim::generate_independent(rng);
    CHECK(similarity::histogram_similarity(a, b) == similarity::histogram_similarity(b, a));
    CHECK(similarity::hamming(similarity::phash(a), similarity::phash(b)) ==
          similarity::hamming(similarity::phash(b), similarity::phash(a)));
    const auto ab = similarity::is_duplicate(a, b, t);
    const auto ba = similarity::is_duplicate(b, a, t);
    CHECK(ab.verdict == ba.verdict);
    CHECK(ab.passed == ba.passed);
  }
}

TEST_CASE("perceptual hashes ignore a uniform brightness shift") {
  for (std::uint64_t i = 0; i < 20; ++i) {
    Rng rng = Rng::derive(6, "brightness", i);
    const auto src = sim::generate_base(rng);
    // Compress into [0, 215] to leave headroom, then shift by +20.
    std::vector<std::uint8_t> low(src.pixels()), high(src.pixels());
    for (std::size_t k = 0; k < low.size(); ++k) {
      low[k] = static_cast<std::uint8_t>(src.pixels()[k] * 215 / 255);
      high[k] = static_cast<std::uint8_t>(low[k] + 20);
    }
    const similarity::GrayImage a(src.width(), src.height(), low), b(src.width(), src.height(), high);
    CHECK(similarity::phash(a) == similarity::phash(a));
    CHECK(similarity::phash(a) == similarity::phash(b));
    CHECK(similarity::dhash(a) == similarity::dhash(b));
  }
}

// ---- goldens ---------------------------------------------------------------------

TEST_CASE("corpus images match the pinned digests and perceptual hashes") {
  std::map<std::string, similarity::GrayImage> corpus;
  for (std::uint64_t i = 0; i < 10; ++i) {
    Rng rng = Rng::derive(1, "corpus", i);
    const auto base = sim::generate_base(rng);
    const auto noised = sim::generate_noised(base, 8.0, rng);
    const auto other = sim::generate_independent(rng);
    const auto id = std::to_string(i);
    corpus.emplace("base_" + id + ".pgm", base);
    corpus.emplace("noised_" + id + ".pgm", noised);
    corpus.emplace("independent_" + id + ".pgm", other);
  }
  const auto digests = read_rows("corpus_golden.txt");
  REQUIRE(digests.size() == corpus.size());
  for (const auto& row : digests) {
    INFO(row[1]);
    CHECK(to_hex(sha256(similarity::encode_pgm(corpus.at(row[1])))) == row[0]);
  }
  const auto hashes = read_rows("perceptual_hashes.txt");
  REQUIRE(hashes.size() == corpus.size());
  for (const auto& row : hashes) {
    INFO(row[0]);
    CHECK(similarity::phash(corpus.at(row[0])).bits == std::stoull(row[1], nullptr, 16));
    CHECK(similarity::dhash(corpus.at(row[0])).bits == std::stoull(row[2], nullptr, 16));
  }
}

TEST_CASE("reputation scenario reproduces the pinned chain tip and state") {
  for (const auto& row : read_rows("scenario_golden.txt")) {
    auto cfg = *sim::preset(row[0]);
    cfg.seed = std::stoull(row[1]);
    auto log = sim::run_reputation_scenario(cfg);
    REQUIRE(log);
    CHECK(to_hex(log->chain.back().block_hash) == row[2]);
    CHECK(to_hex(log->audit.state) == row[3]);
  }
}
