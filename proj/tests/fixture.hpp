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
#include <stdexcept>
#include <vector>

#include "aigc/consensus.hpp"
#include "aigc/ledger.hpp"
#include "aigc/sim/images.hpp"

namespace aigc::testing {

/// Small chain with `validators` equal stakers and `users` funded accounts.
/// Validator keys use indices 0..v-1, users 1000.. .
struct TestChain {
  ChainState state;
  std::vector<KeyPair> validators;
  std::vector<KeyPair> users;
  std::map<Address, const KeyPair*> keys;

  explicit TestChain(std::size_t v = 3, std::size_t u = 3, ChainParams params = {}, Amount user_balance = 1000,
                     Amount stake = 100) {
    std::vector<GenesisAllocation> alloc;
    for (std::size_t i = 0; i < v; ++i) {
      validators.push_back(KeyPair::from_index(i));
      alloc.push_back({validators.back().address(), 0, stake});
    }
    for (std::size_t i = 0; i < u; ++i) {
      users.push_back(KeyPair::from_index(1000 + i));
      alloc.push_back({users.back().address(), user_balance, 0});
    }
    for (const auto& k : validators) keys[k.address()] = &k;
    for (const auto& k : users) keys[k.address()] = &k;
    auto s = chain_from_genesis(make_genesis(params, alloc));
    if (!s) throw std::runtime_error("genesis failed");
    state = std::move(*s);
  }

  const KeyPair& scheduled(Height h) const {
    auto a = consensus::next_producer(state.world.stakes, h);
    if (!a) throw std::runtime_error("no validators");
    return *keys.at(*a);
  }

  Block make_block(std::size_t max_txs = 1000) const {
    auto b = consensus::produce_block(state, scheduled(state.tip_height() + 1), max_txs);
    if (!b) throw std::runtime_error(std::string(to_string(b.error())));
    return *b;
  }

  Status advance(std::size_t max_txs = 1000) { return apply_block(state, make_block(max_txs)); }

  void advance_to(Height h) {
    while (state.tip_height() < h)
      if (!advance()) throw std::runtime_error("advance failed");
  }

  Height next() const { return state.tip_height() + 1; }
};

inline Bytes image_bytes(std::uint64_t seed) {
  Rng rng(seed);
  return similarity::encode_pgm(sim::generate_base(rng));
}

inline Bytes noised_bytes(const Bytes& src, double sigma, std::uint64_t seed) {
  Rng rng(seed);
  auto img = similarity::decode_pgm(src);
  return similarity::encode_pgm(sim::generate_noised(*img, sigma, rng));
}

}  // namespace aigc::testing
