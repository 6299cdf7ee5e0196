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

#include <algorithm>
#include <numeric>
#include <optional>

#include "aigc/sim/scenarios.hpp"
#include "world.hpp"

namespace aigc::sim {

std::string_view to_string(Strategy s) { return s == Strategy::Familiarity ? "Familiarity" : "Reputation"; }

namespace {

using detail::World;

/// Hard stop for the drain phase; an exchange needs at most ttl + margin
/// blocks after its lock plus the registration and funding blocks.
Height drain_limit(const ScenarioConfig& cfg) { return cfg.rounds + 2 * (cfg.htl_ttl + cfg.htl_margin) + 8; }

class Market {
 public:
  Market(const ScenarioConfig& cfg, std::string name, std::optional<Strategy> workload)
      : world_(cfg, std::move(name), false),
        cfg_(cfg),
        workload_(workload),
        order_rng_(Rng::derive(cfg.seed, "order")),
        tasks_(cfg.esps.size(), 0) {
    for (std::uint64_t j = 0; j < cfg.producers; ++j) select_rng_.push_back(Rng::derive(cfg.seed, "select", j));
  }

  MetricsLog run() {
    for (Height t = 1;; ++t) {
      const bool active = t <= cfg_.rounds;
      if (!active && !world_.sessions_open()) break;
      if (t > drain_limit(cfg_)) break;  // leaks show up in the audit
      if (active) world_.refresh_tables();
      world_.step_sessions();
      if (active) {
        for (std::uint64_t w = 0; w < cfg_.requests_per_round; ++w) wave();
        world_.share_opinions();
      }
      world_.close_block();
      if (active) record_workload(t);
    }
    return world_.finish();
  }

 private:
  bool random_phase() const { return workload_ && world_.round() <= cfg_.random_rounds; }
  Strategy strategy() const { return workload_.value_or(Strategy::Reputation); }

  void wave() {
    std::vector<std::size_t> order(world_.producers.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    order_rng_.shuffle(order.begin(), order.end());
    std::vector<std::uint64_t> busy(world_.esps.size(), 0);
    for (auto j : order) {
      auto e = choose(j, busy);
      if (!e) continue;
      busy[*e]++;
      tasks_[*e]++;
      world_.open_session(j, *e);
    }
  }

  std::optional<std::size_t> index_of(const Address& a) const {
    for (std::size_t i = 0; i < world_.esps.size(); ++i)
      if (world_.esps[i].address() == a) return i;
    return std::nullopt;
  }

  std::optional<std::size_t> choose(std::size_t j, const std::vector<std::uint64_t>& busy) {
    if (random_phase()) return select_rng_[j].below(world_.esps.size());
    if (strategy() == Strategy::Familiarity) {
      // Most past interactions; ties go to the lowest address.
      const auto& fam = world_.knowledge[j].familiarity;
      std::optional<Address> best;
      std::uint64_t best_count = 0;
      for (const auto& a : world_.esp_addresses()) {
        auto it = fam.find(a);
        const std::uint64_t c = it == fam.end() ? 0 : it->second;
        if (!best || c > best_count || (c == best_count && a < *best)) {
          best = a;
          best_count = c;
        }
      }
      return index_of(*best);
    }
    const reputation::SelectionMode mode{cfg_.selection_mode, cfg_.softmax_temperature};
    const auto& prod = world_.producers[j];
    std::set<Address> denied;
    for (;;) {
      auto pick = reputation::select_esp(world_.knowledge[j].table, mode, denied, select_rng_[j]);
      if (!pick) {
        world_.event("request_dropped", prod.address(), "", "all ESPs busy");
        return std::nullopt;
      }
      const auto e = *index_of(*pick);
      const auto& esp = world_.esps[e];
      world_.bus.send({MessageKind::Request, prod.address(), esp.address(), world_.round(), 0, {}, {}});
      (void)world_.bus.take(esp.address());
      if (busy[e] < cfg_.esp_capacity) return e;
      world_.bus.send({MessageKind::Deny, esp.address(), prod.address(), world_.round(), 0, {}, {}});
      (void)world_.bus.take(prod.address());
      world_.event("deny", esp.address(), prod.label);
      denied.insert(*pick);
    }
  }

  void record_workload(Height t) {
    const std::string name(to_string(strategy()));
    for (std::size_t e = 0; e < world_.esps.size(); ++e)
      world_.log.workload.push_back({t, name, world_.esps[e].label, tasks_[e]});
  }

  World world_;
  const ScenarioConfig& cfg_;
  std::optional<Strategy> workload_;
  Rng order_rng_;
  std::vector<Rng> select_rng_;
  std::vector<std::uint64_t> tasks_;
};

}  // namespace

Expected<MetricsLog> run_reputation_scenario(const ScenarioConfig& cfg) {
  if (auto st = cfg.validate(); !st) return st.error();
  return Market(cfg, "reputation", std::nullopt).run();
}

Expected<MetricsLog> run_workload_scenario(const ScenarioConfig& cfg, Strategy strategy) {
  if (auto st = cfg.validate(); !st) return st.error();
  return Market(cfg, "workload", strategy).run();
}

}  // namespace aigc::sim
