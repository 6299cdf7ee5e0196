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

#include "aigc/sim/config.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

namespace aigc::sim {

using nlohmann::json;

Status ScenarioConfig::validate() const {
  auto prob = [](double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; };
  if (producers == 0 || esps.empty() || rounds == 0) return Errc::ConfigInvalid;
  for (const auto& e : esps)
    if (!prob(e.service_quality) || e.stake == 0) return Errc::ConfigInvalid;
  if (!prob(alpha1) || !prob(alpha2) || std::abs(alpha1 + alpha2 - 1.0) > 1e-9) return Errc::ConfigInvalid;
  if (!prob(u_loc) || !thresholds.valid()) return Errc::ConfigInvalid;
  if (!(softmax_temperature > 0.0) || htl_ttl < 3 || htl_margin < 1) return Errc::ConfigInvalid;
  if (requests_per_round == 0 || esp_capacity == 0 || max_txs_per_block == 0) return Errc::ConfigInvalid;
  if (!std::isfinite(reward_policy.annual_inflation_rate) || reward_policy.annual_inflation_rate < 0.0)
    return Errc::ConfigInvalid;
  if (attack.noise_sigma < 0.0 || attack.challenge_round <= attack.copy_round) return Errc::ConfigInvalid;
  if (fuzz.max_ttl < 1) return Errc::ConfigInvalid;
  return {};
}

ChainParams ScenarioConfig::chain_params() const {
  ChainParams p;
  p.reward = reward_policy;
  p.min_challenge_deposit = min_challenge_deposit;
  p.thresholds = thresholds;
  p.expiry_mode = expiry_mode;
  p.owner_check = owner_check;
  p.mempool_max_age = mempool_max_age;
  return p;
}

reputation::ReputationParams ScenarioConfig::reputation_params() const {
  return {{alpha1, alpha2}, u_loc, opinion_convention, score_form};
}

namespace {

template <class E>
struct EnumNames {
  std::vector<std::pair<E, std::string_view>> names;

  std::string_view name(E e) const {
    for (const auto& [v, n] : names)
      if (v == e) return n;
    return "?";
  }
  E parse(const json& j) const {
    const auto s = j.get<std::string>();
    for (const auto& [v, n] : names)
      if (n == s) return v;
    throw std::invalid_argument("unknown enum value " + s);
  }
};

const EnumNames<reputation::SelectionKind> kSelection{
    {{reputation::SelectionKind::Softmax, "softmax"}, {reputation::SelectionKind::Deterministic, "deterministic"}}};
const EnumNames<htl::ExpiryMode> kExpiry{{{htl::ExpiryMode::literal, "literal"}, {htl::ExpiryMode::refund, "refund"}}};
const EnumNames<FamiliarityBasis> kBasis{
    {{FamiliarityBasis::trades, "trades"}, {FamiliarityBasis::attempts, "attempts"}}};
const EnumNames<reputation::Convention> kConvention{
    {{reputation::Convention::simplex, "simplex"}, {reputation::Convention::raw, "raw"}}};
const EnumNames<reputation::ScoreForm> kScore{
    {{reputation::ScoreForm::positive_plus_uncertain_negative, "p_plus_u_n"},
     {reputation::ScoreForm::base_rate, "base_rate"}}};
const EnumNames<OwnerCheck> kOwner{{{OwnerCheck::current, "current"}, {OwnerCheck::original, "original"}}};

json to_j(const ScenarioConfig& c) {
  json esps = json::array();
  for (const auto& e : c.esps) {
    json x{{"stake", e.stake}, {"service_quality", e.service_quality}};
    x["misbehave_from_round"] = e.misbehave_from_round ? json(*e.misbehave_from_round) : json(nullptr);
    esps.push_back(x);
  }
  return {
      {"seed", c.seed},
      {"rounds", c.rounds},
      {"producers", c.producers},
      {"esps", esps},
      {"alpha1", c.alpha1},
      {"alpha2", c.alpha2},
      {"u_loc", c.u_loc},
      {"thresholds",
       {{"histogram_min", c.thresholds.histogram_min},
        {"phash_max_distance", c.thresholds.phash_max_distance},
        {"dhash_max_distance", c.thresholds.dhash_max_distance}}},
      {"reward_policy",
       {{"annual_inflation_rate", c.reward_policy.annual_inflation_rate},
        {"blocks_per_year", c.reward_policy.blocks_per_year},
        {"initial_supply", c.reward_policy.initial_supply}}},
      {"selection_mode", kSelection.name(c.selection_mode)},
      {"softmax_temperature", c.softmax_temperature},
      {"htl_ttl", c.htl_ttl},
      {"htl_margin", c.htl_margin},
      {"expiry_mode", kExpiry.name(c.expiry_mode)},
      {"max_txs_per_block", c.max_txs_per_block},
      {"requests_per_round", c.requests_per_round},
      {"esp_capacity", c.esp_capacity},
      {"service_fee", c.service_fee},
      {"random_rounds", c.random_rounds},
      {"familiarity_basis", kBasis.name(c.familiarity_basis)},
      {"opinion_convention", kConvention.name(c.opinion_convention)},
      {"score_form", kScore.name(c.score_form)},
      {"challenge_window", c.challenge_window},
      {"min_challenge_deposit", c.min_challenge_deposit},
      {"owner_check", kOwner.name(c.owner_check)},
      {"producer_balance", c.producer_balance},
      {"mempool_max_age", c.mempool_max_age},
      {"attack",
       {{"noise_sigma", c.attack.noise_sigma},
        {"independent_copy", c.attack.independent_copy},
        {"copy_round", c.attack.copy_round},
        {"challenge_round", c.attack.challenge_round},
        {"deposit", c.attack.deposit},
        {"claims_per_round", c.attack.claims_per_round},
        {"attacker_stakes", c.attack.attacker_stakes}}},
      {"fuzz", {{"schedules", c.fuzz.schedules}, {"max_ttl", c.fuzz.max_ttl}}},
  };
}

template <class T>
void take(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void check_keys(const json& j, std::initializer_list<std::string_view> allowed) {
  for (const auto& [k, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || a == k;
    if (!ok) throw std::invalid_argument("unknown key " + k);
  }
}

void from_j(const json& j, ScenarioConfig& c) {
  check_keys(j, {"seed", "rounds", "producers", "esps", "alpha1", "alpha2", "u_loc", "thresholds", "reward_policy",
                 "selection_mode", "softmax_temperature", "htl_ttl", "htl_margin", "expiry_mode",
                 "max_txs_per_block", "requests_per_round", "esp_capacity", "service_fee", "random_rounds",
                 "familiarity_basis", "opinion_convention", "score_form", "challenge_window",
                 "min_challenge_deposit", "owner_check", "producer_balance", "mempool_max_age", "attack", "fuzz"});
  take(j, "seed", c.seed);
  take(j, "rounds", c.rounds);
  take(j, "producers", c.producers);
  if (j.contains("esps")) {
    c.esps.clear();
    for (const auto& e : j.at("esps")) {
      check_keys(e, {"stake", "service_quality", "misbehave_from_round"});
      EspConfig ec;
      take(e, "stake", ec.stake);
      take(e, "service_quality", ec.service_quality);
      if (e.contains("misbehave_from_round") && !e.at("misbehave_from_round").is_null())
        ec.misbehave_from_round = e.at("misbehave_from_round").get<Height>();
      c.esps.push_back(ec);
    }
  }
  take(j, "alpha1", c.alpha1);
  take(j, "alpha2", c.alpha2);
  take(j, "u_loc", c.u_loc);
  if (j.contains("thresholds")) {
    const auto& t = j.at("thresholds");
    check_keys(t, {"histogram_min", "phash_max_distance", "dhash_max_distance"});
    take(t, "histogram_min", c.thresholds.histogram_min);
    take(t, "phash_max_distance", c.thresholds.phash_max_distance);
    take(t, "dhash_max_distance", c.thresholds.dhash_max_distance);
  }
  if (j.contains("reward_policy")) {
    const auto& r = j.at("reward_policy");
    check_keys(r, {"annual_inflation_rate", "blocks_per_year", "initial_supply"});
    take(r, "annual_inflation_rate", c.reward_policy.annual_inflation_rate);
    take(r, "blocks_per_year", c.reward_policy.blocks_per_year);
    take(r, "initial_supply", c.reward_policy.initial_supply);
  }
  if (j.contains("selection_mode")) c.selection_mode = kSelection.parse(j.at("selection_mode"));
  take(j, "softmax_temperature", c.softmax_temperature);
  take(j, "htl_ttl", c.htl_ttl);
  take(j, "htl_margin", c.htl_margin);
  if (j.contains("expiry_mode")) c.expiry_mode = kExpiry.parse(j.at("expiry_mode"));
  take(j, "max_txs_per_block", c.max_txs_per_block);
  take(j, "requests_per_round", c.requests_per_round);
  take(j, "esp_capacity", c.esp_capacity);
  take(j, "service_fee", c.service_fee);
  take(j, "random_rounds", c.random_rounds);
  if (j.contains("familiarity_basis")) c.familiarity_basis = kBasis.parse(j.at("familiarity_basis"));
  if (j.contains("opinion_convention")) c.opinion_convention = kConvention.parse(j.at("opinion_convention"));
  if (j.contains("score_form")) c.score_form = kScore.parse(j.at("score_form"));
  take(j, "challenge_window", c.challenge_window);
  take(j, "min_challenge_deposit", c.min_challenge_deposit);
  if (j.contains("owner_check")) c.owner_check = kOwner.parse(j.at("owner_check"));
  take(j, "producer_balance", c.producer_balance);
  take(j, "mempool_max_age", c.mempool_max_age);
  if (j.contains("attack")) {
    const auto& a = j.at("attack");
    check_keys(a, {"noise_sigma", "independent_copy", "copy_round", "challenge_round", "deposit", "claims_per_round",
                   "attacker_stakes"});
    take(a, "noise_sigma", c.attack.noise_sigma);
    take(a, "independent_copy", c.attack.independent_copy);
    take(a, "copy_round", c.attack.copy_round);
    take(a, "challenge_round", c.attack.challenge_round);
    take(a, "deposit", c.attack.deposit);
    take(a, "claims_per_round", c.attack.claims_per_round);
    take(a, "attacker_stakes", c.attack.attacker_stakes);
  }
  if (j.contains("fuzz")) {
    const auto& f = j.at("fuzz");
    check_keys(f, {"schedules", "max_ttl"});
    take(f, "schedules", c.fuzz.schedules);
    take(f, "max_ttl", c.fuzz.max_ttl);
  }
}

}  // namespace

Expected<ScenarioConfig> parse_config(std::string_view json_text, ScenarioConfig base) {
  try {
    from_j(json::parse(json_text), base);
  } catch (const std::exception&) {
    return Errc::ConfigInvalid;
  }
  if (auto st = base.validate(); !st) return st.error();
  return base;
}

std::string to_json(const ScenarioConfig& cfg) { return to_j(cfg).dump(2); }

Expected<ScenarioConfig> preset(std::string_view name) {
  ScenarioConfig c;
  if (name == "reputation") {
    c.rounds = 30;
    c.requests_per_round = 8;
    c.random_rounds = 0;
    c.esps[0].misbehave_from_round = 15;
  } else if (name == "workload") {
    c.rounds = 60;
    c.requests_per_round = 8;
    c.random_rounds = 5;
  } else if (name == "attack-tamper") {
    c.rounds = 12;
  } else if (name == "attack-plagiarize") {
    c.rounds = 12;
    c.attack.attacker_stakes = true;
  } else if (name == "attack-false-challenge") {
    c.rounds = 12;
    c.challenge_window = 2;
    c.attack.independent_copy = true;
  } else if (name == "exchange-fuzz") {
    c.rounds = 1;
  } else {
    return Errc::ConfigInvalid;
  }
  return c;
}

}  // namespace aigc::sim
