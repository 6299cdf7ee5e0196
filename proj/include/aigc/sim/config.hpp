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

#include <optional>
#include <string>
#include <vector>

#include "aigc/consensus.hpp"
#include "aigc/htl.hpp"
#include "aigc/ledger.hpp"
#include "aigc/reputation.hpp"
#include "aigc/result.hpp"

namespace aigc::sim {

struct EspConfig {
  Amount stake = 100;
  double service_quality = 0.95;
  std::optional<Height> misbehave_from_round;
};

enum class FamiliarityBasis : std::uint8_t { trades, attempts };

struct AttackConfig {
  double noise_sigma = 8.0;
  bool independent_copy = false;  // false challenge against an unrelated image
  Height copy_round = 3;
  Height challenge_round = 6;
  Amount deposit = 10;
  std::uint64_t claims_per_round = 50;
  bool attacker_stakes = false;
};

struct FuzzConfig {
  std::uint64_t schedules = 10'000;
  Height max_ttl = 6;
};

/// Every knob of a simulation run. JSON keys mirror the field names.
struct ScenarioConfig {
  std::uint64_t seed = 1;
  Height rounds = 30;
  std::uint64_t producers = 3;
  std::vector<EspConfig> esps{{100, 0.95, {}}, {100, 0.70, {}}, {100, 0.55, {}}};
  double alpha1 = 0.35;
  double alpha2 = 0.65;
  double u_loc = 0.5;
  SimilarityThresholds thresholds;
  consensus::RewardPolicy reward_policy;
  reputation::SelectionKind selection_mode = reputation::SelectionKind::Softmax;
  double softmax_temperature = 0.1;
  Height htl_ttl = 4;
  Height htl_margin = 2;
  htl::ExpiryMode expiry_mode = htl::ExpiryMode::literal;
  std::size_t max_txs_per_block = 10'000;

  std::uint64_t requests_per_round = 1;
  std::uint64_t esp_capacity = 1;
  Amount service_fee = 10;
  Height random_rounds = 5;  // workload scenario warm-up
  FamiliarityBasis familiarity_basis = FamiliarityBasis::trades;
  reputation::Convention opinion_convention = reputation::Convention::simplex;
  reputation::ScoreForm score_form = reputation::ScoreForm::positive_plus_uncertain_negative;
  Height challenge_window = 20;
  Amount min_challenge_deposit = 10;
  OwnerCheck owner_check = OwnerCheck::current;
  Amount producer_balance = 100'000;
  Height mempool_max_age = 10;

  AttackConfig attack;
  FuzzConfig fuzz;

  Status validate() const;
  ChainParams chain_params() const;
  reputation::ReputationParams reputation_params() const;
};

/// Named starting points: reputation, workload, attack-tamper,
/// attack-plagiarize, attack-false-challenge, exchange-fuzz.
Expected<ScenarioConfig> preset(std::string_view name);

/// Overlays the keys present in `json_text` onto `base`. Unknown keys are
/// rejected. Errors: ConfigInvalid.
Expected<ScenarioConfig> parse_config(std::string_view json_text, ScenarioConfig base = {});
std::string to_json(const ScenarioConfig& cfg);

}  // namespace aigc::sim
