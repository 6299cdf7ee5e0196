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

#include "aigc/sim/config.hpp"
#include "aigc/sim/metrics.hpp"

namespace aigc::sim {

enum class Strategy : std::uint8_t { Familiarity, Reputation };
enum class Attack : std::uint8_t { Tamper, Plagiarize };

std::string_view to_string(Strategy s);

/// Producers pick ESPs by reputation every round and run the full service
/// pipeline. Errors: ConfigInvalid.
Expected<MetricsLog> run_reputation_scenario(const ScenarioConfig& cfg);

/// Uniform random picks for the first `random_rounds` rounds, then the given
/// strategy. Errors: ConfigInvalid.
Expected<MetricsLog> run_workload_scenario(const ScenarioConfig& cfg, Strategy strategy);

/// Scripted adversary against one honestly generated product.
/// Plagiarize uses a noised copy, or an unrelated image when
/// `attack.independent_copy` is set (a false challenge). Errors: ConfigInvalid.
Expected<MetricsLog> run_attack_scenario(const ScenarioConfig& cfg, Attack attack);

/// `fuzz.schedules` randomized exchange interleavings with delays, crashes,
/// withheld and premature releases, alternating expiry modes.
/// Errors: ConfigInvalid.
Expected<MetricsLog> run_exchange_fuzz(const ScenarioConfig& cfg);

}  // namespace aigc::sim
