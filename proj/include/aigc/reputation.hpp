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
#include <set>
#include <span>
#include <vector>

#include "aigc/opinion.hpp"
#include "aigc/result.hpp"
#include "aigc/rng.hpp"
#include "aigc/transaction.hpp"

namespace aigc {

struct WorldState;

namespace reputation {

enum class Outcome : std::uint8_t { Positive, Negative };

struct InteractionRecord {
  Address producer;
  Address esp;
  Height round = 0;
  Outcome outcome = Outcome::Positive;
  Amount fee = 0;
};

/// How evidence counts become an opinion.
enum class Convention : std::uint8_t {
  simplex,  // p, n scaled by (1 - u) so that p + n + u = 1
  raw,      // p, n are the raw proportions; u is set alongside
};

/// How a final opinion becomes a score.
enum class ScoreForm : std::uint8_t {
  positive_plus_uncertain_negative,  // p + u * n
  base_rate,                         // p + a * u, a = 0.5
};

struct WeightParams {
  double alpha1 = 0.35;  // familiarity
  double alpha2 = 0.65;  // value
  bool valid() const;
};

Opinion local_opinion(std::span<const InteractionRecord> records, double u_loc,
                      Convention convention = Convention::simplex);

/// alpha1 * fam_i / sum(fams) + alpha2 * val_i / sum(vals). A column that
/// sums to zero contributes equal shares.
double recommendation_weight(std::size_t i, std::span<const std::uint64_t> fams, std::span<const Amount> vals,
                             const WeightParams& params);
std::vector<double> recommendation_weights(std::span<const std::uint64_t> fams, std::span<const Amount> vals,
                                           const WeightParams& params);

struct WeightedOpinion {
  Opinion opinion;
  double weight = 0.0;
};

/// Weighted average; the empty set yields the vacuous opinion.
Opinion overall_opinion(std::span<const WeightedOpinion> recommended);

/// Subjective-logic consensus of two opinions.
Opinion fuse(const Opinion& local, const Opinion& overall);

double reputation_score(const Opinion& fin, ScoreForm form = ScoreForm::positive_plus_uncertain_negative);

struct TableEntry {
  double reputation = 0.0;
  Opinion final_opinion;
  Height updated_round = 0;
};

using ReputationTable = std::map<Address, TableEntry>;

enum class SelectionKind : std::uint8_t { Deterministic, Softmax };

struct SelectionMode {
  SelectionKind kind = SelectionKind::Softmax;
  double temperature = 1.0;
};

/// Deterministic: best non-denied entry by (reputation desc, address asc).
/// Softmax: draw with weight exp(reputation / temperature). Errors: AllDenied.
Expected<Address> select_esp(const ReputationTable& table, const SelectionMode& mode,
                             const std::set<Address>& denied, Rng& rng);

struct ReputationParams {
  WeightParams weights;
  double u_loc = 0.5;
  Convention convention = Convention::simplex;
  ScoreForm score = ScoreForm::positive_plus_uncertain_negative;
};

/// One producer's view: its own records plus the latest opinions shared on
/// chain by every other producer.
ReputationTable build_table(const Address& producer, std::span<const Address> esps,
                            std::span<const InteractionRecord> own_records, const WorldState& world,
                            const ReputationParams& params, Height round);

/// One OpinionShare per ESP the producer has records for, in address order.
std::vector<Transaction> share_opinions(const KeyPair& producer, std::span<const InteractionRecord> own_records,
                                        const ReputationParams& params, std::uint64_t round);

}  // namespace reputation
}  // namespace aigc
