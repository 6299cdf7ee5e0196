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

#include "aigc/reputation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aigc/ledger.hpp"

namespace aigc::reputation {

bool WeightParams::valid() const {
  return alpha1 >= 0.0 && alpha2 >= 0.0 && std::abs(alpha1 + alpha2 - 1.0) <= 1e-9;
}

Opinion local_opinion(std::span<const InteractionRecord> records, double u_loc, Convention convention) {
  if (records.empty()) return Opinion::vacuous();
  std::uint64_t pos = 0;
  for (const auto& r : records) pos += r.outcome == Outcome::Positive;
  const double total = static_cast<double>(records.size());
  const double fp = static_cast<double>(pos) / total;
  const double fn = static_cast<double>(records.size() - pos) / total;
  if (convention == Convention::raw) return {fp, fn, u_loc};
  return {(1.0 - u_loc) * fp, (1.0 - u_loc) * fn, u_loc};
}

namespace {

template <class T>
std::vector<double> shares(std::span<const T> column) {
  const double total = std::accumulate(column.begin(), column.end(), 0.0,
                                       [](double acc, T v) { return acc + static_cast<double>(v); });
  std::vector<double> out(column.size(), column.empty() ? 0.0 : 1.0 / static_cast<double>(column.size()));
  if (total > 0.0)
    for (std::size_t i = 0; i < column.size(); ++i) out[i] = static_cast<double>(column[i]) / total;
  return out;
}

}  // namespace

std::vector<double> recommendation_weights(std::span<const std::uint64_t> fams, std::span<const Amount> vals,
                                           const WeightParams& params) {
  const auto f = shares(fams);
  const auto v = shares(vals);
  std::vector<double> w(fams.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = params.alpha1 * f[i] + params.alpha2 * v[i];
  return w;
}

double recommendation_weight(std::size_t i, std::span<const std::uint64_t> fams, std::span<const Amount> vals,
                             const WeightParams& params) {
  return recommendation_weights(fams, vals, params).at(i);
}

Opinion overall_opinion(std::span<const WeightedOpinion> recommended) {
  if (recommended.empty()) return Opinion::vacuous();
  Opinion o{0.0, 0.0, 0.0};
  for (const auto& [op, w] : recommended) {
    o.p += w * op.p;
    o.n += w * op.n;
    o.u += w * op.u;
  }
  return o;
}

Opinion fuse(const Opinion& a, const Opinion& b) {
  const double kappa = a.u + b.u - a.u * b.u;
  if (kappa < 1e-12) return {(a.p + b.p) / 2.0, (a.n + b.n) / 2.0, 0.0};
  return {(a.p * b.u + b.p * a.u) / kappa, (a.n * b.u + b.n * a.u) / kappa, (a.u * b.u) / kappa};
}

double reputation_score(const Opinion& fin, ScoreForm form) {
  const double s = form == ScoreForm::base_rate ? fin.p + 0.5 * fin.u : fin.p + fin.u * fin.n;
  return std::clamp(s, 0.0, 1.0);
}

Expected<Address> select_esp(const ReputationTable& table, const SelectionMode& mode,
                             const std::set<Address>& denied, Rng& rng) {
  std::vector<std::pair<Address, double>> open;
  for (const auto& [esp, entry] : table)
    if (!denied.contains(esp)) open.emplace_back(esp, entry.reputation);
  if (open.empty()) return Errc::AllDenied;

  if (mode.kind == SelectionKind::Deterministic) {
    // `open` is address-ordered, so the first maximum wins ties.
    auto best = std::max_element(open.begin(), open.end(),
                                 [](const auto& x, const auto& y) { return x.second < y.second; });
    return best->first;
  }

  double top = open.front().second;
  for (const auto& [_, r] : open) top = std::max(top, r);
  std::vector<double> weights;
  weights.reserve(open.size());
  double total = 0.0;
  for (const auto& [_, r] : open) {
    weights.push_back(std::exp((r - top) / mode.temperature));
    total += weights.back();
  }
  double x = rng.uniform01() * total;
  for (std::size_t i = 0; i < open.size(); ++i) {
    if (x < weights[i]) return open[i].first;
    x -= weights[i];
  }
  return open.back().first;
}

ReputationTable build_table(const Address& producer, std::span<const Address> esps,
                            std::span<const InteractionRecord> own_records, const WorldState& world,
                            const ReputationParams& params, Height round) {
  ReputationTable table;
  for (const auto& esp : esps) {
    std::vector<InteractionRecord> mine;
    for (const auto& r : own_records)
      if (r.esp == esp) mine.push_back(r);
    const Opinion local = local_opinion(mine, params.u_loc, params.convention);

    std::vector<Opinion> ops;
    std::vector<std::uint64_t> fams;
    std::vector<Amount> vals;
    for (const auto& [key, shared] : world.opinions) {
      if (key.second != esp || key.first == producer) continue;
      ops.push_back(shared.share.opinion);
      fams.push_back(shared.share.familiarity);
      vals.push_back(shared.share.value);
    }
    const auto weights = recommendation_weights(fams, vals, params.weights);
    std::vector<WeightedOpinion> rec;
    for (std::size_t i = 0; i < ops.size(); ++i) rec.push_back({ops[i], weights[i]});

    const Opinion fin = fuse(local, overall_opinion(rec));
    table[esp] = TableEntry{reputation_score(fin, params.score), fin, round};
  }
  return table;
}

std::vector<Transaction> share_opinions(const KeyPair& producer, std::span<const InteractionRecord> own_records,
                                        const ReputationParams& params, std::uint64_t round) {
  std::map<Address, std::vector<InteractionRecord>> by_esp;
  for (const auto& r : own_records) by_esp[r.esp].push_back(r);
  std::vector<Transaction> out;
  for (const auto& [esp, recs] : by_esp) {
    OpinionShare s;
    s.target_esp = esp;
    s.opinion = local_opinion(recs, params.u_loc, params.convention);
    s.familiarity = recs.size();
    for (const auto& r : recs) s.value += r.fee;
    out.push_back(Transaction::make_signed(producer, esp, s, round));
  }
  return out;
}

}  // namespace aigc::reputation
