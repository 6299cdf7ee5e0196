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

#include "aigc/consensus.hpp"
#include "aigc/registry.hpp"
#include "aigc/sim/images.hpp"
#include "aigc/sim/scenarios.hpp"
#include "world.hpp"

namespace aigc::sim {

namespace {

using detail::World;

std::string_view disposition_name(registry::Disposition d) {
  switch (d) {
    case registry::Disposition::Waived: return "waived";
    case registry::Disposition::Refunded: return "refunded";
    case registry::Disposition::Forfeited: return "forfeited";
  }
  return "?";
}

/// Rounds continue past `cfg.rounds` only while exchanges are still open.
bool keep_going(const World& w, Height t) {
  const auto& cfg = w.cfg();
  if (t > cfg.rounds + 2 * (cfg.htl_ttl + cfg.htl_margin) + 8) return false;
  return t <= cfg.rounds || w.sessions_open();
}

MetricsLog tamper(const ScenarioConfig& cfg) {
  World w(cfg, "attack-tamper", true);
  const auto& owner = w.producers.front();
  const auto& thief = *w.attacker;
  bool owner_unchanged = true;
  bool claims_rejected = true;
  bool helper_refused = false;
  bool raw_excluded = false;
  std::optional<Digest> raw_id;

  for (Height t = 1; keep_going(w, t); ++t) {
    w.step_sessions();
    if (t == 1) w.open_session(0, 0);
    const auto& s = w.sessions.front();
    const bool on_chain = w.chain.world.registry.find(s.index) != nullptr;

    if (on_chain && t == 2) {
      // Re-registering the same bytes under the attacker's name.
      ProductMetadata meta{"mine", thief.label, t, MediaType::image};
      auto via_helper = registry::register_product(w.chain, thief.keys, thief.address(), s.content, meta,
                                                   t + cfg.challenge_window, t);
      helper_refused = !via_helper && via_helper.error() == Errc::DuplicateIndex;
      w.event("reregister_attempt", thief.address(), "helper",
              via_helper ? "accepted" : std::string(to_string(via_helper.error())));
      auto raw = Transaction::make_signed(thief.keys, thief.address(),
                                          GenProof{s.index, meta, t + cfg.challenge_window}, t);
      if (submit_transaction(w.chain, raw)) raw_id = raw.id;
      w.event("reregister_attempt", thief.address(), "raw", raw_id ? "queued" : "refused");
    }

    if (on_chain && t >= 2) {
      for (std::uint64_t k = 0; k < cfg.attack.claims_per_round; ++k)
        w.bus.send({MessageKind::Claim, thief.address(), w.consumer.address(), t, k, s.index, {}});
      std::uint64_t rejected = 0;
      std::uint64_t seen = 0;
      for (const auto& m : w.bus.take(w.consumer.address())) {
        if (m.kind != MessageKind::Claim) continue;
        ++seen;
        const auto* rec = w.chain.world.registry.find(m.digest);
        if (!rec || rec->owner != m.from) ++rejected;
      }
      claims_rejected = claims_rejected && rejected == seen;
      w.event("claims", thief.address(), w.consumer.label,
              "rejected " + std::to_string(rejected) + " of " + std::to_string(seen));
    }

    w.close_block();

    if (const auto* rec = w.chain.world.registry.find(s.index)) {
      owner_unchanged = owner_unchanged && rec->owner == owner.address();
      w.event("owner_query", w.consumer.address(), "image-0", w.label(rec->owner));
    }
    if (raw_id && t == 2) raw_excluded = !w.chain.tx_index.contains(*raw_id);
  }

  bool trace_clean = true;
  const auto trace = trace_product(w.chain, w.sessions.front().index);
  for (const auto& e : trace)
    trace_clean = trace_clean && e.sender != thief.address() && e.receiver != thief.address();
  w.log.audit.checks["owner_unchanged"] = owner_unchanged;
  w.log.audit.checks["claims_rejected"] = claims_rejected;
  w.log.audit.checks["duplicate_registration_refused"] = helper_refused;
  w.log.audit.checks["raw_duplicate_excluded"] = raw_excluded;
  w.log.audit.checks["trace_clean"] = trace_clean && !trace.empty();
  return w.finish();
}

MetricsLog plagiarize(const ScenarioConfig& cfg) {
  World w(cfg, cfg.attack.independent_copy ? "attack-false-challenge" : "attack-plagiarize", true);
  const auto& victim = w.producers.front();
  const auto& thief = *w.attacker;
  const auto& copier = w.esps[1 % w.esps.size()];
  Rng rng = Rng::derive(cfg.seed, "attack");
  Bytes copy;
  Digest copy_index{};
  std::optional<Digest> challenge_id;
  std::optional<Height> copy_registered_at;
  Amount coinbase_after = 0;
  const Amount reward = cfg.reward_policy.per_block();

  for (Height t = 1; keep_going(w, t); ++t) {
    w.step_sessions();
    if (t == 1) w.open_session(0, 0);
    const auto& s = w.sessions.front();

    if (t == cfg.attack.copy_round) {
      auto source = similarity::decode_pgm(s.content);
      const auto img = cfg.attack.independent_copy ? generate_independent(rng)
                                                   : generate_noised(*source, cfg.attack.noise_sigma, rng);
      copy = similarity::encode_pgm(img);
      copy_index = sha256(copy);
      ProductMetadata meta{"remix", copier.label, t, MediaType::image};
      w.submit(registry::register_product(w.chain, copier.keys, thief.address(), copy, meta,
                                          t + cfg.challenge_window, t),
               copier, "GenProof");
      w.submit(Transaction::make_signed(thief.keys, copier.address(), Payment{cfg.service_fee}, t), thief,
               "Payment");
      w.event("copy_registered", thief.address(), to_hex(copy_index).substr(0, 8),
              cfg.attack.independent_copy ? "independent" : "noised");
    }
    if (t == cfg.attack.challenge_round && !copy.empty()) {
      auto tx = registry::initiate_challenge(w.chain, victim.keys, s.content, copy, cfg.attack.deposit, t);
      if (w.submit(tx, victim, "Challenge")) challenge_id = tx->id;
    }

    w.close_block();

    if (!copy.empty() && !copy_registered_at && w.chain.world.registry.find(copy_index)) copy_registered_at = t;
    if (challenge_id && t == cfg.attack.challenge_round) {
      if (const auto* rec = registry::find_challenge(w.chain.world, *challenge_id)) {
        const auto& v = rec->verdict;
        w.event("challenge_verdict", victim.address(), v.success ? "success" : "failure",
                std::string(disposition_name(v.deposit_disposition)) + " h=" + format_double(v.similarity.histogram) +
                    " p=" + format_double(v.similarity.phash) +
                    " d=" + format_double(v.similarity.dhash));
      }
    }
    if (challenge_id && t == cfg.attack.challenge_round + 1) {
      const auto& cb = std::get<Coinbase>(w.chain.blocks.back().transactions.front().payload);
      coinbase_after = cb.reward;
    }
  }

  const registry::ChallengeRecord* rec = challenge_id ? registry::find_challenge(w.chain.world, *challenge_id) : nullptr;
  const auto* dup = w.chain.world.registry.find(copy_index);
  auto& checks = w.log.audit.checks;
  checks["copy_registered"] = copy_registered_at.has_value();
  checks["challenge_included"] = rec != nullptr;
  if (!cfg.attack.independent_copy) {
    const bool dereg = dup && dup->status == registry::ProductStatus::Deregistered;
    checks["challenge_succeeded"] = rec && rec->verdict.success;
    checks["duplicate_deregistered"] = dereg;
    checks["deposit_returned"] = rec && rec->verdict.deposit_disposition != registry::Disposition::Forfeited &&
                                 w.chain.world.registry.escrowed == 0;
    if (cfg.attack.attacker_stakes) {
      const auto& stakes = w.chain.world.stakes.stakes;
      auto it = stakes.find(thief.address());
      checks["attacker_slashed"] = it != stakes.end() && it->second.locked;
    }
  } else {
    checks["challenge_failed"] = rec && !rec->verdict.success;
    checks["deposit_forfeited"] = rec && rec->verdict.deposit_disposition == registry::Disposition::Forfeited &&
                                  w.chain.world.supply.forfeited == cfg.attack.deposit;
    checks["forfeit_in_next_coinbase"] = coinbase_after == reward + cfg.attack.deposit;
    checks["duplicate_still_active"] = dup && dup->status == registry::ProductStatus::Active;
  }
  return w.finish();
}

}  // namespace

Expected<MetricsLog> run_attack_scenario(const ScenarioConfig& cfg, Attack attack) {
  if (auto st = cfg.validate(); !st) return st.error();
  return attack == Attack::Tamper ? tamper(cfg) : plagiarize(cfg);
}

}  // namespace aigc::sim
