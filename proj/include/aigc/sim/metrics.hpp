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

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "aigc/ledger.hpp"
#include "aigc/result.hpp"

namespace aigc::sim {

struct ReputationRow {
  Height round = 0;
  std::string producer;
  std::string esp;
  double p = 0.0;
  double n = 0.0;
  double u = 0.0;
  double reputation = 0.0;
  bool operator==(const ReputationRow&) const = default;
};

struct WorkloadRow {
  Height round = 0;
  std::string strategy;
  std::string esp;
  std::uint64_t cumulative_tasks = 0;
  bool operator==(const WorkloadRow&) const = default;
};

/// Free-form event: requests, deliveries, exchange outcomes, challenge
/// verdicts, attack attempts.
struct EventRow {
  Height round = 0;
  std::string kind;
  std::string actor;
  std::string subject;
  std::string detail;
  bool operator==(const EventRow&) const = default;
};

struct Audit {
  SupplyAudit supply;
  Height blocks = 0;
  std::uint64_t sessions_opened = 0;
  std::map<std::string, std::uint64_t> outcomes;  // outcome name -> sessions
  std::map<std::string, bool> checks;             // scenario assertions
  std::map<std::string, std::string> labels;      // agent label -> address hex
  Digest state{};                                 // final world-state digest

  bool operator==(const Audit&) const = default;
};

/// Append-only record of one run.
struct MetricsLog {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<ReputationRow> reputation;
  std::vector<WorkloadRow> workload;
  std::vector<EventRow> events;
  Audit audit;
  std::vector<Block> chain;

  bool all_checks_pass() const;
  bool operator==(const MetricsLog&) const = default;
};

std::string reputation_csv(const MetricsLog& log);
std::string workload_csv(const MetricsLog& log);
std::string events_csv(const MetricsLog& log);
std::string audit_json(const MetricsLog& log);

/// Writes reputation.csv, workload.csv, events.csv, audit.json and
/// chain.ndjson into `dir`, creating it if needed. Errors: IoFailure.
Status emit_metrics(const MetricsLog& log, const std::filesystem::path& dir);

/// Shortest round-trip decimal form.
std::string format_double(double x);

}  // namespace aigc::sim
