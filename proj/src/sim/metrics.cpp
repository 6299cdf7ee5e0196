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

#include "aigc/sim/metrics.hpp"

#include <charconv>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace aigc::sim {

bool MetricsLog::all_checks_pass() const {
  for (const auto& [_, ok] : audit.checks)
    if (!ok) return false;
  return true;
}

std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

namespace {

/// Quotes a field only when it contains a separator, quote or newline.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string reputation_csv(const MetricsLog& log) {
  std::ostringstream os;
  os << "round,producer,esp,p,n,u,reputation\n";
  for (const auto& r : log.reputation)
    os << r.round << ',' << csv_field(r.producer) << ',' << csv_field(r.esp) << ',' << format_double(r.p) << ','
       << format_double(r.n) << ',' << format_double(r.u) << ',' << format_double(r.reputation) << '\n';
  return os.str();
}

std::string workload_csv(const MetricsLog& log) {
  std::ostringstream os;
  os << "round,strategy,esp,cumulative_tasks\n";
  for (const auto& r : log.workload)
    os << r.round << ',' << csv_field(r.strategy) << ',' << csv_field(r.esp) << ',' << r.cumulative_tasks << '\n';
  return os.str();
}

std::string events_csv(const MetricsLog& log) {
  std::ostringstream os;
  os << "round,kind,actor,subject,detail\n";
  for (const auto& e : log.events)
    os << e.round << ',' << csv_field(e.kind) << ',' << csv_field(e.actor) << ',' << csv_field(e.subject) << ','
       << csv_field(e.detail) << '\n';
  return os.str();
}

std::string audit_json(const MetricsLog& log) {
  const auto& a = log.audit;
  nlohmann::ordered_json j;
  j["scenario"] = log.scenario;
  j["seed"] = log.seed;
  j["blocks"] = a.blocks;
  j["supply"] = {{"holdings", a.supply.holdings},
                 {"expected", a.supply.expected},
                 {"coinbase_total", a.supply.coinbase_total},
                 {"coinbase_expected", a.supply.coinbase_expected},
                 {"ok", a.supply.ok()}};
  j["sessions_opened"] = a.sessions_opened;
  j["outcomes"] = a.outcomes;
  j["checks"] = a.checks;
  j["all_checks_pass"] = log.all_checks_pass();
  j["labels"] = a.labels;
  j["state_digest"] = to_hex(a.state);
  return j.dump(2) + "\n";
}

Status emit_metrics(const MetricsLog& log, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) return Errc::IoFailure;
  const std::pair<const char*, std::string> files[] = {
      {"reputation.csv", reputation_csv(log)}, {"workload.csv", workload_csv(log)},
      {"events.csv", events_csv(log)},         {"audit.json", audit_json(log)},
      {"chain.ndjson", dump_ndjson(log.chain)},
  };
  for (const auto& [name, body] : files) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    out << body;
    if (!out.flush()) return Errc::IoFailure;
  }
  return {};
}

}  // namespace aigc::sim
