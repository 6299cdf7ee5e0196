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

// Command-line front end: scenario runs, chain validation, image corpora.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "aigc/ledger.hpp"
#include "aigc/sim/images.hpp"
#include "aigc/sim/scenarios.hpp"

namespace fs = std::filesystem;
using namespace aigc;

namespace {

std::optional<std::string> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int finish_run(sim::MetricsLog log, const fs::path& out) {
  const auto report = validate_blocks(log.chain);
  log.audit.checks["chain_valid"] = report.ok;
  if (auto st = sim::emit_metrics(log, out); !st) {
    std::cerr << "cannot write " << out << ": " << to_string(st.error()) << "\n";
    return 3;
  }
  std::cout << log.scenario << " seed=" << log.seed << " blocks=" << log.audit.blocks
            << " supply_ok=" << log.audit.supply.ok() << " -> " << out.string() << "\n";
  for (const auto& [name, ok] : log.audit.checks)
    if (!ok) std::cout << "  check failed: " << name << "\n";
  return log.all_checks_pass() ? 0 : 1;
}

int cmd_run(const std::string& scenario, const std::string& config_path, std::optional<std::uint64_t> seed,
            const fs::path& out) {
  auto cfg = sim::preset(scenario);
  if (!cfg) {
    std::cerr << "unknown scenario '" << scenario << "'\n";
    return 2;
  }
  if (!config_path.empty()) {
    auto text = slurp(config_path);
    if (!text) {
      std::cerr << "cannot read " << config_path << "\n";
      return 3;
    }
    cfg = sim::parse_config(*text, *cfg);
    if (!cfg) {
      std::cerr << "invalid config " << config_path << "\n";
      return 2;
    }
  }
  if (seed) cfg->seed = *seed;

  if (scenario == "workload") {
    int rc = 0;
    for (auto s : {sim::Strategy::Familiarity, sim::Strategy::Reputation}) {
      auto log = sim::run_workload_scenario(*cfg, s);
      if (!log) return 2;
      std::string dir(sim::to_string(s));
      for (auto& ch : dir) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      rc = std::max(rc, finish_run(std::move(*log), out / dir));
    }
    return rc;
  }
  Expected<sim::MetricsLog> log = Errc::ConfigInvalid;
  if (scenario == "reputation")
    log = sim::run_reputation_scenario(*cfg);
  else if (scenario == "attack-tamper")
    log = sim::run_attack_scenario(*cfg, sim::Attack::Tamper);
  else if (scenario == "attack-plagiarize" || scenario == "attack-false-challenge")
    log = sim::run_attack_scenario(*cfg, sim::Attack::Plagiarize);
  else if (scenario == "exchange-fuzz")
    log = sim::run_exchange_fuzz(*cfg);
  if (!log) {
    std::cerr << "scenario failed: " << to_string(log.error()) << "\n";
    return 2;
  }
  return finish_run(std::move(*log), out);
}

int cmd_validate(const fs::path& dump) {
  std::ifstream in(dump, std::ios::binary);
  if (!in) {
    std::cerr << "cannot read " << dump << "\n";
    return 3;
  }
  auto blocks = parse_ndjson(in);
  if (!blocks) {
    std::cout << "broken: " << to_string(blocks.error()) << "\n";
    return 1;
  }
  const auto report = validate_blocks(*blocks);
  if (report.ok) {
    std::cout << "ok: " << blocks->size() << " blocks, tip height "
              << (blocks->empty() ? 0 : blocks->back().height) << "\n";
    return 0;
  }
  std::cout << "broken at height " << report.first_bad_height << ": " << to_string(report.reason) << "\n";
  return 1;
}

int cmd_corpus(std::uint64_t n, std::uint64_t seed, double sigma, const fs::path& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) {
    std::cerr << "cannot create " << out << "\n";
    return 3;
  }
  std::ofstream golden(out / "golden.txt");
  auto write = [&](const std::string& name, const similarity::GrayImage& img) {
    const Bytes bytes = similarity::encode_pgm(img);
    std::ofstream f(out / name, std::ios::binary);
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    golden << to_hex(sha256(bytes)) << "  " << name << "\n";
    return static_cast<bool>(f);
  };
  for (std::uint64_t i = 0; i < n; ++i) {
    Rng rng = Rng::derive(seed, "corpus", i);
    const auto base = sim::generate_base(rng);
    const auto noised = sim::generate_noised(base, sigma, rng);
    const auto other = sim::generate_independent(rng);
    const std::string id = std::to_string(i);
    if (!write("base_" + id + ".pgm", base) || !write("noised_" + id + ".pgm", noised) ||
        !write("independent_" + id + ".pgm", other)) {
      std::cerr << "write failed in " << out << "\n";
      return 3;
    }
  }
  std::cout << "wrote " << 3 * n << " images and golden.txt to " << out.string() << "\n";
  return golden ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aigc-chain: content ownership ledger and market simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a scenario and write metrics");
  std::string scenario;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  run->add_option("scenario", scenario,
                  "reputation | workload | attack-tamper | attack-plagiarize | attack-false-challenge | exchange-fuzz")
      ->required();
  run->add_option("--config", config, "JSON file overriding the scenario preset");
  run->add_option("--seed", seed, "RNG seed");
  run->add_option("--out", out, "Output directory");

  auto* validate = app.add_subcommand("validate", "Replay and check an NDJSON chain dump");
  std::string dump;
  validate->add_option("dump", dump, "chain.ndjson file")->required();

  auto* corpus = app.add_subcommand("corpus", "Write a seeded PGM corpus with golden hashes");
  std::uint64_t n = 100;
  std::uint64_t corpus_seed = 1;
  double sigma = 8.0;
  std::string corpus_out = "corpus";
  corpus->add_option("--n", n, "Number of base images");
  corpus->add_option("--seed", corpus_seed, "RNG seed");
  corpus->add_option("--sigma", sigma, "Noise level of the near-copies");
  corpus->add_option("--out", corpus_out, "Output directory");

  auto* show = app.add_subcommand("config", "Print a scenario preset as JSON");
  std::string show_name;
  show->add_option("scenario", show_name)->required();

  CLI11_PARSE(app, argc, argv);

  if (*run) return cmd_run(scenario, config, seed, out);
  if (*validate) return cmd_validate(dump);
  if (*corpus) return cmd_corpus(n, corpus_seed, sigma, corpus_out);
  if (*show) {
    auto cfg = sim::preset(show_name);
    if (!cfg) {
      std::cerr << "unknown scenario '" << show_name << "'\n";
      return 2;
    }
    std::cout << sim::to_json(*cfg) << "\n";
  }
  return 0;
}
