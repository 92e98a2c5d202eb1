// Copyright 2026 The paulikron Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "paulikron/pipeline.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace paulikron;
using paulikron::testing::sum_of;

namespace {

SystemRecord named(std::string id, PauliSum sum) {
  return {std::move(id), sum.qubits(), SystemSource::generator, std::move(sum)};
}

}  // namespace

TEST_CASE("screening tiers follow the thresholds") {
  // sigma^2 ratios: 0.90, 0.75, 0.60 of the total mass.
  const auto tiered = [](double rho1) {
    PauliSum h(2);
    h.add(parse_pauli_string("XX", 2), std::sqrt(rho1));
    h.add(parse_pauli_string("ZY", 2), std::sqrt(1.0 - rho1));
    return h;
  };
  PipelineConfig cfg;
  const auto report = run_pipeline({named("a_hi", tiered(0.90)),
                                    named("b_mid", tiered(0.75)),
                                    named("c_lo", tiered(0.60))},
                                   cfg);
  REQUIRE(report["systems"].size() == 3);
  CHECK(report["systems"][0]["screen"]["tier"] == "primary");
  CHECK(report["systems"][0]["screen"]["rho1_tr"].get<double>() ==
        Catch::Approx(0.90).margin(1e-9));
  CHECK(report["systems"][1]["screen"]["tier"] == "secondary");
  CHECK(report["systems"][2]["screen"]["tier"] == "excluded");
}

TEST_CASE("guard-exceeded audits are skipped with a note") {
  PipelineConfig cfg;
  cfg.do_scan = cfg.do_certify = cfg.do_audit = true;
  cfg.guards.max_qubits_operator = 4;
  cfg.k_max = 3;
  cfg.rms_states = 4;
  const auto report = run_pipeline(
      {named("big", generate_tfim(6, 1.0).sum),
       named("small", generate_tfim(3, 1.0).sum)},
      cfg);
  REQUIRE(report["systems"].size() == 2);
  const auto& big = report["systems"][0];
  CHECK(big["system_id"] == "big");
  CHECK(big.contains("certificates"));  // bounds still emitted
  CHECK(big["audit"].contains("skipped_reason"));
  const auto& small = report["systems"][1];
  CHECK(small["audit"].contains("records"));
  for (const auto& a : small["audit"]["records"]) {
    CHECK(a["pass"].get<bool>());
    CHECK(a["eta_rms"].get<double>() <= 1.0);
  }
}

TEST_CASE("per-system failures are isolated") {
  PauliSum pure_identity(3);
  pure_identity.add_code(0, 4.0);
  PipelineConfig cfg;
  const auto report = run_pipeline(
      {named("bad", pure_identity), named("good", generate_tfim(3, 0.7).sum)},
      cfg);
  REQUIRE(report["systems"].size() == 2);
  CHECK(report["systems"][0].contains("error"));
  CHECK_FALSE(report["systems"][1].contains("error"));
  CHECK(report["systems"][1]["screen"].contains("tier"));
}

TEST_CASE("reports are deterministic modulo wall times") {
  PipelineConfig cfg;
  cfg.do_scan = cfg.do_certify = cfg.do_audit = cfg.do_bench = true;
  cfg.k_max = 4;
  cfg.rms_states = 6;
  cfg.timing = {0, 1};
  std::vector<SystemRecord> systems{
      named("tfim5", generate_tfim(5, 1.1).sum),
      named("rand4", generate_random_sparse(4, 20, 167).sum),
      named("planted6", generate_planted(6, 3, 2, 0.3, 173).record.sum)};

  auto r1 = run_pipeline(systems, cfg);
  auto r2 = run_pipeline(systems, cfg);
  scrub_wall_times(r1);
  scrub_wall_times(r2);
  CHECK(r1.dump() == r2.dump());
}

TEST_CASE("thread pool does not change results") {
  PipelineConfig cfg;
  cfg.do_scan = cfg.do_certify = true;
  cfg.k_max = 4;
  std::vector<SystemRecord> systems;
  for (int i = 0; i < 8; ++i) {
    systems.push_back(named("sys" + std::to_string(i),
                            generate_random_sparse(5, 25, 400 + i).sum));
  }
  PipelineConfig parallel = cfg;
  parallel.threads = 4;
  auto serial_report = run_pipeline(systems, cfg);
  auto parallel_report = run_pipeline(systems, parallel);
  scrub_wall_times(serial_report);
  scrub_wall_times(parallel_report);
  // Thread count is recorded in the run header; compare the payload.
  serial_report["run"].erase("threads");
  parallel_report["run"].erase("threads");
  CHECK(serial_report.dump() == parallel_report.dump());
}

TEST_CASE("censored first hits are serialized explicitly") {
  PauliSum h(2);
  h.add(parse_pauli_string("XX", 2), std::sqrt(0.95));
  h.add(parse_pauli_string("ZY", 2), std::sqrt(0.05));
  PipelineConfig cfg;
  cfg.do_scan = true;
  cfg.k_max = 1;
  cfg.targets = {0.999};
  const auto report = run_pipeline({named("shallow", h)}, cfg);
  const auto& hits = report["systems"][0]["profile"]["first_hits"];
  REQUIRE(hits.size() == 1);
  CHECK(hits[0]["censored"].get<bool>());
  CHECK(hits[0]["k"].get<int>() == 1);
}
