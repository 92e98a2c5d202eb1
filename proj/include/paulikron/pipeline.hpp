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

#pragma once

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "paulikron/certificate.hpp"
#include "paulikron/chem_boundary.hpp"
#include "paulikron/cut.hpp"
#include "paulikron/dense_oracle.hpp"
#include "paulikron/generators.hpp"
#include "paulikron/lowrank.hpp"
#include "paulikron/pauli.hpp"
#include "paulikron/resource_bench.hpp"
#include "paulikron/version.hpp"

namespace paulikron {

// Pipeline: screen -> scan -> certify -> audit -> bench -> chem-boundary.
// Screening always runs; later stages are opt-in. Every input system shows
// up in the report with a tier or an explicit error; per-system failures
// never abort the run. All wall-time fields end in "_ms" so byte-level
// report comparisons can scrub exactly those.

inline constexpr double kTierPrimary = 0.85;
inline constexpr double kTierSecondary = 0.70;

struct PipelineConfig {
  bool do_scan = false;
  bool do_certify = false;
  bool do_audit = false;
  bool do_bench = false;
  bool do_chem = false;

  std::optional<std::uint32_t> n_a;
  double tol = 1e-12;
  std::uint64_t seed = 0;
  std::uint64_t subsample_seed = 20260221;
  int k_max = 32;
  std::vector<double> targets{0.999, 0.9995};
  double epsilon = 1.5936e-3;
  DenseGuards guards;
  TimingProtocol timing;
  int rms_states = 40;
  ChemConfig chem;
  int threads = 1;
};

namespace detail {

inline std::string hardware_descriptor() {
  std::ifstream cpuinfo("/proc/cpuinfo");
  std::string line;
  while (std::getline(cpuinfo, line)) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) {
        std::string name = line.substr(colon + 1);
        while (!name.empty() && name.front() == ' ') name.erase(0, 1);
        return name;
      }
    }
  }
  return "unknown";
}

inline nlohmann::json profile_to_json(const RankProfile& profile) {
  nlohmann::json j;
  j["k_max"] = profile.k_max;
  j["frob_sq_total"] = profile.frob_sq_total;
  j["sigmas"] = profile.sigmas;
  j["rho"] = profile.rho;
  j["delta_rho"] = profile.delta_rho;
  auto hits = nlohmann::json::array();
  for (const auto& [tau, hit] : profile.first_hits) {
    // Censored first hits are serialized explicitly, never imputed.
    hits.push_back({{"tau", tau}, {"k", hit.k}, {"censored", hit.censored}});
  }
  j["first_hits"] = hits;
  return j;
}

inline nlohmann::json screen_system(const SparseCoeffMatrix& C,
                                    const PipelineConfig& cfg) {
  PowerIterOptions opts = PowerIterOptions::screening();
  opts.seed = cfg.seed;
  const SingularTriplet top = top_singular_triplet(C, opts);
  const double rho1 = std::min(1.0, top.sigma * top.sigma / C.frob_sq());
  nlohmann::json j;
  j["rho1_tr"] = rho1;
  j["sigma1"] = top.sigma;
  j["iters"] = top.iters_used;
  j["converged"] = top.converged;
  j["tier"] = rho1 >= kTierPrimary     ? "primary"
              : rho1 >= kTierSecondary ? "secondary"
                                       : "excluded";
  return j;
}

inline nlohmann::json bench_system(const SystemRecord& rec,
                                   const SparseCoeffMatrix& C,
                                   const KroneckerFactorization& fact,
                                   const PipelineConfig& cfg) {
  BenefitRecord bench;
  bench.system_id = rec.system_id;
  bench.n = C.cut().n;
  bench.n_a = C.cut().n_a;
  bench.k = 1;

  PowerIterOptions opts = PowerIterOptions::rank_scan();
  opts.seed = cfg.seed;
  bench.t_decomp_ms = time_with_protocol(
      [&] { (void)rank_scan(C, 1, {}, opts); }, cfg.timing);

  try {
    const Eigen::MatrixXd M = dense_coeff_matrix(C, cfg.guards);
    bench.t_dense_ms = time_with_protocol(
        [&] { (void)dense_svd_spectrum(M); }, cfg.timing);
  } catch (const GuardExceededError&) {
    // Leave t_dense_ms unset; benefit_ratios labels the record.
  }
  bench.bytes_dense = storage_bytes_dense(C.cut());
  bench.bytes_factors = storage_bytes_factors(fact, std::min(1, fact.rank()));
  bench = benefit_ratios(bench);

  nlohmann::json j;
  j["k"] = bench.k;
  j["t_decomp_ms"] = bench.t_decomp_ms;
  j["bytes_dense"] = bench.bytes_dense;
  j["bytes_factors"] = bench.bytes_factors;
  j["memory_ratio"] = bench.memory_ratio;
  j["dense_status"] =
      bench.dense_status == DenseStatus::measured ? "measured" : "guard_exceeded";
  if (bench.t_dense_ms) j["t_dense_ms"] = *bench.t_dense_ms;
  if (bench.speedup) j["speedup"] = *bench.speedup;
  return j;
}

inline nlohmann::json process_system(const SystemRecord& input,
                                     const PipelineConfig& cfg) {
  nlohmann::json j;
  j["system_id"] = input.system_id;
  j["n"] = input.n;
  j["source"] = input.source == SystemSource::file ? "file" : "generator";
  try {
    SystemRecord rec = input;
    rec.sum = filter_coefficients(rec.sum, cfg.tol);
    const TracelessSplit split = split_identity(rec.sum);
    const double norm_tr = traceless_frobenius_norm(split);
    const Bipartition cut = make_cut(rec.n, cfg.n_a);
    j["n_a"] = cut.n_a;
    j["term_count"] = rec.sum.size();
    j["identity_coeff"] = split.identity_coeff;
    j["norm_tr"] = norm_tr;

    const SparseCoeffMatrix C = reshape(split.traceless, cut);
    j["screen"] = screen_system(C, cfg);

    if (!(cfg.do_scan || cfg.do_certify || cfg.do_audit || cfg.do_bench ||
          cfg.do_chem)) {
      return j;
    }

    PowerIterOptions opts = PowerIterOptions::rank_scan();
    opts.seed = cfg.seed;
    const int k_max = static_cast<int>(std::min<Index>(
        cfg.k_max, std::min(C.rows(), C.cols())));
    auto [profile, fact] = rank_scan(C, k_max, cfg.targets, opts);
    fact.identity_coeff = split.identity_coeff;
    j["profile"] = profile_to_json(profile);

    if (cfg.do_certify || cfg.do_audit) {
      auto certs = nlohmann::json::array();
      for (int k = 1; k <= static_cast<int>(profile.rho.size()); ++k) {
        certs.push_back(
            {{"k", k},
             {"rho", profile.rho[static_cast<std::size_t>(k - 1)]},
             {"bound",
              energy_bound(norm_tr,
                           profile.rho[static_cast<std::size_t>(k - 1)])}});
      }
      j["certificates"] = certs;
      j["rho_required"] =
          norm_tr > 0.0
              ? required_rho(norm_tr, ChemTarget{cfg.epsilon, cfg.epsilon})
              : 0.0;
      j["epsilon"] = cfg.epsilon;
    }

    if (cfg.do_audit) {
      if (rec.n <= cfg.guards.max_qubits_operator) {
        const auto states = make_random_states(
            Index{1} << rec.n, cfg.rms_states, cfg.subsample_seed);
        auto audits = nlohmann::json::array();
        for (int k = 1; k <= fact.rank(); ++k) {
          const CertificateRecord cert =
              audit_ground_state(rec.sum, fact, k, cfg.guards);
          nlohmann::json a{{"k", k},
                           {"rho", cert.rho_k},
                           {"bound", cert.bound},
                           {"observed_err", *cert.observed_err},
                           {"pass", cert.pass}};
          if (cert.eta) a["eta"] = *cert.eta;
          const auto [err_rms, eta_rms] =
              rms_state_error(rec.sum, fact, k, states, cfg.guards);
          a["err_rms"] = err_rms;
          a["eta_rms"] = eta_rms;
          audits.push_back(a);
        }
        j["audit"] = {{"records", audits}, {"states", cfg.rms_states}};
      } else {
        j["audit"] = {{"skipped_reason",
                       "GuardExceeded: n=" + std::to_string(rec.n) +
                           " > max_qubits_operator=" +
                           std::to_string(cfg.guards.max_qubits_operator)}};
      }
    }

    if (cfg.do_bench) j["bench"] = bench_system(rec, C, fact, cfg);

    if (cfg.do_chem) {
      ChemConfig chem_cfg = cfg.chem;
      chem_cfg.seed = cfg.seed;
      const ChemBoundaryTrace trace =
          run_chem_boundary(rec.sum, cut, chem_cfg, cfg.guards);
      auto stages = nlohmann::json::array();
      for (const auto& s : trace.per_rank) {
        stages.push_back({{"rank", s.rank},
                          {"loss_total", s.final_loss.total},
                          {"loss_frob", s.final_loss.frob},
                          {"loss_spec", s.final_loss.spec},
                          {"loss_tr", s.final_loss.tr},
                          {"bound_chem", s.bound_chem},
                          {"rho_tl", s.rho_tl},
                          {"steps_used", s.steps_used},
                          {"wall_ms", s.wall_ms}});
      }
      nlohmann::json c{{"per_rank", stages},
                       {"certified", trace.certified},
                       {"epsilon", chem_cfg.epsilon}};
      if (trace.certified_rank) c["certified_rank"] = *trace.certified_rank;
      j["chem"] = c;
    }
  } catch (const std::exception& e) {
    j["error"] = e.what();
  }
  return j;
}

}  // namespace detail

/// Runs the configured stages over all systems with a bounded worker pool
/// (pool size 1 whenever timing is involved) and assembles the report in
/// system_id order.
inline nlohmann::json run_pipeline(std::vector<SystemRecord> systems,
                                   const PipelineConfig& cfg) {
  std::sort(systems.begin(), systems.end(),
            [](const SystemRecord& a, const SystemRecord& b) {
              return a.system_id < b.system_id;
            });

  const int pool = cfg.do_bench ? 1 : std::max(1, cfg.threads);
  std::vector<nlohmann::json> results(systems.size());
  if (pool == 1 || systems.size() <= 1) {
    for (std::size_t i = 0; i < systems.size(); ++i) {
      results[i] = detail::process_system(systems[i], cfg);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const int count = std::min<int>(pool, static_cast<int>(systems.size()));
    for (int w = 0; w < count; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < systems.size();
             i = next.fetch_add(1)) {
          results[i] = detail::process_system(systems[i], cfg);
        }
      });
    }
    for (auto& t : workers) t.join();
  }

  nlohmann::json report;
  report["schema_version"] = kReportSchemaVersion;
  report["run"] = {
      {"version", kVersion},
      {"seed", cfg.seed},
      {"subsample_seed", cfg.subsample_seed},
      {"tol", cfg.tol},
      {"k_max", cfg.k_max},
      {"targets", cfg.targets},
      {"epsilon", cfg.epsilon},
      {"threads", pool},
      {"hardware", detail::hardware_descriptor()},
      {"guards",
       {{"max_side", cfg.guards.max_side},
        {"max_elements", cfg.guards.max_elements},
        {"max_qubits_operator", cfg.guards.max_qubits_operator}}},
      {"stages",
       {{"scan", cfg.do_scan},
        {"certify", cfg.do_certify},
        {"audit", cfg.do_audit},
        {"bench", cfg.do_bench},
        {"chem", cfg.do_chem}}}};
  report["systems"] = results;
  return report;
}

/// Strips every key ending in "_ms", plus "speedup" (a pure function of
/// two wall times), recursively. The remainder of two reports from
/// identical configs and seeds must be byte-identical.
inline void scrub_wall_times(nlohmann::json& j) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end();) {
      const bool wall_time = it.key().size() >= 3 &&
                             it.key().compare(it.key().size() - 3, 3, "_ms") == 0;
      if (wall_time || it.key() == "speedup") {
        it = j.erase(it);
      } else {
        scrub_wall_times(it.value());
        ++it;
      }
    }
  } else if (j.is_array()) {
    for (auto& item : j) scrub_wall_times(item);
  }
}

}  // namespace paulikron
