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

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "paulikron/io.hpp"
#include "paulikron/pipeline.hpp"
#include "paulikron/version.hpp"

namespace fs = std::filesystem;
using namespace paulikron;

namespace {

struct CommonArgs {
  std::vector<std::string> inputs;
  std::string output = "report.json";
  std::uint32_t n_a = 0;  // 0 = balanced default
  double tol = 1e-12;
  std::uint64_t seed = 0;
  std::uint64_t subsample_seed = 20260221;
  int threads = 0;  // 0 = use PAULIKRON_THREADS or 1
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--input", args.inputs, "Hamiltonian file or directory")
      ->required()
      ->expected(-1);
  cmd->add_option("--output", args.output, "report path (JSON)");
  cmd->add_option("--n-a", args.n_a, "left part size (default: balanced)");
  cmd->add_option("--tol", args.tol, "coefficient filter tolerance");
  cmd->add_option("--seed", args.seed, "decomposition seed");
  cmd->add_option("--subsample-seed", args.subsample_seed,
                  "seed for stochastic subsampling (audit state ensembles)");
  cmd->add_option("--threads", args.threads,
                  "worker pool size (default: PAULIKRON_THREADS or 1)");
}

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("PAULIKRON_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  return 1;
}

std::vector<SystemRecord> load_systems(const CommonArgs& args) {
  std::vector<fs::path> files;
  for (const auto& input : args.inputs) {
    const fs::path p(input);
    if (fs::is_directory(p)) {
      for (const auto& entry : fs::directory_iterator(p)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
      }
    } else {
      files.push_back(p);
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<SystemRecord> systems;
  systems.reserve(files.size());
  for (const auto& f : files) systems.push_back(read_hamiltonian(f, args.tol));
  return systems;
}

int run_stages(const CommonArgs& args, PipelineConfig cfg) {
  if (args.n_a > 0) cfg.n_a = args.n_a;
  cfg.tol = args.tol;
  cfg.seed = args.seed;
  cfg.subsample_seed = args.subsample_seed;
  cfg.threads = resolve_threads(args.threads);
  const auto report = run_pipeline(load_systems(args), cfg);
  std::ofstream out(args.output);
  if (!out) {
    std::cerr << "cannot write " << args.output << "\n";
    return 1;
  }
  out << report.dump(2) << "\n";
  std::cout << "wrote " << args.output << " (" << report["systems"].size()
            << " systems)\n";
  return 0;
}

int run_plot(const std::string& report_path, const std::string& out_dir) {
  std::ifstream in(report_path);
  if (!in) {
    std::cerr << "cannot read " << report_path << "\n";
    return 1;
  }
  nlohmann::json report;
  in >> report;
  fs::create_directories(out_dir);

  std::ofstream curves(fs::path(out_dir) / "compressibility_curves.csv");
  curves << "system_id,k,sigma,rho,delta_rho\n";
  std::ofstream bounds(fs::path(out_dir) / "bound_curves.csv");
  bounds << "system_id,k,rho,bound\n";
  char buf[64];
  const auto num = [&buf](double x) {
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
  };
  for (const auto& sys : report["systems"]) {
    const std::string id = sys["system_id"];
    if (sys.contains("profile")) {
      const auto& p = sys["profile"];
      for (std::size_t i = 0; i < p["rho"].size(); ++i) {
        curves << id << "," << (i + 1) << "," << num(p["sigmas"][i]) << ","
               << num(p["rho"][i]) << "," << num(p["delta_rho"][i]) << "\n";
      }
    }
    if (sys.contains("certificates")) {
      for (const auto& c : sys["certificates"]) {
        bounds << id << "," << c["k"].get<int>() << ","
               << num(c["rho"].get<double>()) << ","
               << num(c["bound"].get<double>()) << "\n";
      }
    }
  }
  std::cout << "wrote " << out_dir << "/compressibility_curves.csv and "
            << out_dir << "/bound_curves.csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cut-aware low-rank Kronecker compression of Pauli-sum "
               "Hamiltonians"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonArgs args;
  PipelineConfig cfg;

  auto* screen = app.add_subcommand("screen", "rank-1 traceless screening");
  add_common_options(screen, args);

  auto* scan = app.add_subcommand("scan", "rank profiles up to k-max");
  add_common_options(scan, args);
  scan->add_option("--k-max", cfg.k_max, "maximum scanned rank");
  scan->add_option("--targets", cfg.targets, "first-hit capture targets")
      ->delimiter(',');

  auto* certify =
      app.add_subcommand("certify", "worst-case energy bounds per rank");
  add_common_options(certify, args);
  certify->add_option("--k-max", cfg.k_max, "maximum scanned rank");
  certify->add_option("--targets", cfg.targets, "first-hit capture targets")
      ->delimiter(',');
  certify->add_option("--epsilon", cfg.epsilon, "chemical accuracy target (Ha)");

  auto* audit = app.add_subcommand(
      "audit", "dense ground-state and state-ensemble certificate audit");
  add_common_options(audit, args);
  audit->add_option("--k-max", cfg.k_max, "maximum scanned rank");
  audit->add_option("--epsilon", cfg.epsilon, "chemical accuracy target (Ha)");
  audit->add_option("--max-qubits", cfg.guards.max_qubits_operator,
                    "dense-operator qubit ceiling");
  audit->add_option("--rms-states", cfg.rms_states,
                    "state-ensemble size for rms audits");

  auto* bench = app.add_subcommand(
      "bench", "dense-SVD baseline vs sparse decomposition timing");
  add_common_options(bench, args);
  bench->add_option("--repeats", cfg.timing.repeats, "timing repeats");
  bench->add_option("--warmup", cfg.timing.warmup_runs, "warmup runs");
  bench->add_option("--max-side", cfg.guards.max_side,
                    "dense baseline side guard");
  bench->add_option("--max-elements", cfg.guards.max_elements,
                    "dense baseline element guard");

  auto* chem = app.add_subcommand(
      "chem-boundary", "rank escalation to the chemical-accuracy boundary");
  add_common_options(chem, args);
  chem->add_option("--epsilon", cfg.chem.epsilon, "certification target (Ha)");
  chem->add_option("--lambda-f", cfg.chem.lambda_f, "Frobenius weight");
  chem->add_option("--lambda-spec", cfg.chem.lambda_spec, "spectral weight");
  chem->add_option("--lambda-tr", cfg.chem.lambda_tr, "trust-region weight");
  chem->add_option("--steps-per-rank", cfg.chem.steps_per_rank,
                   "Adam steps per rank stage");
  chem->add_option("--max-rank", cfg.chem.max_rank, "rank budget");
  chem->add_option("--spec-interval", cfg.chem.spec_update_interval,
                   "spectral refresh interval (steps)");

  auto* gen = app.add_subcommand("gen", "synthetic Hamiltonian generators");
  gen->require_subcommand(1);
  std::string gen_output;
  std::uint32_t gen_n = 8, gen_n_a = 0;
  double gen_g = 1.0, gen_decay = 0.1, gen_scale = 1.0;
  int gen_terms = 50, gen_rank = 3;
  std::uint64_t gen_seed = 0;

  auto* gen_tfim = gen->add_subcommand("tfim", "open-chain transverse Ising");
  gen_tfim->add_option("--n", gen_n, "qubits")->required();
  gen_tfim->add_option("--g", gen_g, "transverse field");
  gen_tfim->add_option("--output", gen_output, "output file")->required();

  auto* gen_random = gen->add_subcommand("random", "random sparse Pauli sum");
  gen_random->add_option("--n", gen_n, "qubits")->required();
  gen_random->add_option("--terms", gen_terms, "term count");
  gen_random->add_option("--seed", gen_seed, "seed");
  gen_random->add_option("--output", gen_output, "output file")->required();

  auto* gen_planted =
      gen->add_subcommand("planted", "planted low-rank spectrum");
  gen_planted->add_option("--n", gen_n, "qubits")->required();
  gen_planted->add_option("--n-a", gen_n_a, "left part size");
  gen_planted->add_option("--rank", gen_rank, "planted rank");
  gen_planted->add_option("--decay", gen_decay, "weight decay per rank");
  gen_planted->add_option("--scale", gen_scale, "weight scale");
  gen_planted->add_option("--seed", gen_seed, "seed");
  gen_planted->add_option("--output", gen_output, "output file")->required();

  auto* plot = app.add_subcommand(
      "plot", "emit compressibility- and bound-curve tables from a report");
  std::string plot_report = "report.json", plot_dir = "plots";
  plot->add_option("--report", plot_report, "report JSON path");
  plot->add_option("--output-dir", plot_dir, "directory for CSV tables");

  CLI11_PARSE(app, argc, argv);

  try {
    if (screen->parsed()) return run_stages(args, cfg);
    if (scan->parsed()) {
      cfg.do_scan = true;
      return run_stages(args, cfg);
    }
    if (certify->parsed()) {
      cfg.do_scan = cfg.do_certify = true;
      return run_stages(args, cfg);
    }
    if (audit->parsed()) {
      cfg.do_scan = cfg.do_certify = cfg.do_audit = true;
      return run_stages(args, cfg);
    }
    if (bench->parsed()) {
      cfg.do_scan = cfg.do_bench = true;
      return run_stages(args, cfg);
    }
    if (chem->parsed()) {
      cfg.do_scan = cfg.do_chem = true;
      return run_stages(args, cfg);
    }
    if (gen->parsed()) {
      SystemRecord rec;
      if (gen_tfim->parsed()) {
        rec = generate_tfim(gen_n, gen_g);
      } else if (gen_random->parsed()) {
        rec = generate_random_sparse(gen_n, gen_terms, gen_seed);
      } else {
        const std::uint32_t n_a = gen_n_a > 0 ? gen_n_a : gen_n / 2;
        rec = generate_planted(gen_n, n_a, gen_rank, gen_decay, gen_seed,
                               gen_scale)
                  .record;
      }
      write_hamiltonian(rec.sum, gen_output);
      std::cout << "wrote " << gen_output << " (" << rec.sum.size()
                << " terms, n=" << rec.n << ")\n";
      return 0;
    }
    if (plot->parsed()) return run_plot(plot_report, plot_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
