// Copyright 2026 The ldp-spectral Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ldps/bench.hpp"
#include "ldps/csv.hpp"
#include "ldps/estim.hpp"
#include "ldps/mech.hpp"
#include "ldps/model.hpp"
#include "ldps/procgen.hpp"

namespace {

using ldps::SeededRng;
using ldps::model::MechanismKind;

struct SimulateArgs {
  int example = 1;
  int n = 1000;
  std::uint64_t seed = 0;
  std::string out;
};

int run_simulate(const SimulateArgs& args) {
  const auto spec = ldps::procgen::ProcessSpec::example(args.example, args.n - 1);
  const auto covs = ldps::procgen::covs_of(spec);
  SeededRng rng(args.seed, 1);
  const Eigen::VectorXd path = ldps::procgen::sample_path(covs, args.n, rng);
  if (args.out.empty())
    ldps::io::write_series_csv(std::cout, "x", path);
  else
    ldps::io::write_series_csv(args.out, "x", path);
  return 0;
}

struct PrivatizeArgs {
  std::string in;
  std::string mech = "ni";
  double alpha = 1.0;
  int j = 0;
  double omega = 0.0;
  int K = 0;
  std::optional<double> tau;
  std::optional<double> tau_tilde;
  double delta_log = 0.001;
  std::uint64_t seed = 0;
  std::string out;
};

int run_privatize(const PrivatizeArgs& args) {
  const Eigen::VectorXd path = ldps::io::read_series_csv(args.in);
  const int n = static_cast<int>(path.size());
  const ldps::model::PrivacyBudget budget{args.alpha, args.delta_log};

  MechanismKind kind;
  if (args.mech == "ni") kind = MechanismKind::NI;
  else if (args.mech == "si-cov") kind = MechanismKind::SI_COV;
  else if (args.mech == "si-point") kind = MechanismKind::SI_POINT;
  else if (args.mech == "si-global") kind = MechanismKind::SI_GLOBAL;
  else throw std::invalid_argument("unknown --mech: " + args.mech);

  std::optional<int> sched_K;
  if (kind == MechanismKind::SI_POINT) {
    if (args.K < 1) throw std::invalid_argument("si-point needs --K >= 1");
    sched_K = args.K;
  }
  auto sched = ldps::model::truncation_schedule(n, budget, kind, sched_K);
  if (args.tau) sched.tau = *args.tau;
  if (args.tau_tilde) sched.tau_tilde = *args.tau_tilde;

  SeededRng rng(args.seed, 1);
  ldps::mech::Transcript t;
  switch (kind) {
    case MechanismKind::NI:
      t = ldps::mech::privatize_ni(path, sched, args.alpha, rng);
      break;
    case MechanismKind::SI_COV:
      t = ldps::mech::privatize_si_cov(path, args.j, sched, args.alpha, rng);
      break;
    case MechanismKind::SI_POINT:
      t = ldps::mech::privatize_si_point(path, args.omega, args.K, sched,
                                         args.alpha, rng);
      break;
    case MechanismKind::SI_GLOBAL:
      if (args.K < 2) throw std::invalid_argument("si-global needs --K >= 2");
      t = ldps::mech::privatize_si_global(path, args.K, sched, args.alpha, rng);
      break;
  }
  if (args.out.empty())
    ldps::io::write_transcript_csv(std::cout, t);
  else
    ldps::io::write_transcript_csv(args.out, t);
  return 0;
}

struct EstimateArgs {
  std::string in;
  std::optional<int> j;
  std::optional<int> m;
  std::optional<double> omega;
  int grid = 256;
  int cov_order = 0;
  std::string out;
  std::string cov_out;
};

void write_scalar_estimate(const std::string& out, double estimate,
                           const std::string& task, const std::string& param) {
  std::ostringstream ss;
  ss << "estimate,task,param\n"
     << ldps::io::format_double(estimate) << ',' << task << ',' << param << "\n";
  if (out.empty()) {
    std::cout << ss.str();
  } else {
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot open for writing: " + out);
    os << ss.str();
  }
}

int run_estimate(const EstimateArgs& args) {
  const auto t = ldps::io::read_transcript_csv(args.in);
  const ldps::model::TruncationSchedule sched{t.tau, t.tau_tilde, t.kind};
  switch (t.kind) {
    case MechanismKind::NI: {
      if (args.j) {
        const double est =
            ldps::estim::est_cov_ni(t, *args.j, sched, t.alpha);
        write_scalar_estimate(args.out, est, "cov", std::to_string(*args.j));
      } else if (args.omega && args.m) {
        const double est =
            ldps::estim::est_sdf_ni(t, *args.m, sched, t.alpha, *args.omega);
        write_scalar_estimate(args.out, est, "sdf_point",
                              ldps::io::format_double(*args.omega));
      } else {
        throw std::invalid_argument(
            "ni transcript needs --j, or --omega together with --m");
      }
      return 0;
    }
    case MechanismKind::SI_COV: {
      const double est = ldps::estim::est_cov_si(t, t.j);
      write_scalar_estimate(args.out, est, "cov", std::to_string(t.j));
      return 0;
    }
    case MechanismKind::SI_POINT: {
      const double est = ldps::estim::est_sdf_point_si(t, t.K);
      write_scalar_estimate(args.out, est, "sdf_point",
                            ldps::io::format_double(t.omega));
      return 0;
    }
    case MechanismKind::SI_GLOBAL: {
      const Eigen::VectorXd coeffs = ldps::estim::est_cov_vector_global(t, t.K);
      Eigen::VectorXd grid(args.grid);
      for (int q = 0; q < args.grid; ++q)
        grid[q] = -M_PI + 2.0 * M_PI * q / args.grid;
      const auto density = ldps::estim::est_sdf_global(coeffs, grid);
      std::ostringstream ss;
      ss << "omega,f_hat\n";
      for (int q = 0; q < grid.size(); ++q)
        ss << ldps::io::format_double(grid[q]) << ','
           << ldps::io::format_double(density.grid_values[q]) << "\n";
      if (args.out.empty()) {
        std::cout << ss.str();
      } else {
        std::ofstream os(args.out);
        if (!os) throw std::runtime_error("cannot open for writing: " + args.out);
        os << ss.str();
      }
      if (!args.cov_out.empty()) {
        const int order = args.cov_order > 0 ? args.cov_order : t.n;
        const auto psd = ldps::estim::est_cov_matrix_psd(
            density.estimate, order,
            ldps::estim::default_psd_quadrature(t.K, order));
        ldps::io::write_series_csv(args.cov_out, "sigma", psd.first_row);
      }
      return 0;
    }
  }
  return 0;
}

struct BenchArgs {
  std::string config;
  std::string out;
};

int run_bench(const BenchArgs& args) {
  ldps::bench::ExperimentConfig cfg;
  try {
    cfg = ldps::bench::ExperimentConfig::from_json_file(args.config);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  try {
    const auto result = ldps::bench::run_experiment(cfg);
    if (args.out.empty())
      ldps::bench::emit_csv(result, std::cout);
    else
      ldps::bench::emit_csv(result, args.out);
  } catch (const std::exception& e) {
    std::cerr << "bench failed: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locally private estimation of covariances and spectral "
               "densities of stationary Gaussian series"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Draw one stationary path");
  simulate->add_option("--example", sim.example, "Benchmark process (1, 2, 3)")
      ->check(CLI::Range(1, 3));
  simulate->add_option("--n", sim.n, "Path length")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "RNG seed");
  simulate->add_option("--out", sim.out, "Output CSV (stdout if omitted)");

  PrivatizeArgs priv;
  auto* privatize = app.add_subcommand("privatize", "Privatize a path CSV");
  privatize->add_option("--in", priv.in, "Path CSV (header x)")->required();
  privatize
      ->add_option("--mech", priv.mech, "ni | si-cov | si-point | si-global")
      ->required();
  privatize->add_option("--alpha", priv.alpha, "Privacy level")->required();
  privatize->add_option("--j", priv.j, "Lag (si-cov)");
  privatize->add_option("--omega", priv.omega, "Frequency (si-point)");
  privatize->add_option("--K", priv.K, "Order (si-point, si-global)");
  double tau_opt = 0.0, tau_tilde_opt = 0.0;
  auto* tau_flag =
      privatize->add_option("--tau", tau_opt, "Override the clip level tau");
  auto* tau_tilde_flag = privatize->add_option("--tau-tilde", tau_tilde_opt,
                                               "Override tau_tilde");
  privatize->add_option("--delta-log", priv.delta_log,
                        "Exponent bump in the schedule logs");
  privatize->add_option("--seed", priv.seed, "RNG seed");
  privatize->add_option("--out", priv.out, "Transcript CSV (stdout if omitted)");

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate from a transcript");
  estimate->add_option("--in", est.in, "Transcript CSV")->required();
  int est_j = 0, est_m = 0;
  double est_omega = 0.0;
  auto* j_flag = estimate->add_option("--j", est_j, "Lag (ni transcripts)");
  auto* m_flag = estimate->add_option("--m", est_m, "Fourier order (ni)");
  auto* omega_flag =
      estimate->add_option("--omega", est_omega, "Frequency (ni)");
  estimate->add_option("--grid", est.grid, "Density grid size (si-global)")
      ->check(CLI::PositiveNumber);
  estimate->add_option("--cov-order", est.cov_order,
                       "Covariance first-row length (si-global)");
  estimate->add_option("--out", est.out, "Output CSV (stdout if omitted)");
  estimate->add_option("--cov-out", est.cov_out,
                       "Also write the covariance first row (si-global)");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a Monte Carlo sweep");
  bench_cmd->add_option("--config", bench.config, "JSON config file")
      ->required();
  bench_cmd->add_option("--out", bench.out, "Output CSV (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);
    if (privatize->parsed()) {
      if (*tau_flag) priv.tau = tau_opt;
      if (*tau_tilde_flag) priv.tau_tilde = tau_tilde_opt;
      return run_privatize(priv);
    }
    if (estimate->parsed()) {
      if (*j_flag) est.j = est_j;
      if (*m_flag) est.m = est_m;
      if (*omega_flag) est.omega = est_omega;
      return run_estimate(est);
    }
    if (bench_cmd->parsed()) return run_bench(bench);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
