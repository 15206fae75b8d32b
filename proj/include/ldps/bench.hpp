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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ldps/estim.hpp"
#include "ldps/procgen.hpp"

namespace ldps::bench {

enum class TaskKind { Cov0, CovJ, SdfPoint, SdfGlobal };

struct Task {
  TaskKind kind = TaskKind::Cov0;
  int j = 2;           // CovJ
  double omega = 0.0;  // SdfPoint

  std::string label() const;
};

enum class MechChoice { NI, SI, NonPrivate };

const char* to_string(MechChoice mech);

// Reporting convention for densities: Eq1 keeps the 1/2pi Fourier
// normalization; No2Pi rescales density truths and estimates by 2pi (and
// interprets closed-form densities accordingly).
enum class DensityNormalization { Eq1, No2Pi };

struct ExperimentConfig {
  int example = 1;  // 1..3; ignored when process is set
  std::optional<procgen::ProcessSpec> process;
  int n = 1000;
  int replications = 300;
  std::vector<double> alphas;      // strictly ascending, all > 0
  std::vector<Task> tasks;
  std::vector<MechChoice> mechanisms;
  double s = 3.0;
  double delta_log = 0.001;
  std::optional<double> tau_override;
  std::optional<double> tau_tilde_override;
  std::uint64_t seed = 0;
  DensityNormalization normalization = DensityNormalization::Eq1;

  void validate() const;

  // Flat JSON file mirroring the fields above; throws std::invalid_argument
  // on malformed or inconsistent input.
  static ExperimentConfig from_json_file(const std::string& path);
  static ExperimentConfig from_json_text(const std::string& text);
};

struct ResultRow {
  int example = 0;  // 0 for a custom process
  std::string task;
  std::string mechanism;
  double alpha = 0.0;  // +infinity for non-private rows
  double mse = 0.0;
  double mse_se = 0.0;
  double truth = 0.0;
  int n = 0;
  int replications = 0;
  double tau = 0.0;        // 0 for non-private rows
  double tau_tilde = 0.0;  // 0 for non-private rows
  int bandwidth = 0;       // 0 for covariance tasks
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
};

// Ground truth computed from the exact second-order model (never from
// tabulated constants). For SdfGlobal this is the squared L2 mass of the
// density, the scale against which the integrated squared error is read.
double true_value(const ExperimentConfig& cfg, const Task& task);

// Monte Carlo sweep: for every (alpha, task, mechanism) cell, draws
// `replications` paths, privatizes, estimates, and accumulates squared
// errors (integrated squared error for SdfGlobal). Deterministic given the
// seed: paths are keyed by replication alone (common random numbers across
// cells) and privatization noise by (alpha index, task, mechanism,
// replication). Replications run on min(LDP_SPECTRAL_THREADS, hardware)
// workers unless worker_override is given; scheduling cannot change the
// output.
ExperimentResult run_experiment(
    const ExperimentConfig& cfg,
    std::optional<unsigned> worker_override = std::nullopt);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// OLS of log(mse) on log(alpha) over the points with alpha inside the
// closed window. Needs at least 3 in-window points, all with mse > 0.
SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points,
                          std::pair<double, double> alpha_window);

// Stable column order, 17-significant-digit floats; byte-identical for
// identical results.
void emit_csv(const ExperimentResult& result, std::ostream& os);
void emit_csv(const ExperimentResult& result, const std::string& path);

}  // namespace ldps::bench
