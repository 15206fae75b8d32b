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

#include <Eigen/Core>
#include <functional>
#include <optional>

namespace ldps::model {

// Finitely supported autocovariance sequence sigma_0..sigma_L with the
// symmetric extension sigma_{-j} = sigma_j implied and exact zeros beyond
// max_lag.
struct CovarianceSequence {
  Eigen::VectorXd values;  // values[j] = sigma_j, j = 0..max_lag

  CovarianceSequence() = default;
  explicit CovarianceSequence(Eigen::VectorXd v) : values(std::move(v)) {}

  int max_lag() const { return static_cast<int>(values.size()) - 1; }

  double at(int j) const {
    const int k = j < 0 ? -j : j;
    return k < values.size() ? values[k] : 0.0;
  }

  // sigma_0 >= 0 and all entries finite; throws otherwise.
  void validate() const;

  // Smallest eigenvalue of the order-m Toeplitz matrix (sigma_{|i-j|}).
  double min_toeplitz_eigenvalue(int m) const;
};

Eigen::MatrixXd toeplitz_from_first_row(const Eigen::VectorXd& first_row);

// Real-valued density on [-pi, pi]; either closed form or a finite
// cosine sum of a CovarianceSequence.
struct SpectralDensityModel {
  std::function<double(double)> evaluator;
  double operator()(double omega) const { return evaluator(omega); }
};

struct PrivacyBudget {
  double alpha;              // privacy level, > 0
  double delta_log = 0.001;  // exponent bump in log^{1+delta}(n), > 0

  void validate() const;
};

enum class MechanismKind { NI, SI_COV, SI_POINT, SI_GLOBAL };

const char* to_string(MechanismKind kind);

// Clipping levels for a mechanism. tau bounds the raw observations,
// tau_tilde the second-stage statistics; for NI only tau is meaningful and
// tau_tilde is set equal to it.
struct TruncationSchedule {
  double tau;
  double tau_tilde;
  MechanismKind kind;
};

struct SmoothnessClass {
  enum class Kind { Sobolev, Hoelder };
  Kind kind;
  double s;  // > 1/2
  double L;  // > 0
  std::optional<double> L0;  // Hoelder only

  void validate() const;
};

enum class BandwidthTask {
  NI_GLOBAL,
  NI_POINT_HOELDER,
  NI_POINT_SOBOLEV,
  SI_POINT_HOELDER,
  SI_POINT_SOBOLEV,
  SI_GLOBAL,
};

// f(omega) = (1/2pi) [sigma_0 + 2 sum_{j=1}^{L} sigma_j cos(j omega)].
double spectral_from_cov(const CovarianceSequence& covs, double omega);

// integral_{-pi}^{pi} f(w) cos(j w) dw on a uniform periodic grid; exact
// for trigonometric polynomials of degree < quadrature_points / 2.
// quadrature_points must be even and >= 64. Throws if f is non-finite
// anywhere on the grid.
double cov_from_spectral(const std::function<double(double)>& f, int j,
                         int quadrature_points);

// Clipping levels as functions of n and the budget. K is required (and
// must be >= 1) for SI_POINT, where the second-stage level grows with the
// summation order. Natural logarithms throughout. n < 2 is rejected.
TruncationSchedule truncation_schedule(int n, const PrivacyBudget& budget,
                                       MechanismKind kind,
                                       std::optional<int> K = std::nullopt);

// Fourier cutoff (m or K) for the given task, clamped to [1, n-1].
int bandwidth(int n, const PrivacyBudget& budget, double s,
              const TruncationSchedule& sched, BandwidthTask task);

}  // namespace ldps::model
