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

#include "ldps/mech.hpp"
#include "ldps/model.hpp"

namespace ldps::estim {

using mech::Transcript;
using model::TruncationSchedule;

// Finite cosine-sum density estimate with coefficients sigma_0..sigma_order.
struct SpectralEstimate {
  Eigen::VectorXd coeffs;
  int order = 0;

  // (1/2pi) [c_0 + 2 sum_{k=1..order} c_k cos(k omega)]; even and
  // 2pi-periodic by construction.
  double operator()(double omega) const;
};

// First row of a symmetric Toeplitz covariance estimate.
struct ToeplitzEstimate {
  Eigen::VectorXd first_row;

  double min_eigenvalue() const;
};

// Bias-corrected lag estimate from a non-interactive transcript:
//   j = 0:  (1/n) sum Z_t^2 - 8 tau^2 / alpha^2
//   j != 0: (1/n) sum_{t=1..n-|j|} Z_t Z_{t+|j|}
// renormalize rescales by n/(n-|j|). The transcript's recorded (tau, alpha)
// must match the supplied schedule or the correction would be meaningless.
double est_cov_ni(const Transcript& t, int j, const TruncationSchedule& sched,
                  double alpha, bool renormalize = false);

// (1/2pi) [sigma_0 + 2 sum_{j=1..m} sigma_j cos(j omega)] with the NI lag
// estimates above.
double est_sdf_ni(const Transcript& t, int m, const TruncationSchedule& sched,
                  double alpha, double omega);

// Mean of the lag-j product channel.
double est_cov_si(const Transcript& t, int j);

// Mean of the tapered channel divided by 2pi.
double est_sdf_point_si(const Transcript& t, int K);

// Column means of the vertex-channel matrix: estimates sigma_0..sigma_K.
Eigen::VectorXd est_cov_vector_global(const Transcript& t, int K);

struct GlobalDensityEstimate {
  SpectralEstimate estimate;
  Eigen::VectorXd grid_values;  // estimate evaluated on omega_grid
};

GlobalDensityEstimate est_sdf_global(const Eigen::VectorXd& coeffs,
                                     const Eigen::VectorXd& omega_grid);

// Covariance matrix first row from the positive part of the density
// estimate: sigma_j = integral max(f, 0) cos(j w) dw on a uniform grid.
// Positive quadrature weights make the resulting Toeplitz matrix positive
// semidefinite up to roundoff regardless of the estimate's sign. Requires
// quadrature_points >= max(4 order, 2n).
ToeplitzEstimate est_cov_matrix_psd(const SpectralEstimate& est, int n,
                                    int quadrature_points);

inline int default_psd_quadrature(int order, int n) {
  return std::max({4 * order, 2 * n, 4096});
}

// Non-private references: (1/n) sum_{k=1..n-j} X_k X_{k+j} and its
// truncated cosine sum of order K.
double baseline_cov(const Eigen::VectorXd& path, int j);
double baseline_sdf(const Eigen::VectorXd& path, double omega, int K);

}  // namespace ldps::estim
