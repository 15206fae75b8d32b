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
#include <optional>

#include "ldps/model.hpp"
#include "ldps/rng.hpp"

namespace ldps::mech {

using model::MechanismKind;
using model::TruncationSchedule;

// Privatized view of one path. Which channels are populated depends on the
// mechanism:
//   NI        z only
//   SI_COV    j >= 1: z (length n) and aux = Zbar_{j+1..n};
//             j == 0: aux = Zbar_{1..n} only (single channel, z empty)
//   SI_POINT  z (length n) and aux = Ztilde_{K+1..n}
//   SI_GLOBAL z (length n) and aux_matrix, one row per i = K+1..n with
//             columns 0..K; entries lie in {-B, +B} except column 0 when
//             K+1 is even, where they lie in {+-B (K-1)/(2K)}
// The clipping levels and budget used to build the transcript are recorded
// so estimators can reject mismatched bias corrections.
struct Transcript {
  MechanismKind kind = MechanismKind::NI;
  int n = 0;
  double alpha = 0.0;
  double tau = 0.0;
  double tau_tilde = 0.0;
  int j = -1;         // SI_COV
  double omega = 0.0; // SI_POINT
  int K = 0;          // SI_POINT, SI_GLOBAL

  Eigen::VectorXd z;
  Eigen::VectorXd aux;
  Eigen::MatrixXd aux_matrix;
};

// Test hook: overrides for the Laplace noise scales. Zero means noiseless;
// for SI_GLOBAL an aux override of zero bypasses the vertex randomizer and
// releases the clipped statistics directly. Production paths never set it.
struct NoiseHook {
  std::optional<double> z_scale;
  std::optional<double> aux_scale;
};

// Clamp to [-tau, tau].
double trim(double x, double tau);

// One draw from the centered Laplace with the given scale.
double laplace_sample(double scale, SeededRng& rng);

// De la Vallee-Poussin taper: 1 for |k| <= K/2, 2(1 - |k|/K) for
// K/2 < |k| <= K; |k| > K is rejected.
double vdp_weight(int k, int K);

// Z_i = trim(X_i, tau) + Lap(2 tau / alpha), one Laplace draw per index.
Transcript privatize_ni(const Eigen::VectorXd& path,
                        const TruncationSchedule& sched, double alpha,
                        SeededRng& rng, const NoiseHook& hook = {});

// Lag-j product channel. For j >= 1: Z_i = trim(X_i, tau) + Lap(4 tau/alpha)
// for every i, and for i >= j+1, Zbar_{i,j} = trim(X_i Z_{i-j}, tau_tilde) +
// Lap(4 tau_tilde / alpha). For j = 0 the single channel Zbar_{i,0} =
// trim(X_i^2, tau) + Lap(2 tau / alpha) is released for every i; note the
// clip level is tau, not tau_tilde. Draw accounting: two Laplace draws per
// index when j >= 1 (the aux draw is burned for i <= j), one for j = 0.
Transcript privatize_si_cov(const Eigen::VectorXd& path, int j,
                            const TruncationSchedule& sched, double alpha,
                            SeededRng& rng, const NoiseHook& hook = {});

// Tapered second-order channel at frequency omega: Z_i as in the lag
// mechanism, and for i >= K+1,
//   V_i = X_i^2 + 2 sum_{k=1..K} a_k X_i Z_{i-k} cos(omega k),
//   Ztilde_i = trim(V_i, tau_tilde) + Lap(4 tau_tilde / alpha).
// The cosine form equals the two-sided complex sum exactly because the
// taper is even. Two Laplace draws per index.
Transcript privatize_si_point(const Eigen::VectorXd& path, double omega,
                              int K, const TruncationSchedule& sched,
                              double alpha, SeededRng& rng,
                              const NoiseHook& hook = {});

// Vertex randomizer for vectors in the l_inf ball of radius tau_tilde.
// alpha here is the budget consumed by the randomizer itself.
struct HypercubeParams {
  int K = 0;
  double tau_tilde = 0.0;
  double alpha = 0.0;
  double pi_alpha = 0.0;  // e^alpha / (e^alpha + 1)
  double B = 0.0;         // tau_tilde (e^alpha + 1)/(e^alpha - 1) C_K
  double C_K = 0.0;

  static HypercubeParams make(int K, double tau_tilde, double alpha);
};

// One draw of the hypercube mechanism:
//  (i)   Ytilde_j = +-tau_tilde with P(+) = 1/2 + w_j / (2 tau_tilde);
//  (ii)  T ~ Ber(pi_alpha);
//  (iii) Z uniform over the vertices of {-B, B}^{K+1} on the hemisphere
//        matching (T=1) or opposing (T=0) Ytilde, ties on <z, Ytilde> = 0
//        broken by the sign of coordinate 0 relative to Ytilde_0;
//  (iv)  when K+1 is even, coordinate 0 is rescaled by (K-1)/(2K).
// The result is conditionally unbiased for w and every coordinate has
// conditional variance at most B^2. ||w||_inf > tau_tilde is rejected.
// Vertex sampling is by rejection over uniform sign patterns (acceptance
// probability exactly 1/2).
Eigen::VectorXd hypercube_sample(const Eigen::VectorXd& w_tilde,
                                 const HypercubeParams& params,
                                 SeededRng& rng);

// Exact conditional pmf of the (pre-rescaling) vertex outcome given w;
// entry b of the result is the probability of the sign pattern whose
// coordinate j is +1 iff bit j of b is set. Used by the ratio certifier.
Eigen::VectorXd hypercube_conditional_pmf(const Eigen::VectorXd& w_tilde,
                                          const HypercubeParams& params);

// Joint mechanism for the first K+1 covariance coefficients:
// Z_i = trim(X_i, tau) + Lap(4 tau / alpha) for every i (budget alpha/2),
// and for i >= K+1 the clipped product vector
//   Wtilde_i = (trim(X_i^2), trim(X_i Z_{i-1}), ..., trim(X_i Z_{i-K}))
// (all at tau_tilde) is released through the hypercube randomizer at
// budget alpha/2. One Laplace draw per index from the main stream; the
// vertex sampler runs on a per-index child stream so its variable draw
// count never shifts the main stream. Requires 2 <= K < n.
Transcript privatize_si_global(const Eigen::VectorXd& path, int K,
                               const TruncationSchedule& sched, double alpha,
                               SeededRng& rng, const NoiseHook& hook = {});

struct RatioCheckConfig {
  double alpha = 1.0;
  double tau = 1.0;
  double tau_tilde = 1.0;
  int j = 1;  // SI_COV
  int K = 2;  // SI_GLOBAL
};

// max_ratio is the supremum of the per-index conditional density (or pmf)
// ratio across input pairs; budget is the exponent this mechanism attains
// analytically, so a correct implementation has max_ratio = e^budget at
// the extremes. pass reports max_ratio <= e^budget (1 + 1e-9). Laplace
// mechanisms are checked on grids that include the extremal inputs; the
// hypercube channel is enumerated exactly (K <= 10).
//
// Attained budgets: NI and SI_COV (j >= 1) and SI_POINT reach the full
// alpha; SI_COV at j = 0 reaches alpha/2 because trim(x^2, tau) has range
// [0, tau], half the generic width; SI_GLOBAL reports the enumerated
// vertex channel alone, alpha/2 (the Laplace half contributes the rest).
struct RatioReport {
  double max_ratio = 0.0;
  double budget = 0.0;
  bool pass = false;
};

RatioReport ldp_ratio_check(MechanismKind kind, const RatioCheckConfig& config,
                            int grid_size);

}  // namespace ldps::mech
