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

#include "ldps/model.hpp"
#include "ldps/rng.hpp"

namespace ldps::procgen {

// Second-order description of a centered stationary Gaussian series.
struct ProcessSpec {
  enum class Kind { AR1, ClosedFormDensity, PolyCov, ExplicitCov };

  Kind kind = Kind::ExplicitCov;

  // AR1: sigma_j = marginal_variance * phi^{|j|}, |phi| < 1.
  double phi = 0.0;
  double marginal_variance = 1.0;

  // ClosedFormDensity: f(w) = scale * (|cos w|^power + offset).
  double scale = 1.0;
  double power = 1.0;
  double offset = 0.0;

  // PolyCov: sigma_k = scale * (1 + |k|)^{-exponent}, exponent > 1.
  double exponent = 2.0;

  model::CovarianceSequence explicit_covs;  // ExplicitCov

  int max_lag = 0;

  static ProcessSpec ar1(double phi, double marginal_variance, int max_lag);
  static ProcessSpec closed_form_density(double scale, double power,
                                         double offset, int max_lag);
  static ProcessSpec poly_cov(double scale, double exponent, int max_lag);
  static ProcessSpec explicit_cov(model::CovarianceSequence covs);

  // The three benchmark processes: (1) AR(0.8) with marginal variance 1.44,
  // (2) density 1.27 (|cos w|^0.8 + 0.45), (3) sigma_k = 1.44 (1+|k|)^{-5.1}.
  static ProcessSpec example(int id, int max_lag);

  double density(double omega) const;  // ClosedFormDensity only
  void validate() const;
};

model::CovarianceSequence covs_of(const ProcessSpec& spec);

enum class SamplingMethod { Auto, CirculantEmbedding, DenseCholesky };

// Exact sampler for N(0, Toeplitz(sigma_{|i-j|})) paths. Circulant
// embedding of size >= 2(n-1) with negative circulant eigenvalues clipped
// at zero when their magnitude is below 1e-8 of the largest one; otherwise
// dense Cholesky with diagonal jitter 1e-10 sigma_0. Specs failing both
// routes are rejected.
class StationarySampler {
 public:
  StationarySampler(const model::CovarianceSequence& covs, int n,
                    SamplingMethod method = SamplingMethod::Auto);

  Eigen::VectorXd draw(SeededRng& rng) const;

  int n() const { return n_; }
  SamplingMethod method() const { return resolved_; }

 private:
  int n_;
  SamplingMethod resolved_;
  int m_ = 0;                 // embedding size (power of two)
  Eigen::VectorXd sqrt_eig_;  // circulant route
  Eigen::MatrixXd chol_;      // dense route, lower factor
};

Eigen::VectorXd sample_path(const model::CovarianceSequence& covs, int n,
                            SeededRng& rng,
                            SamplingMethod method = SamplingMethod::Auto);

}  // namespace ldps::procgen
