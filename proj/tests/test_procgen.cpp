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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "ldps/procgen.hpp"
#include "testutil.hpp"

using ldps::SeededRng;
using namespace ldps::procgen;

TEST_CASE("covs_of hand values") {
  const auto ar = covs_of(ProcessSpec::ar1(0.8, 1.44, 10));
  CHECK(ar.at(0) == doctest::Approx(1.44));
  CHECK(ar.at(2) == doctest::Approx(0.9216));

  const auto poly = covs_of(ProcessSpec::poly_cov(1.44, 5.1, 10));
  CHECK(poly.at(0) == doctest::Approx(1.44));
  CHECK(poly.at(2) == doctest::Approx(1.44 * std::pow(3.0, -5.1)).epsilon(1e-12));
  CHECK(poly.at(2) == doctest::Approx(0.005).epsilon(0.06));

  const auto white = covs_of(ProcessSpec::ar1(0.0, 1.7, 5));
  CHECK(white.at(0) == doctest::Approx(1.7));
  for (int j = 1; j <= 5; ++j) CHECK(white.at(j) == 0.0);
}

TEST_CASE("covs_of closed-form density inverts the transform") {
  // Verified against the cosine sum: reconstructing the density from the
  // computed coefficients must reproduce the closed form pointwise.
  const auto spec = ProcessSpec::example(2, 48);
  const auto covs = covs_of(spec);
  for (double omega : {0.0, 0.4, M_PI / 5.0, 2.0, 3.0}) {
    const double reconstructed = ldps::model::spectral_from_cov(covs, omega);
    CHECK(reconstructed == doctest::Approx(spec.density(omega)).epsilon(2e-3));
  }
  // Odd coefficients vanish: the density has period pi.
  CHECK(std::fabs(covs.at(1)) < 1e-9);
  CHECK(std::fabs(covs.at(3)) < 1e-9);
}

TEST_CASE("covs_of validates specs") {
  CHECK_THROWS_AS(covs_of(ProcessSpec::ar1(1.1, 1.0, 5)), std::invalid_argument);
  CHECK_THROWS_AS(covs_of(ProcessSpec::poly_cov(1.0, 0.9, 5)),
                  std::invalid_argument);
}

TEST_CASE("sample_path is deterministic in (seed, stream)") {
  const auto covs = covs_of(ProcessSpec::example(1, 63));
  SeededRng a(42, 7), b(42, 7), c(42, 8);
  const auto pa = sample_path(covs, 64, a);
  const auto pb = sample_path(covs, 64, b);
  const auto pc = sample_path(covs, 64, c);
  CHECK((pa - pb).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((pa - pc).lpNorm<Eigen::Infinity>() > 0.0);
}

TEST_CASE("white noise sample mean obeys the CLT bound") {
  Eigen::VectorXd v(1);
  v[0] = 1.0;
  const ldps::model::CovarianceSequence white(v);
  SeededRng rng(3, 1);
  const auto path = sample_path(white, 100000, rng);
  CHECK(std::fabs(path.mean()) <= 4.0 / std::sqrt(100000.0));
}

TEST_CASE("AR(1) empirical lag-1 covariance is correct on a long path") {
  const auto covs = covs_of(ProcessSpec::ar1(0.8, 1.44, 1023));
  SeededRng rng(9, 2);
  const int n = 100000;
  const auto path = sample_path(covs, n, rng);
  std::vector<double> products(n - 1);
  for (int i = 0; i + 1 < n; ++i) products[i] = path[i] * path[i + 1];
  double mean = 0.0;
  for (double p : products) mean += p;
  mean /= products.size();
  const double se = testutil::batch_means_se(products, 50);
  CHECK(std::fabs(mean - 1.152) <= 4.0 * se);
}

TEST_CASE("empirical covariance matches the target matrix at small order") {
  const int n = 16;
  const int reps = 100000;
  const auto covs = covs_of(ProcessSpec::example(1, n - 1));
  const StationarySampler sampler(covs, n);
  SeededRng rng(123, 0);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
  for (int r = 0; r < reps; ++r) {
    const auto x = sampler.draw(rng);
    acc.selfadjointView<Eigen::Lower>().rankUpdate(x);
  }
  const Eigen::MatrixXd emp =
      Eigen::MatrixXd(acc.selfadjointView<Eigen::Lower>()) / reps;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const double target = covs.at(i - j);
      const double var_of_prod =
          covs.at(0) * covs.at(0) + target * target;  // Gaussian product
      const double se = std::sqrt(var_of_prod / reps);
      CHECK(std::fabs(emp(i, j) - target) <= 5.0 * se);
    }
}

TEST_CASE("circulant and Cholesky routes agree in distribution") {
  const int n = 8;
  const auto covs = covs_of(ProcessSpec::example(1, n - 1));
  const StationarySampler circ(covs, n, SamplingMethod::CirculantEmbedding);
  const StationarySampler chol(covs, n, SamplingMethod::DenseCholesky);
  CHECK(circ.method() == SamplingMethod::CirculantEmbedding);
  CHECK(chol.method() == SamplingMethod::DenseCholesky);
  const int draws = 10000;
  std::vector<double> first_circ(draws), first_chol(draws);
  SeededRng ra(77, 1), rb(77, 2);
  for (int r = 0; r < draws; ++r) {
    first_circ[r] = circ.draw(ra)[0];
    first_chol[r] = chol.draw(rb)[0];
  }
  const double d = testutil::ks_statistic(first_circ, first_chol);
  CHECK(d < testutil::ks_critical(draws, draws, 1e-3));
}

TEST_CASE("indefinite covariance sequences are rejected") {
  Eigen::VectorXd v(2);
  v[0] = 1.0;
  v[1] = 2.0;
  const ldps::model::CovarianceSequence bad(v);
  SeededRng rng(1, 1);
  CHECK_THROWS_AS(sample_path(bad, 16, rng), std::runtime_error);
}

TEST_CASE("example ids are validated") {
  CHECK_THROWS_AS(ProcessSpec::example(4, 10), std::invalid_argument);
}
