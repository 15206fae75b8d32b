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

#include "doctest.h"
#include "ldps/model.hpp"
#include "ldps/rng.hpp"
#include "testutil.hpp"

using ldps::SeededRng;
using namespace ldps::model;

namespace {

CovarianceSequence seq(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<int>(values.size()));
  int i = 0;
  for (double x : values) v[i++] = x;
  return CovarianceSequence(v);
}

}  // namespace

TEST_CASE("spectral_from_cov closed forms") {
  CHECK(spectral_from_cov(seq({2.0}), 0.7) == doctest::Approx(1.0 / M_PI));
  CHECK(spectral_from_cov(seq({2.0}), -2.9) == doctest::Approx(1.0 / M_PI));
  CHECK(spectral_from_cov(seq({1.0, 0.5}), 0.0) == doctest::Approx(1.0 / M_PI));
}

TEST_CASE("spectral_from_cov matches the AR(1) closed form") {
  const double phi = 0.8, sigma0 = 1.44;
  Eigen::VectorXd values(201);
  for (int j = 0; j <= 200; ++j) values[j] = sigma0 * std::pow(phi, j);
  const CovarianceSequence covs{values};
  const double omega = M_PI / 5.0;
  CHECK(spectral_from_cov(covs, omega) ==
        doctest::Approx(testutil::ar1_density(phi, sigma0, omega)).epsilon(1e-6));
}

TEST_CASE("spectral_from_cov is even and 2pi-periodic") {
  SeededRng rng(11, 0);
  for (int rep = 0; rep < 50; ++rep) {
    Eigen::VectorXd values(6);
    for (int j = 0; j < 6; ++j) values[j] = rng.normal();
    values[0] = std::fabs(values[0]);
    const CovarianceSequence covs{values};
    const double omega = (2.0 * rng.uniform() - 1.0) * M_PI;
    CHECK(spectral_from_cov(covs, omega) ==
          doctest::Approx(spectral_from_cov(covs, -omega)).epsilon(1e-12));
    CHECK(spectral_from_cov(covs, omega) ==
          doctest::Approx(spectral_from_cov(covs, omega + 2.0 * M_PI))
              .epsilon(1e-10));
  }
}

TEST_CASE("cov_from_spectral on constants") {
  const auto flat = [](double) { return 3.25; };
  CHECK(cov_from_spectral(flat, 1, 128) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(cov_from_spectral(flat, 0, 128) ==
        doctest::Approx(2.0 * M_PI * 3.25).epsilon(1e-12));
}

TEST_CASE("cov_from_spectral rejects bad input") {
  const auto flat = [](double) { return 1.0; };
  CHECK_THROWS_AS(cov_from_spectral(flat, 0, 62), std::invalid_argument);
  CHECK_THROWS_AS(cov_from_spectral(flat, 0, 65), std::invalid_argument);
  const auto bad = [](double w) { return w == -M_PI ? 1.0 / 0.0 : 1.0; };
  CHECK_THROWS_AS(cov_from_spectral(bad, 0, 128), std::runtime_error);
}

TEST_CASE("spectral <-> covariance roundtrip") {
  const auto covs = seq({1.0, 0.3, 0.1});
  const auto f = [&covs](double w) { return spectral_from_cov(covs, w); };
  CHECK(cov_from_spectral(f, 2, 128) == doctest::Approx(0.1).epsilon(1e-10));

  SeededRng rng(5, 1);
  for (int rep = 0; rep < 20; ++rep) {
    const int lag = 1 + static_cast<int>(rng.uniform() * 10);
    Eigen::VectorXd values(lag + 1);
    for (int j = 0; j <= lag; ++j) values[j] = rng.normal();
    values[0] = std::fabs(values[0]) + 1.0;
    const CovarianceSequence random_covs{values};
    const auto g = [&random_covs](double w) {
      return spectral_from_cov(random_covs, w);
    };
    for (int j = 0; j <= lag; ++j)
      CHECK(cov_from_spectral(g, j, 64) ==
            doctest::Approx(random_covs.at(j)).epsilon(1e-10));
  }
}

TEST_CASE("truncation_schedule formulas") {
  const PrivacyBudget budget{1.0, 0.001};
  const double lg = std::pow(std::log(1000.0), 1.001);

  const auto ni = truncation_schedule(1000, budget, MechanismKind::NI);
  CHECK(ni.tau == doctest::Approx(std::sqrt(56.0 * lg)).epsilon(1e-12));
  CHECK(ni.tau > 19.0);
  CHECK(ni.tau < 21.0);
  CHECK(ni.tau_tilde == ni.tau);

  const auto si = truncation_schedule(1000, budget, MechanismKind::SI_COV);
  CHECK(si.tau == doctest::Approx(std::sqrt(8.0 * lg)).epsilon(1e-12));
  CHECK(si.tau_tilde ==
        doctest::Approx(16.0 * lg * si.tau * si.tau).epsilon(1e-12));

  const auto gl = truncation_schedule(1000, budget, MechanismKind::SI_GLOBAL);
  CHECK(gl.tau == si.tau);
  CHECK(gl.tau_tilde == si.tau_tilde);

  const auto pt = truncation_schedule(1000, budget, MechanismKind::SI_POINT, 4);
  CHECK(pt.tau == si.tau);
  CHECK(pt.tau_tilde ==
        doctest::Approx(std::sqrt(1024.0 * std::pow(pt.tau, 6.0) * 5.0))
            .epsilon(1e-12));
}

TEST_CASE("truncation_schedule rejects bad input") {
  const PrivacyBudget budget{0.5, 0.001};
  CHECK_THROWS_AS(truncation_schedule(1, budget, MechanismKind::NI),
                  std::invalid_argument);
  CHECK_THROWS_AS(truncation_schedule(1000, budget, MechanismKind::SI_POINT),
                  std::invalid_argument);
  CHECK_THROWS_AS(truncation_schedule(1000, budget, MechanismKind::SI_POINT, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      truncation_schedule(1000, PrivacyBudget{-1.0, 0.001}, MechanismKind::NI),
      std::invalid_argument);
}

TEST_CASE("truncation_schedule is monotone in n") {
  const PrivacyBudget budget{0.3, 0.001};
  for (const auto kind : {MechanismKind::NI, MechanismKind::SI_COV,
                          MechanismKind::SI_POINT, MechanismKind::SI_GLOBAL}) {
    double prev_tau = 0.0, prev_tilde = 0.0;
    for (int n : {2, 5, 20, 100, 1000, 50000}) {
      const auto sched =
          kind == MechanismKind::SI_POINT
              ? truncation_schedule(n, budget, kind, 3)
              : truncation_schedule(n, budget, kind);
      CHECK(sched.tau >= prev_tau);
      CHECK(sched.tau_tilde >= prev_tilde);
      prev_tau = sched.tau;
      prev_tilde = sched.tau_tilde;
    }
  }
}

TEST_CASE("bandwidth hand values and clamps") {
  const PrivacyBudget budget{1.0, 0.001};
  const TruncationSchedule unit{1.0, 1.0, MechanismKind::NI};
  // 1000^{1/7} = 2.68..., rounded up.
  CHECK(bandwidth(1000, budget, 3.0, unit, BandwidthTask::NI_GLOBAL) == 3);

  // n alpha^2 / tau^6 < 1 clamps at the floor.
  const TruncationSchedule big{50.0, 50.0, MechanismKind::SI_POINT};
  CHECK(bandwidth(1000, PrivacyBudget{1e-4, 0.001}, 3.0, big,
                  BandwidthTask::SI_POINT_HOELDER) == 1);
}

TEST_CASE("bandwidth matches direct evaluation") {
  const PrivacyBudget budget{0.2, 0.001};
  const auto sched = truncation_schedule(1000, budget, MechanismKind::SI_COV);
  const double s = 3.0;
  const double expected_raw = std::pow(
      std::min(1000.0, 1000.0 * 0.2 * 0.2 / std::pow(sched.tau, 6.0)),
      1.0 / (2.0 * s + 1.0));
  const int expected =
      std::max(1, static_cast<int>(std::ceil(expected_raw)));
  CHECK(bandwidth(1000, budget, s, sched, BandwidthTask::SI_POINT_HOELDER) ==
        expected);

  const double raw_global = std::min(
      std::pow(1000.0 * 0.04 / (sched.tau_tilde * sched.tau_tilde),
               1.0 / (2.0 * s + 2.0)),
      std::pow(1000.0, 1.0 / (2.0 * s + 1.0)));
  CHECK(bandwidth(1000, budget, s, sched, BandwidthTask::SI_GLOBAL) ==
        std::max(1, static_cast<int>(std::ceil(raw_global))));
}

TEST_CASE("bandwidth never grows when alpha shrinks") {
  const auto tasks = {BandwidthTask::NI_GLOBAL,
                      BandwidthTask::NI_POINT_HOELDER,
                      BandwidthTask::NI_POINT_SOBOLEV,
                      BandwidthTask::SI_POINT_HOELDER,
                      BandwidthTask::SI_POINT_SOBOLEV,
                      BandwidthTask::SI_GLOBAL};
  const TruncationSchedule sched{3.0, 40.0, MechanismKind::SI_COV};
  for (const auto task : tasks) {
    int prev = 1 << 20;
    for (double alpha : {2.0, 1.0, 0.5, 0.2, 0.05, 0.01}) {
      const int bw = bandwidth(2000, PrivacyBudget{alpha, 0.001}, 1.5, sched, task);
      CHECK(bw <= prev);
      prev = bw;
    }
  }
}

TEST_CASE("covariance sequence validation and PSD probe") {
  CHECK_THROWS_AS(seq({-1.0}).validate(), std::invalid_argument);
  const auto ar = seq({1.0, 0.8, 0.64, 0.512});
  ar.validate();
  CHECK(ar.min_toeplitz_eigenvalue(4) >= -1e-12);
  // A spike at lag 1 larger than sigma_0 is indefinite.
  const auto bad = seq({1.0, 2.0});
  CHECK(bad.min_toeplitz_eigenvalue(2) < 0.0);
  CHECK(ar.at(17) == 0.0);
  CHECK(ar.at(-2) == doctest::Approx(0.64));
}

TEST_CASE("smoothness class validation") {
  SmoothnessClass sobolev{SmoothnessClass::Kind::Sobolev, 3.0, 1.0, {}};
  sobolev.validate();
  SmoothnessClass hoelder{SmoothnessClass::Kind::Hoelder, 0.8, 1.0, 2.0};
  hoelder.validate();
  SmoothnessClass missing{SmoothnessClass::Kind::Hoelder, 0.8, 1.0, {}};
  CHECK_THROWS_AS(missing.validate(), std::invalid_argument);
  SmoothnessClass rough{SmoothnessClass::Kind::Sobolev,  0.4, 1.0, {}};
  CHECK_THROWS_AS(rough.validate(), std::invalid_argument);
}
