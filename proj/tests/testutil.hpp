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

// Independent reference computations shared by the unit and acceptance
// suites. Everything here is written from the definitions, not by calling
// the library paths it is meant to check.

#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "ldps/mech.hpp"

namespace testutil {

// Closed-form AR(1) spectral density with marginal variance sigma0:
// f(w) = sigma0 (1 - phi^2) / (2 pi |1 - phi e^{-iw}|^2).
inline double ar1_density(double phi, double sigma0, double omega) {
  const double denom = 1.0 - 2.0 * phi * std::cos(omega) + phi * phi;
  return sigma0 * (1.0 - phi * phi) / (2.0 * M_PI * denom);
}

// Exact moments of the hypercube randomizer by full enumeration of
// (Ytilde, T, vertex). Outcomes carry the parity rescaling on coordinate 0.
struct HypercubeMoments {
  Eigen::VectorXd mean;
  Eigen::VectorXd second_moment;  // per coordinate
  double max_abs_outcome = 0.0;
};

inline HypercubeMoments enumerate_hypercube(const Eigen::VectorXd& w,
                                            const ldps::mech::HypercubeParams& p) {
  const int d = p.K + 1;
  const std::uint32_t count = 1u << d;
  const double correction =
      d % 2 == 0 ? (p.K - 1.0) / (2.0 * p.K) : 1.0;

  HypercubeMoments out;
  out.mean = Eigen::VectorXd::Zero(d);
  out.second_moment = Eigen::VectorXd::Zero(d);

  std::vector<int> y(d), z(d);
  for (std::uint32_t yb = 0; yb < count; ++yb) {
    double py = 1.0;
    for (int j = 0; j < d; ++j) {
      y[j] = (yb >> j) & 1u ? 1 : -1;
      const double plus = 0.5 + w[j] / (2.0 * p.tau_tilde);
      py *= y[j] > 0 ? plus : 1.0 - plus;
    }
    if (py == 0.0) continue;
    for (std::uint32_t zb = 0; zb < count; ++zb) {
      int s = 0;
      for (int j = 0; j < d; ++j) {
        z[j] = (zb >> j) & 1u ? 1 : -1;
        s += z[j] * y[j];
      }
      const bool pos = s > 0 || (s == 0 && z[0] == y[0]);
      const double pz =
          py * (pos ? p.pi_alpha : 1.0 - p.pi_alpha) / (count / 2);
      for (int j = 0; j < d; ++j) {
        const double value = p.B * z[j] * (j == 0 ? correction : 1.0);
        out.mean[j] += pz * value;
        out.second_moment[j] += pz * value * value;
        out.max_abs_outcome = std::max(out.max_abs_outcome, std::fabs(value));
      }
    }
  }
  return out;
}

// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  size_t ia = 0, ib = 0;
  while (ia < a.size() && ib < b.size()) {
    if (a[ia] <= b[ib]) ++ia;
    else ++ib;
    const double fa = static_cast<double>(ia) / a.size();
    const double fb = static_cast<double>(ib) / b.size();
    d = std::max(d, std::fabs(fa - fb));
  }
  return d;
}

// Critical value for the two-sample KS test at the given level.
inline double ks_critical(size_t n1, size_t n2, double level) {
  const double c = std::sqrt(-std::log(level / 2.0) / 2.0);
  return c * std::sqrt(static_cast<double>(n1 + n2) /
                       (static_cast<double>(n1) * static_cast<double>(n2)));
}

// Standard error of a mean by non-overlapping batch means.
inline double batch_means_se(const std::vector<double>& values, int batches) {
  const size_t per = values.size() / batches;
  std::vector<double> means;
  means.reserve(batches);
  for (int b = 0; b < batches; ++b) {
    double acc = 0.0;
    for (size_t i = b * per; i < (b + 1) * per; ++i) acc += values[i];
    means.push_back(acc / per);
  }
  double grand = 0.0;
  for (double v : means) grand += v;
  grand /= batches;
  double var = 0.0;
  for (double v : means) var += (v - grand) * (v - grand);
  var /= (batches - 1);
  return std::sqrt(var / batches);
}

}  // namespace testutil
