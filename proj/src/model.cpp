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

#include "ldps/model.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace ldps::model {

void CovarianceSequence::validate() const {
  if (values.size() < 1)
    throw std::invalid_argument("covariance sequence is empty");
  if (!values.allFinite())
    throw std::invalid_argument("covariance sequence has non-finite entries");
  if (values[0] < 0.0)
    throw std::invalid_argument("sigma_0 must be nonnegative");
}

Eigen::MatrixXd toeplitz_from_first_row(const Eigen::VectorXd& first_row) {
  const int n = static_cast<int>(first_row.size());
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = first_row[std::abs(i - j)];
  return m;
}

double CovarianceSequence::min_toeplitz_eigenvalue(int m) const {
  if (m < 1) throw std::invalid_argument("order must be >= 1");
  Eigen::VectorXd row(m);
  for (int j = 0; j < m; ++j) row[j] = at(j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      toeplitz_from_first_row(row), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void PrivacyBudget::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  if (!(delta_log > 0.0)) throw std::invalid_argument("delta_log must be > 0");
}

const char* to_string(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::NI: return "ni";
    case MechanismKind::SI_COV: return "si-cov";
    case MechanismKind::SI_POINT: return "si-point";
    case MechanismKind::SI_GLOBAL: return "si-global";
  }
  return "?";
}

void SmoothnessClass::validate() const {
  if (!(s > 0.5)) throw std::invalid_argument("smoothness s must be > 1/2");
  if (!(L > 0.0)) throw std::invalid_argument("L must be > 0");
  if ((kind == Kind::Hoelder) != L0.has_value())
    throw std::invalid_argument("L0 must be present exactly for Hoelder");
  if (L0 && !(*L0 > 0.0)) throw std::invalid_argument("L0 must be > 0");
}

double spectral_from_cov(const CovarianceSequence& covs, double omega) {
  double acc = covs.values[0];
  for (int j = 1; j < covs.values.size(); ++j)
    acc += 2.0 * covs.values[j] * std::cos(j * omega);
  return acc / (2.0 * M_PI);
}

double cov_from_spectral(const std::function<double(double)>& f, int j,
                         int quadrature_points) {
  if (j < 0) throw std::invalid_argument("lag must be >= 0");
  if (quadrature_points < 64 || quadrature_points % 2 != 0)
    throw std::invalid_argument("quadrature_points must be even and >= 64");
  const double h = 2.0 * M_PI / quadrature_points;
  double acc = 0.0;
  for (int q = 0; q < quadrature_points; ++q) {
    const double omega = -M_PI + q * h;
    const double value = f(omega);
    if (!std::isfinite(value))
      throw std::runtime_error("density evaluated to a non-finite value");
    acc += value * std::cos(j * omega);
  }
  return acc * h;
}

TruncationSchedule truncation_schedule(int n, const PrivacyBudget& budget,
                                       MechanismKind kind,
                                       std::optional<int> K) {
  budget.validate();
  if (n < 2) throw std::invalid_argument("sample size must be >= 2");
  const double lg = std::pow(std::log(static_cast<double>(n)),
                             1.0 + budget.delta_log);
  TruncationSchedule sched{};
  sched.kind = kind;
  switch (kind) {
    case MechanismKind::NI:
      sched.tau = std::sqrt(56.0 * lg);
      sched.tau_tilde = sched.tau;
      break;
    case MechanismKind::SI_COV:
    case MechanismKind::SI_GLOBAL:
      sched.tau = std::sqrt(8.0 * lg);
      sched.tau_tilde = 16.0 * lg * sched.tau * sched.tau;
      break;
    case MechanismKind::SI_POINT: {
      if (!K || *K < 1)
        throw std::invalid_argument("SI_POINT schedule needs K >= 1");
      sched.tau = std::sqrt(8.0 * lg);
      sched.tau_tilde =
          std::sqrt(1024.0 * std::pow(sched.tau, 6.0) * (*K + 1));
      break;
    }
  }
  return sched;
}

int bandwidth(int n, const PrivacyBudget& budget, double s,
              const TruncationSchedule& sched, BandwidthTask task) {
  budget.validate();
  if (n < 2) throw std::invalid_argument("sample size must be >= 2");
  if (!(s > 0.5)) throw std::invalid_argument("smoothness s must be > 1/2");
  const double nd = static_cast<double>(n);
  const double a = budget.alpha;
  double raw = 1.0;
  switch (task) {
    case BandwidthTask::NI_GLOBAL:
    case BandwidthTask::NI_POINT_HOELDER:
      raw = std::pow(std::min(nd, nd * std::pow(a, 4) / std::pow(sched.tau, 4)),
                     1.0 / (2.0 * s + 1.0));
      break;
    case BandwidthTask::NI_POINT_SOBOLEV:
      raw = std::pow(std::min(nd, nd * std::pow(a, 4) / std::pow(sched.tau, 4)),
                     1.0 / (2.0 * s));
      break;
    case BandwidthTask::SI_POINT_HOELDER:
      raw = std::pow(std::min(nd, nd * a * a / std::pow(sched.tau, 6)),
                     1.0 / (2.0 * s + 1.0));
      break;
    case BandwidthTask::SI_POINT_SOBOLEV:
      raw = std::pow(std::min(nd, nd * a * a / std::pow(sched.tau, 6)),
                     1.0 / (2.0 * s));
      break;
    case BandwidthTask::SI_GLOBAL:
      raw = std::min(
          std::pow(nd * a * a / (sched.tau_tilde * sched.tau_tilde),
                   1.0 / (2.0 * s + 2.0)),
          std::pow(nd, 1.0 / (2.0 * s + 1.0)));
      break;
  }
  const auto rounded = static_cast<long long>(std::ceil(raw));
  long long clamped = rounded < 1 ? 1 : rounded;
  if (clamped > n - 1) clamped = n - 1;
  return static_cast<int>(clamped);
}

}  // namespace ldps::model
