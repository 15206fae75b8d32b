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

#include "ldps/estim.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace ldps::estim {

namespace {

void require_close(double got, double want, const char* what) {
  const double scale = std::max({std::fabs(got), std::fabs(want), 1.0});
  if (std::fabs(got - want) > 1e-9 * scale)
    throw std::invalid_argument(std::string("transcript metadata mismatch: ") +
                                what);
}

void require_kind(const Transcript& t, model::MechanismKind kind) {
  if (t.kind != kind)
    throw std::invalid_argument("transcript built by a different mechanism");
}

}  // namespace

double SpectralEstimate::operator()(double omega) const {
  double acc = coeffs[0];
  const int top = std::min<int>(order, static_cast<int>(coeffs.size()) - 1);
  for (int k = 1; k <= top; ++k) acc += 2.0 * coeffs[k] * std::cos(k * omega);
  return acc / (2.0 * M_PI);
}

double ToeplitzEstimate::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      model::toeplitz_from_first_row(first_row), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double est_cov_ni(const Transcript& t, int j, const TruncationSchedule& sched,
                  double alpha, bool renormalize) {
  require_kind(t, model::MechanismKind::NI);
  require_close(t.tau, sched.tau, "tau");
  require_close(t.alpha, alpha, "alpha");
  const int n = t.n;
  const int lag = std::abs(j);
  if (lag >= n) throw std::invalid_argument("lag must satisfy |j| < n");
  double acc = 0.0;
  for (int i = 0; i + lag < n; ++i) acc += t.z[i] * t.z[i + lag];
  double est = acc / n;
  if (lag == 0) est -= 8.0 * sched.tau * sched.tau / (alpha * alpha);
  if (renormalize) est *= static_cast<double>(n) / (n - lag);
  return est;
}

double est_sdf_ni(const Transcript& t, int m, const TruncationSchedule& sched,
                  double alpha, double omega) {
  if (m < 0 || m >= t.n) throw std::invalid_argument("order m must be in [0, n)");
  double acc = est_cov_ni(t, 0, sched, alpha);
  for (int j = 1; j <= m; ++j)
    acc += 2.0 * est_cov_ni(t, j, sched, alpha) * std::cos(j * omega);
  return acc / (2.0 * M_PI);
}

double est_cov_si(const Transcript& t, int j) {
  require_kind(t, model::MechanismKind::SI_COV);
  if (t.j != j) throw std::invalid_argument("transcript was built for a different lag");
  return t.aux.mean();
}

double est_sdf_point_si(const Transcript& t, int K) {
  require_kind(t, model::MechanismKind::SI_POINT);
  if (t.K != K) throw std::invalid_argument("transcript was built for a different K");
  return t.aux.mean() / (2.0 * M_PI);
}

Eigen::VectorXd est_cov_vector_global(const Transcript& t, int K) {
  require_kind(t, model::MechanismKind::SI_GLOBAL);
  if (t.K != K) throw std::invalid_argument("transcript was built for a different K");
  return t.aux_matrix.colwise().mean();
}

GlobalDensityEstimate est_sdf_global(const Eigen::VectorXd& coeffs,
                                     const Eigen::VectorXd& omega_grid) {
  if (coeffs.size() < 1) throw std::invalid_argument("empty coefficient vector");
  GlobalDensityEstimate out;
  out.estimate.coeffs = coeffs;
  out.estimate.order = static_cast<int>(coeffs.size()) - 1;
  out.grid_values.resize(omega_grid.size());
  for (int q = 0; q < omega_grid.size(); ++q)
    out.grid_values[q] = out.estimate(omega_grid[q]);
  return out;
}

ToeplitzEstimate est_cov_matrix_psd(const SpectralEstimate& est, int n,
                                    int quadrature_points) {
  if (n < 1) throw std::invalid_argument("matrix order must be >= 1");
  if (quadrature_points < std::max(4 * est.order, 2 * n))
    throw std::invalid_argument("quadrature_points must be >= max(4K, 2n)");
  const int q_count = quadrature_points;
  const double h = 2.0 * M_PI / q_count;
  Eigen::VectorXd positive_part(q_count);
  Eigen::VectorXd nodes(q_count);
  for (int q = 0; q < q_count; ++q) {
    nodes[q] = -M_PI + q * h;
    const double value = est(nodes[q]);
    if (!std::isfinite(value))
      throw std::runtime_error("density estimate is non-finite on the grid");
    positive_part[q] = std::max(value, 0.0);
  }
  ToeplitzEstimate out;
  out.first_row.resize(n);
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int q = 0; q < q_count; ++q)
      acc += positive_part[q] * std::cos(j * nodes[q]);
    out.first_row[j] = acc * h;
  }
  return out;
}

double baseline_cov(const Eigen::VectorXd& path, int j) {
  const int n = static_cast<int>(path.size());
  const int lag = std::abs(j);
  if (lag >= n) throw std::invalid_argument("lag must satisfy |j| < n");
  double acc = 0.0;
  for (int k = 0; k + lag < n; ++k) acc += path[k] * path[k + lag];
  return acc / n;
}

double baseline_sdf(const Eigen::VectorXd& path, double omega, int K) {
  if (K < 0 || K >= path.size())
    throw std::invalid_argument("order K must be in [0, n)");
  double acc = baseline_cov(path, 0);
  for (int j = 1; j <= K; ++j)
    acc += 2.0 * baseline_cov(path, j) * std::cos(j * omega);
  return acc / (2.0 * M_PI);
}

}  // namespace ldps::estim
