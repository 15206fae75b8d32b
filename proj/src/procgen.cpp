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

#include "ldps/procgen.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace ldps::procgen {

ProcessSpec ProcessSpec::ar1(double phi, double marginal_variance,
                             int max_lag) {
  ProcessSpec spec;
  spec.kind = Kind::AR1;
  spec.phi = phi;
  spec.marginal_variance = marginal_variance;
  spec.max_lag = max_lag;
  return spec;
}

ProcessSpec ProcessSpec::closed_form_density(double scale, double power,
                                             double offset, int max_lag) {
  ProcessSpec spec;
  spec.kind = Kind::ClosedFormDensity;
  spec.scale = scale;
  spec.power = power;
  spec.offset = offset;
  spec.max_lag = max_lag;
  return spec;
}

ProcessSpec ProcessSpec::poly_cov(double scale, double exponent, int max_lag) {
  ProcessSpec spec;
  spec.kind = Kind::PolyCov;
  spec.scale = scale;
  spec.exponent = exponent;
  spec.max_lag = max_lag;
  return spec;
}

ProcessSpec ProcessSpec::explicit_cov(model::CovarianceSequence covs) {
  ProcessSpec spec;
  spec.kind = Kind::ExplicitCov;
  spec.max_lag = covs.max_lag();
  spec.explicit_covs = std::move(covs);
  return spec;
}

ProcessSpec ProcessSpec::example(int id, int max_lag) {
  switch (id) {
    case 1: return ar1(0.8, 1.44, max_lag);
    case 2: return closed_form_density(1.27, 0.8, 0.45, max_lag);
    case 3: return poly_cov(1.44, 5.1, max_lag);
    default: throw std::invalid_argument("example id must be 1, 2, or 3");
  }
}

double ProcessSpec::density(double omega) const {
  if (kind != Kind::ClosedFormDensity)
    throw std::logic_error("density() is defined for ClosedFormDensity only");
  return scale * (std::pow(std::fabs(std::cos(omega)), power) + offset);
}

void ProcessSpec::validate() const {
  switch (kind) {
    case Kind::AR1:
      if (!(std::fabs(phi) < 1.0))
        throw std::invalid_argument("AR1 requires |phi| < 1");
      if (!(marginal_variance >= 0.0))
        throw std::invalid_argument("AR1 marginal variance must be >= 0");
      break;
    case Kind::PolyCov:
      if (!(exponent > 1.0))
        throw std::invalid_argument("PolyCov exponent must be > 1");
      break;
    case Kind::ClosedFormDensity:
      if (!(scale > 0.0) || !(offset >= 0.0))
        throw std::invalid_argument("ClosedFormDensity needs scale > 0, offset >= 0");
      break;
    case Kind::ExplicitCov:
      explicit_covs.validate();
      break;
  }
  if (kind != Kind::ExplicitCov && max_lag < 0)
    throw std::invalid_argument("max_lag must be >= 0");
}

namespace {

constexpr int kDensityQuadratureNodes = 1 << 14;

// Closed-form-density covariances are quadrature integrals; memoize them
// since the harness asks for the same sequence once per replication set.
model::CovarianceSequence closed_form_covs(const ProcessSpec& spec) {
  using Key = std::tuple<double, double, double, int>;
  static std::map<Key, model::CovarianceSequence> cache;
  static std::mutex mutex;
  const Key key{spec.scale, spec.power, spec.offset, spec.max_lag};
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  Eigen::VectorXd values(spec.max_lag + 1);
  const auto f = [&spec](double w) { return spec.density(w); };
  for (int j = 0; j <= spec.max_lag; ++j)
    values[j] = model::cov_from_spectral(f, j, kDensityQuadratureNodes);
  model::CovarianceSequence covs(std::move(values));
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(key, std::move(covs)).first->second;
}

}  // namespace

model::CovarianceSequence covs_of(const ProcessSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case ProcessSpec::Kind::AR1: {
      Eigen::VectorXd values(spec.max_lag + 1);
      for (int j = 0; j <= spec.max_lag; ++j)
        values[j] = spec.marginal_variance * std::pow(spec.phi, j);
      return model::CovarianceSequence(std::move(values));
    }
    case ProcessSpec::Kind::ClosedFormDensity:
      return closed_form_covs(spec);
    case ProcessSpec::Kind::PolyCov: {
      Eigen::VectorXd values(spec.max_lag + 1);
      for (int j = 0; j <= spec.max_lag; ++j)
        values[j] = spec.scale * std::pow(1.0 + j, -spec.exponent);
      return model::CovarianceSequence(std::move(values));
    }
    case ProcessSpec::Kind::ExplicitCov:
      return spec.explicit_covs;
  }
  throw std::logic_error("unreachable");
}

namespace {

int next_pow2(int x) {
  int m = 1;
  while (m < x) m *= 2;
  return m;
}

}  // namespace

StationarySampler::StationarySampler(const model::CovarianceSequence& covs,
                                     int n, SamplingMethod method)
    : n_(n), resolved_(method) {
  covs.validate();
  if (n < 1) throw std::invalid_argument("path length must be >= 1");

  if (method != SamplingMethod::DenseCholesky) {
    m_ = next_pow2(std::max(2 * (n - 1), 2));
    std::vector<std::complex<double>> base(m_);
    for (int k = 0; k < m_; ++k)
      base[k] = covs.at(std::min(k, m_ - k));
    std::vector<std::complex<double>> freq(m_);
    Eigen::FFT<double> fft;
    fft.fwd(freq, base);
    Eigen::VectorXd eig(m_);
    for (int k = 0; k < m_; ++k) eig[k] = freq[k].real();
    const double max_eig = eig.maxCoeff();
    const double min_eig = eig.minCoeff();
    if (max_eig > 0.0 && min_eig >= -1e-8 * max_eig) {
      sqrt_eig_ = eig.cwiseMax(0.0).cwiseSqrt();
      resolved_ = SamplingMethod::CirculantEmbedding;
      return;
    }
    if (method == SamplingMethod::CirculantEmbedding)
      throw std::runtime_error(
          "circulant embedding is indefinite for this covariance sequence");
  }

  // Dense route: Cholesky of the order-n Toeplitz matrix, one retry with
  // diagonal jitter 1e-10 sigma_0.
  Eigen::VectorXd row(n);
  for (int j = 0; j < n; ++j) row[j] = covs.at(j);
  Eigen::MatrixXd sigma = model::toeplitz_from_first_row(row);
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) {
    sigma.diagonal().array() += 1e-10 * covs.values[0];
    llt.compute(sigma);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error(
          "covariance sequence is not positive semidefinite at this order");
  }
  chol_ = llt.matrixL();
  resolved_ = SamplingMethod::DenseCholesky;
}

Eigen::VectorXd StationarySampler::draw(SeededRng& rng) const {
  if (resolved_ == SamplingMethod::DenseCholesky) {
    Eigen::VectorXd g(n_);
    for (int i = 0; i < n_; ++i) g[i] = rng.normal();
    return chol_ * g;
  }

  // Frequency-domain draw: w_k = sqrt(lambda_k) xi_k with conjugate-symmetric
  // complex normals, then the real part of the inverse transform scaled by
  // sqrt(m) has the target Toeplitz covariance on its first n coordinates.
  const int half = m_ / 2;
  std::vector<std::complex<double>> w(m_);
  w[0] = sqrt_eig_[0] * rng.normal();
  w[half] = sqrt_eig_[half] * rng.normal();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int k = 1; k < half; ++k) {
    const double re = rng.normal() * inv_sqrt2;
    const double im = rng.normal() * inv_sqrt2;
    w[k] = sqrt_eig_[k] * std::complex<double>(re, im);
    w[m_ - k] = std::conj(w[k]);
  }
  std::vector<std::complex<double>> time(m_);
  Eigen::FFT<double> fft;
  fft.inv(time, w);
  const double scale = std::sqrt(static_cast<double>(m_));
  Eigen::VectorXd path(n_);
  for (int t = 0; t < n_; ++t) path[t] = time[t].real() * scale;
  return path;
}

Eigen::VectorXd sample_path(const model::CovarianceSequence& covs, int n,
                            SeededRng& rng, SamplingMethod method) {
  return StationarySampler(covs, n, method).draw(rng);
}

}  // namespace ldps::procgen
