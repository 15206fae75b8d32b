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

#include "ldps/mech.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ldps::mech {

double trim(double x, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("trim level must be > 0");
  return std::min(std::max(x, -tau), tau);
}

double laplace_sample(double scale, SeededRng& rng) {
  return rng.laplace(scale);
}

double vdp_weight(int k, int K) {
  if (K < 1) throw std::invalid_argument("vdp_weight: K must be >= 1");
  const int a = std::abs(k);
  if (a > K) throw std::invalid_argument("vdp_weight: |k| must be <= K");
  if (2 * a <= K) return 1.0;
  return 2.0 * (1.0 - static_cast<double>(a) / K);
}

namespace {

double scale_or(const std::optional<double>& hook, double fallback) {
  return hook ? *hook : fallback;
}

// Laplace draw that tolerates a zero scale (noiseless test hook).
double lap(SeededRng& rng, double scale) {
  if (scale == 0.0) {
    rng.uniform();  // keep consumption fixed
    return 0.0;
  }
  return rng.laplace(scale);
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
}

}  // namespace

Transcript privatize_ni(const Eigen::VectorXd& path,
                        const TruncationSchedule& sched, double alpha,
                        SeededRng& rng, const NoiseHook& hook) {
  check_alpha(alpha);
  const int n = static_cast<int>(path.size());
  const double b = scale_or(hook.z_scale, 2.0 * sched.tau / alpha);
  Transcript t;
  t.kind = MechanismKind::NI;
  t.n = n;
  t.alpha = alpha;
  t.tau = sched.tau;
  t.tau_tilde = sched.tau_tilde;
  t.z.resize(n);
  for (int i = 0; i < n; ++i)
    t.z[i] = trim(path[i], sched.tau) + lap(rng, b);
  return t;
}

Transcript privatize_si_cov(const Eigen::VectorXd& path, int j,
                            const TruncationSchedule& sched, double alpha,
                            SeededRng& rng, const NoiseHook& hook) {
  check_alpha(alpha);
  const int n = static_cast<int>(path.size());
  if (j < 0 || j >= n) throw std::invalid_argument("lag j must be in [0, n)");
  Transcript t;
  t.kind = MechanismKind::SI_COV;
  t.n = n;
  t.alpha = alpha;
  t.tau = sched.tau;
  t.tau_tilde = sched.tau_tilde;
  t.j = j;

  if (j == 0) {
    const double b = scale_or(hook.aux_scale, 2.0 * sched.tau / alpha);
    t.aux.resize(n);
    for (int i = 0; i < n; ++i)
      t.aux[i] = trim(path[i] * path[i], sched.tau) + lap(rng, b);
    return t;
  }

  const double bz = scale_or(hook.z_scale, 4.0 * sched.tau / alpha);
  const double ba = scale_or(hook.aux_scale, 4.0 * sched.tau_tilde / alpha);
  t.z.resize(n);
  t.aux.resize(n - j);
  for (int i = 0; i < n; ++i) {
    t.z[i] = trim(path[i], sched.tau) + lap(rng, bz);
    const double xi = lap(rng, ba);
    if (i >= j)
      t.aux[i - j] = trim(path[i] * t.z[i - j], sched.tau_tilde) + xi;
  }
  return t;
}

Transcript privatize_si_point(const Eigen::VectorXd& path, double omega,
                              int K, const TruncationSchedule& sched,
                              double alpha, SeededRng& rng,
                              const NoiseHook& hook) {
  check_alpha(alpha);
  const int n = static_cast<int>(path.size());
  if (K < 1 || K >= n) throw std::invalid_argument("K must be in [1, n)");
  Transcript t;
  t.kind = MechanismKind::SI_POINT;
  t.n = n;
  t.alpha = alpha;
  t.tau = sched.tau;
  t.tau_tilde = sched.tau_tilde;
  t.omega = omega;
  t.K = K;

  std::vector<double> taper_cos(K + 1, 0.0);
  for (int k = 1; k <= K; ++k)
    taper_cos[k] = vdp_weight(k, K) * std::cos(omega * k);

  const double bz = scale_or(hook.z_scale, 4.0 * sched.tau / alpha);
  const double ba = scale_or(hook.aux_scale, 4.0 * sched.tau_tilde / alpha);
  t.z.resize(n);
  t.aux.resize(n - K);
  for (int i = 0; i < n; ++i) {
    t.z[i] = trim(path[i], sched.tau) + lap(rng, bz);
    const double xi = lap(rng, ba);
    if (i >= K) {
      double v = path[i] * path[i];
      for (int k = 1; k <= K; ++k)
        v += 2.0 * taper_cos[k] * path[i] * t.z[i - k];
      t.aux[i - K] = trim(v, sched.tau_tilde) + xi;
    }
  }
  return t;
}

HypercubeParams HypercubeParams::make(int K, double tau_tilde, double alpha) {
  if (K < 2) throw std::invalid_argument("hypercube requires K >= 2");
  if (!(tau_tilde > 0.0)) throw std::invalid_argument("tau_tilde must be > 0");
  check_alpha(alpha);
  HypercubeParams p;
  p.K = K;
  p.tau_tilde = tau_tilde;
  p.alpha = alpha;
  const double ea = std::exp(alpha);
  p.pi_alpha = ea / (ea + 1.0);
  // 1/C_K is the per-coordinate mean of a hemisphere of sign vectors:
  //   K+1 odd:  2^{-K} binom(K, K/2)
  //   K+1 even: (K-1)! (K-1) / (2^K ((K+1)/2 - 1)! ((K+1)/2)!)
  double log_inv_ck;
  if ((K + 1) % 2 == 1) {
    log_inv_ck = std::lgamma(K + 1.0) - 2.0 * std::lgamma(K / 2 + 1.0) -
                 K * std::log(2.0);
  } else {
    const double h = (K + 1.0) / 2.0;
    log_inv_ck = std::lgamma(static_cast<double>(K)) + std::log(K - 1.0) -
                 K * std::log(2.0) - std::lgamma(h) - std::lgamma(h + 1.0);
  }
  p.C_K = std::exp(-log_inv_ck);
  p.B = tau_tilde * (ea + 1.0) / (ea - 1.0) * p.C_K;
  return p;
}

namespace {

// Hemisphere membership with the coordinate-0 tie rule, in exact integer
// arithmetic over sign patterns.
inline bool in_positive_hemisphere(const std::vector<int>& z,
                                   const std::vector<int>& y) {
  int s = 0;
  for (size_t i = 0; i < z.size(); ++i) s += z[i] * y[i];
  if (s > 0) return true;
  return s == 0 && z[0] == y[0];
}

}  // namespace

Eigen::VectorXd hypercube_sample(const Eigen::VectorXd& w_tilde,
                                 const HypercubeParams& params,
                                 SeededRng& rng) {
  const int d = params.K + 1;
  if (w_tilde.size() != d)
    throw std::invalid_argument("w_tilde must have length K+1");
  if (w_tilde.lpNorm<Eigen::Infinity>() > params.tau_tilde * (1.0 + 1e-12))
    throw std::invalid_argument("w_tilde lies outside the l_inf ball");

  std::vector<int> y(d);
  for (int jj = 0; jj < d; ++jj) {
    const double p_plus = 0.5 + w_tilde[jj] / (2.0 * params.tau_tilde);
    y[jj] = rng.uniform() < p_plus ? 1 : -1;
  }
  const bool match = rng.bernoulli(params.pi_alpha);

  std::vector<int> z(d);
  for (;;) {
    for (int jj = 0; jj < d; ++jj) z[jj] = rng.uniform() < 0.5 ? 1 : -1;
    if (in_positive_hemisphere(z, y) == match) break;
  }

  Eigen::VectorXd out(d);
  for (int jj = 0; jj < d; ++jj) out[jj] = params.B * z[jj];
  if (d % 2 == 0)
    out[0] *= (params.K - 1.0) / (2.0 * params.K);
  return out;
}

Eigen::VectorXd hypercube_conditional_pmf(const Eigen::VectorXd& w_tilde,
                                          const HypercubeParams& params) {
  const int d = params.K + 1;
  if (d > 16) throw std::invalid_argument("pmf enumeration limited to K+1 <= 16");
  if (w_tilde.size() != d)
    throw std::invalid_argument("w_tilde must have length K+1");
  const std::uint32_t count = 1u << d;
  const double hemi_mass = std::ldexp(1.0, -params.K);  // 1 / 2^K

  std::vector<int> y(d), z(d);
  Eigen::VectorXd pmf = Eigen::VectorXd::Zero(count);
  for (std::uint32_t yb = 0; yb < count; ++yb) {
    double py = 1.0;
    for (int jj = 0; jj < d; ++jj) {
      y[jj] = (yb >> jj) & 1u ? 1 : -1;
      const double p_plus = 0.5 + w_tilde[jj] / (2.0 * params.tau_tilde);
      py *= y[jj] > 0 ? p_plus : 1.0 - p_plus;
    }
    if (py == 0.0) continue;
    for (std::uint32_t zb = 0; zb < count; ++zb) {
      for (int jj = 0; jj < d; ++jj) z[jj] = (zb >> jj) & 1u ? 1 : -1;
      const bool pos = in_positive_hemisphere(z, y);
      const double t_mass = pos ? params.pi_alpha : 1.0 - params.pi_alpha;
      pmf[zb] += py * t_mass * hemi_mass;
    }
  }
  return pmf;
}

Transcript privatize_si_global(const Eigen::VectorXd& path, int K,
                               const TruncationSchedule& sched, double alpha,
                               SeededRng& rng, const NoiseHook& hook) {
  check_alpha(alpha);
  const int n = static_cast<int>(path.size());
  if (K < 2 || K >= n) throw std::invalid_argument("K must be in [2, n)");
  if (hook.aux_scale && *hook.aux_scale != 0.0)
    throw std::invalid_argument(
        "si-global aux hook supports only the noiseless bypass (0)");
  const bool bypass = hook.aux_scale.has_value();

  const HypercubeParams params =
      bypass ? HypercubeParams{} : HypercubeParams::make(K, sched.tau_tilde, alpha / 2.0);

  Transcript t;
  t.kind = MechanismKind::SI_GLOBAL;
  t.n = n;
  t.alpha = alpha;
  t.tau = sched.tau;
  t.tau_tilde = sched.tau_tilde;
  t.K = K;
  t.z.resize(n);
  t.aux_matrix.resize(n - K, K + 1);

  const double bz = scale_or(hook.z_scale, 4.0 * sched.tau / alpha);
  Eigen::VectorXd w(K + 1);
  for (int i = 0; i < n; ++i) {
    t.z[i] = trim(path[i], sched.tau) + lap(rng, bz);
    if (i < K) continue;
    w[0] = trim(path[i] * path[i], sched.tau_tilde);
    for (int k = 1; k <= K; ++k)
      w[k] = trim(path[i] * t.z[i - k], sched.tau_tilde);
    if (bypass) {
      t.aux_matrix.row(i - K) = w;
    } else {
      SeededRng vertex_rng = rng.child(static_cast<std::uint64_t>(i) + 1);
      t.aux_matrix.row(i - K) = hypercube_sample(w, params, vertex_rng);
    }
  }
  return t;
}

namespace {

// Symmetric grid over [-hi, hi] containing 0, +-hi/2 and +-hi exactly
// (the half-count is a power of two so the extremal quotients are exact).
std::vector<double> symmetric_grid(double hi, int points) {
  int half = 2;
  while (half < points / 2) half *= 2;
  std::vector<double> grid;
  grid.reserve(2 * half + 1);
  for (int q = -half; q <= half; ++q)
    grid.push_back(hi * static_cast<double>(q) / half);
  return grid;
}

}  // namespace

RatioReport ldp_ratio_check(MechanismKind kind, const RatioCheckConfig& config,
                            int grid_size) {
  check_alpha(config.alpha);
  if (grid_size < 8) throw std::invalid_argument("grid_size must be >= 8");
  const double a = config.alpha;
  const double tau = config.tau;
  const double tt = config.tau_tilde;
  RatioReport report;

  switch (kind) {
    case MechanismKind::NI: {
      // exponent a |trim(x) - trim(x')| / (2 tau), extremes at x = +-tau
      const auto grid = symmetric_grid(2.0 * tau, grid_size);
      double d = 0.0;
      for (double x : grid)
        for (double xp : grid)
          d = std::max(d, std::fabs(trim(x, tau) - trim(xp, tau)));
      report.max_ratio = std::exp(a * d / (2.0 * tau));
      report.budget = a;
      break;
    }
    case MechanismKind::SI_COV: {
      if (config.j == 0) {
        // Single channel at scale 2 tau / a; trim(x^2, tau) has range
        // [0, tau], so the grid must reach |x| >= sqrt(tau).
        const auto grid =
            symmetric_grid(2.0 * std::max(tau, std::sqrt(tau)), grid_size);
        double d = 0.0;
        for (double x : grid)
          for (double xp : grid)
            d = std::max(d, std::fabs(trim(x * x, tau) - trim(xp * xp, tau)));
        report.max_ratio = std::exp(a * d / (2.0 * tau));
        report.budget = a / 2.0;
        break;
      }
      // Joint exponent a |dx| / (4 tau) + a |dw| / (4 tau_tilde) with
      // w = trim(x z_prev, tau_tilde); saturating z_prev = 2 tau_tilde/tau
      // attains both halves at x = -x' = tau.
      const auto xs = symmetric_grid(2.0 * tau, grid_size);
      const auto zs = symmetric_grid(2.0 * tt / tau, grid_size);
      double best = 0.0;
      for (double x : xs)
        for (double xp : xs) {
          const double dx = std::fabs(trim(x, tau) - trim(xp, tau));
          for (double zprev : zs) {
            const double dw = std::fabs(trim(x * zprev, tt) - trim(xp * zprev, tt));
            best = std::max(best, a * (dx / (4.0 * tau) + dw / (4.0 * tt)));
          }
        }
      report.max_ratio = std::exp(best);
      report.budget = a;
      break;
    }
    case MechanismKind::SI_POINT: {
      // v(x) = x^2 + x s with s the tapered cosine sum of past outputs;
      // s is unbounded, so the grid carries a saturating value.
      const auto xs = symmetric_grid(2.0 * tau, grid_size);
      const double s_hi = 2.0 * (tt / tau + tau) + 1.0;
      const auto ss = symmetric_grid(s_hi, grid_size);
      double best = 0.0;
      for (double x : xs)
        for (double xp : xs) {
          const double dx = std::fabs(trim(x, tau) - trim(xp, tau));
          for (double s : ss) {
            const double dv =
                std::fabs(trim(x * x + x * s, tt) - trim(xp * xp + xp * s, tt));
            best = std::max(best, a * (dx / (4.0 * tau) + dv / (4.0 * tt)));
          }
        }
      report.max_ratio = std::exp(best);
      report.budget = a;
      break;
    }
    case MechanismKind::SI_GLOBAL: {
      // Vertex channel at budget a/2, enumerated exactly. The pmf is
      // multilinear in w, so the ratio supremum is attained at ball
      // vertices; all vertex pairs are scanned for K <= 4, a sampled
      // subset plus the antipodal pair otherwise.
      if (config.K > 10)
        throw std::invalid_argument("hypercube enumeration limited to K <= 10");
      const auto params = HypercubeParams::make(config.K, tt, a / 2.0);
      const int d = config.K + 1;
      std::vector<Eigen::VectorXd> inputs;
      if (config.K <= 4) {
        for (std::uint32_t b = 0; b < (1u << d); ++b) {
          Eigen::VectorXd w(d);
          for (int jj = 0; jj < d; ++jj) w[jj] = (b >> jj) & 1u ? tt : -tt;
          inputs.push_back(w);
        }
      } else {
        inputs.push_back(Eigen::VectorXd::Constant(d, tt));
        inputs.push_back(Eigen::VectorXd::Constant(d, -tt));
        SeededRng probe(0xd1cef00dULL, 7);
        for (int r = 0; r < grid_size; ++r) {
          Eigen::VectorXd w(d);
          for (int jj = 0; jj < d; ++jj)
            w[jj] = tt * (2.0 * probe.uniform() - 1.0);
          inputs.push_back(w);
        }
      }
      std::vector<Eigen::VectorXd> pmfs;
      pmfs.reserve(inputs.size());
      for (const auto& w : inputs)
        pmfs.push_back(hypercube_conditional_pmf(w, params));
      double best = 0.0;
      for (size_t u = 0; u < pmfs.size(); ++u)
        for (size_t v = 0; v < pmfs.size(); ++v)
          for (int b = 0; b < pmfs[u].size(); ++b)
            if (pmfs[v][b] > 0.0)
              best = std::max(best, pmfs[u][b] / pmfs[v][b]);
      report.max_ratio = best;
      report.budget = a / 2.0;
      break;
    }
  }
  report.pass = report.max_ratio <= std::exp(report.budget) * (1.0 + 1e-9);
  return report;
}

}  // namespace ldps::mech
