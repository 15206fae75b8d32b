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

#include "ldps/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "ldps/csv.hpp"

namespace ldps::bench {

using model::MechanismKind;
using model::PrivacyBudget;
using model::TruncationSchedule;

std::string Task::label() const {
  switch (kind) {
    case TaskKind::Cov0: return "cov0";
    case TaskKind::CovJ: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "cov_j(%d)", j);
      return buf;
    }
    case TaskKind::SdfPoint: {
      char buf[48];
      std::snprintf(buf, sizeof(buf), "sdf_point(%.6g)", omega);
      return buf;
    }
    case TaskKind::SdfGlobal: return "sdf_global";
  }
  return "?";
}

const char* to_string(MechChoice mech) {
  switch (mech) {
    case MechChoice::NI: return "ni";
    case MechChoice::SI: return "si";
    case MechChoice::NonPrivate: return "nonprivate";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  if (!process && (example < 1 || example > 3))
    throw std::invalid_argument("example must be 1, 2, or 3");
  if (process) process->validate();
  if (n < 2) throw std::invalid_argument("n must be >= 2");
  if (replications < 1) throw std::invalid_argument("replications must be >= 1");
  if (alphas.empty()) throw std::invalid_argument("alphas must be nonempty");
  for (size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0)) throw std::invalid_argument("alphas must be > 0");
    if (i > 0 && !(alphas[i] > alphas[i - 1]))
      throw std::invalid_argument("alphas must be strictly ascending");
  }
  if (tasks.empty()) throw std::invalid_argument("tasks must be nonempty");
  for (const auto& task : tasks) {
    if (task.kind == TaskKind::CovJ && (task.j < 0 || task.j >= n))
      throw std::invalid_argument("task lag j must be in [0, n)");
  }
  if (mechanisms.empty())
    throw std::invalid_argument("mechanisms must be nonempty");
  if (!(s > 0.5)) throw std::invalid_argument("s must be > 1/2");
  if (!(delta_log > 0.0)) throw std::invalid_argument("delta_log must be > 0");
  if (tau_override && !(*tau_override > 0.0))
    throw std::invalid_argument("tau_override must be > 0");
  if (tau_tilde_override && !(*tau_tilde_override > 0.0))
    throw std::invalid_argument("tau_tilde_override must be > 0");
}

namespace {

using nlohmann::json;

Task parse_task(const std::string& name, const json& j) {
  Task task;
  if (name == "cov0") {
    task.kind = TaskKind::Cov0;
  } else if (name == "cov_j") {
    task.kind = TaskKind::CovJ;
    if (!j.contains("j"))
      throw std::invalid_argument("task cov_j needs a top-level \"j\" key");
    task.j = j.at("j").get<int>();
  } else if (name == "sdf_point") {
    task.kind = TaskKind::SdfPoint;
    if (!j.contains("omega"))
      throw std::invalid_argument("task sdf_point needs a top-level \"omega\" key");
    task.omega = j.at("omega").get<double>();
  } else if (name == "sdf_global") {
    task.kind = TaskKind::SdfGlobal;
  } else {
    throw std::invalid_argument("unknown task: " + name);
  }
  return task;
}

MechChoice parse_mech(const std::string& name) {
  if (name == "ni") return MechChoice::NI;
  if (name == "si") return MechChoice::SI;
  if (name == "nonprivate") return MechChoice::NonPrivate;
  throw std::invalid_argument("unknown mechanism: " + name);
}

procgen::ProcessSpec parse_process(const json& j, int default_max_lag) {
  const std::string kind = j.at("kind").get<std::string>();
  const int max_lag = j.value("max_lag", default_max_lag);
  if (kind == "ar1")
    return procgen::ProcessSpec::ar1(j.at("phi").get<double>(),
                                     j.at("marginal_variance").get<double>(),
                                     max_lag);
  if (kind == "density")
    return procgen::ProcessSpec::closed_form_density(
        j.at("scale").get<double>(), j.at("power").get<double>(),
        j.at("offset").get<double>(), max_lag);
  if (kind == "polycov")
    return procgen::ProcessSpec::poly_cov(j.at("scale").get<double>(),
                                          j.at("exponent").get<double>(),
                                          max_lag);
  if (kind == "explicit") {
    const auto values = j.at("values").get<std::vector<double>>();
    Eigen::VectorXd v =
        Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
    return procgen::ProcessSpec::explicit_cov(model::CovarianceSequence(v));
  }
  throw std::invalid_argument("unknown process kind: " + kind);
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  cfg.n = j.at("n").get<int>();
  if (j.contains("process"))
    cfg.process = parse_process(j.at("process"), cfg.n - 1);
  else
    cfg.example = j.at("example").get<int>();
  cfg.replications = j.at("replications").get<int>();
  cfg.alphas = j.at("alphas").get<std::vector<double>>();
  for (const auto& name : j.at("tasks"))
    cfg.tasks.push_back(parse_task(name.get<std::string>(), j));
  for (const auto& name : j.at("mechanisms"))
    cfg.mechanisms.push_back(parse_mech(name.get<std::string>()));
  cfg.s = j.value("s", 3.0);
  cfg.delta_log = j.value("delta_log", 0.001);
  if (j.contains("tau_override") && !j.at("tau_override").is_null())
    cfg.tau_override = j.at("tau_override").get<double>();
  if (j.contains("tau_tilde_override") && !j.at("tau_tilde_override").is_null())
    cfg.tau_tilde_override = j.at("tau_tilde_override").get<double>();
  cfg.seed = j.value("seed", std::uint64_t{0});
  const std::string norm = j.value("density_normalization", std::string("eq1"));
  if (norm == "eq1") cfg.normalization = DensityNormalization::Eq1;
  else if (norm == "no2pi") cfg.normalization = DensityNormalization::No2Pi;
  else throw std::invalid_argument("density_normalization must be eq1 or no2pi");
  cfg.validate();
  return cfg;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config error: ") + e.what());
  }
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return from_json_text(ss.str());
}

namespace {

// Deterministic summation independent of accumulation threading.
double pairwise_sum(const double* data, size_t count) {
  if (count <= 8) {
    double acc = 0.0;
    for (size_t i = 0; i < count; ++i) acc += data[i];
    return acc;
  }
  const size_t half = count / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, count - half);
}

struct ResolvedModel {
  model::CovarianceSequence covs;
  double density_scale = 1.0;  // 2pi under No2Pi reporting
};

ResolvedModel resolve_model(const ExperimentConfig& cfg) {
  const procgen::ProcessSpec spec =
      cfg.process ? *cfg.process : procgen::ProcessSpec::example(cfg.example, cfg.n - 1);
  ResolvedModel out;
  out.covs = procgen::covs_of(spec);
  if (cfg.normalization == DensityNormalization::No2Pi) {
    out.density_scale = 2.0 * M_PI;
    // A closed-form density is then read as the 2pi-scaled object, so its
    // covariances shrink accordingly; covariance-specified processes are
    // untouched.
    if (spec.kind == procgen::ProcessSpec::Kind::ClosedFormDensity)
      out.covs.values /= 2.0 * M_PI;
  }
  return out;
}

double squared_l2_mass(const model::CovarianceSequence& covs) {
  double acc = covs.values[0] * covs.values[0];
  for (int k = 1; k < covs.values.size(); ++k)
    acc += 2.0 * covs.values[k] * covs.values[k];
  return acc / (2.0 * M_PI);
}

double truth_for(const ResolvedModel& m, const Task& task) {
  switch (task.kind) {
    case TaskKind::Cov0: return m.covs.at(0);
    case TaskKind::CovJ: return m.covs.at(task.j);
    case TaskKind::SdfPoint:
      return m.density_scale * model::spectral_from_cov(m.covs, task.omega);
    case TaskKind::SdfGlobal:
      return m.density_scale * m.density_scale * squared_l2_mass(m.covs);
  }
  throw std::logic_error("unreachable");
}

// Recompute the level pair from the operative tau when it is overridden,
// then let an explicit tau_tilde override win.
TruncationSchedule apply_overrides(const ExperimentConfig& cfg,
                                   TruncationSchedule sched, int n,
                                   const PrivacyBudget& budget,
                                   std::optional<int> K) {
  if (cfg.tau_override) {
    const double tau = *cfg.tau_override;
    const double lg =
        std::pow(std::log(static_cast<double>(n)), 1.0 + budget.delta_log);
    sched.tau = tau;
    switch (sched.kind) {
      case MechanismKind::NI: sched.tau_tilde = tau; break;
      case MechanismKind::SI_COV:
      case MechanismKind::SI_GLOBAL:
        sched.tau_tilde = 16.0 * lg * tau * tau;
        break;
      case MechanismKind::SI_POINT:
        sched.tau_tilde =
            std::sqrt(1024.0 * std::pow(tau, 6.0) * (K.value_or(1) + 1));
        break;
    }
  }
  if (cfg.tau_tilde_override) sched.tau_tilde = *cfg.tau_tilde_override;
  return sched;
}

// Everything one replication needs to turn a path into an estimate.
struct CellPlan {
  size_t alpha_index = 0;
  size_t task_index = 0;
  size_t mech_index = 0;
  double alpha = 0.0;
  Task task;
  MechChoice mech = MechChoice::NonPrivate;
  TruncationSchedule sched{};
  int bandwidth = 0;  // m, K, or nonprivate cutoff for density tasks
  double truth = 0.0;
};

CellPlan plan_cell(const ExperimentConfig& cfg, const ResolvedModel& m,
                   size_t ai, size_t ti, size_t mi) {
  CellPlan plan;
  plan.alpha_index = ai;
  plan.task_index = ti;
  plan.mech_index = mi;
  plan.alpha = cfg.alphas[ai];
  plan.task = cfg.tasks[ti];
  plan.mech = cfg.mechanisms[mi];
  plan.truth = truth_for(m, plan.task);
  const PrivacyBudget budget{plan.alpha, cfg.delta_log};
  const bool density_task = plan.task.kind == TaskKind::SdfPoint ||
                            plan.task.kind == TaskKind::SdfGlobal;

  switch (plan.mech) {
    case MechChoice::NonPrivate:
      if (density_task)
        plan.bandwidth = static_cast<int>(
            std::ceil(std::pow(cfg.n, 1.0 / (2.0 * cfg.s + 1.0))));
      break;
    case MechChoice::NI: {
      plan.sched = apply_overrides(
          cfg, model::truncation_schedule(cfg.n, budget, MechanismKind::NI),
          cfg.n, budget, std::nullopt);
      if (plan.task.kind == TaskKind::SdfPoint)
        plan.bandwidth = model::bandwidth(cfg.n, budget, cfg.s, plan.sched,
                                          model::BandwidthTask::NI_POINT_HOELDER);
      if (plan.task.kind == TaskKind::SdfGlobal)
        plan.bandwidth = model::bandwidth(cfg.n, budget, cfg.s, plan.sched,
                                          model::BandwidthTask::NI_GLOBAL);
      break;
    }
    case MechChoice::SI: {
      switch (plan.task.kind) {
        case TaskKind::Cov0:
        case TaskKind::CovJ:
          plan.sched = apply_overrides(
              cfg,
              model::truncation_schedule(cfg.n, budget, MechanismKind::SI_COV),
              cfg.n, budget, std::nullopt);
          break;
        case TaskKind::SdfPoint: {
          // tau does not depend on K, so resolve it first, pick K from it,
          // then finalize the K-dependent second-stage level.
          auto sched = apply_overrides(
              cfg,
              model::truncation_schedule(cfg.n, budget, MechanismKind::SI_POINT, 1),
              cfg.n, budget, 1);
          const int K =
              model::bandwidth(cfg.n, budget, cfg.s, sched,
                               model::BandwidthTask::SI_POINT_HOELDER);
          plan.bandwidth = K;
          plan.sched = apply_overrides(
              cfg,
              model::truncation_schedule(cfg.n, budget, MechanismKind::SI_POINT, K),
              cfg.n, budget, K);
          break;
        }
        case TaskKind::SdfGlobal: {
          plan.sched = apply_overrides(
              cfg,
              model::truncation_schedule(cfg.n, budget, MechanismKind::SI_GLOBAL),
              cfg.n, budget, std::nullopt);
          // the vertex randomizer needs K >= 2
          plan.bandwidth =
              std::max(2, model::bandwidth(cfg.n, budget, cfg.s, plan.sched,
                                           model::BandwidthTask::SI_GLOBAL));
          break;
        }
      }
      break;
    }
  }
  return plan;
}

// Integrated squared error of the cosine sum with coefficients est against
// the full sequence, by Parseval.
double parseval_ise(const Eigen::VectorXd& est,
                    const model::CovarianceSequence& covs) {
  const int m = static_cast<int>(est.size()) - 1;
  double acc = (est[0] - covs.at(0)) * (est[0] - covs.at(0));
  for (int k = 1; k <= m; ++k) {
    const double d = est[k] - covs.at(k);
    acc += 2.0 * d * d;
  }
  for (int k = m + 1; k < covs.values.size(); ++k)
    acc += 2.0 * covs.values[k] * covs.values[k];
  return acc / (2.0 * M_PI);
}

double replicate_squared_error(const CellPlan& plan, const ResolvedModel& m,
                               const Eigen::VectorXd& path, double alpha,
                               SeededRng& noise_rng) {
  const double scale = m.density_scale;
  double estimate = 0.0;
  switch (plan.mech) {
    case MechChoice::NonPrivate:
      switch (plan.task.kind) {
        case TaskKind::Cov0: estimate = estim::baseline_cov(path, 0); break;
        case TaskKind::CovJ: estimate = estim::baseline_cov(path, plan.task.j); break;
        case TaskKind::SdfPoint:
          estimate =
              scale * estim::baseline_sdf(path, plan.task.omega, plan.bandwidth);
          break;
        case TaskKind::SdfGlobal: {
          Eigen::VectorXd coeffs(plan.bandwidth + 1);
          for (int k = 0; k <= plan.bandwidth; ++k)
            coeffs[k] = estim::baseline_cov(path, k);
          return scale * scale * parseval_ise(coeffs, m.covs);
        }
      }
      break;
    case MechChoice::NI: {
      const auto t = mech::privatize_ni(path, plan.sched, alpha, noise_rng);
      switch (plan.task.kind) {
        case TaskKind::Cov0:
          estimate = estim::est_cov_ni(t, 0, plan.sched, alpha);
          break;
        case TaskKind::CovJ:
          estimate = estim::est_cov_ni(t, plan.task.j, plan.sched, alpha);
          break;
        case TaskKind::SdfPoint:
          estimate = scale * estim::est_sdf_ni(t, plan.bandwidth, plan.sched,
                                               alpha, plan.task.omega);
          break;
        case TaskKind::SdfGlobal: {
          Eigen::VectorXd coeffs(plan.bandwidth + 1);
          for (int k = 0; k <= plan.bandwidth; ++k)
            coeffs[k] = estim::est_cov_ni(t, k, plan.sched, alpha);
          return scale * scale * parseval_ise(coeffs, m.covs);
        }
      }
      break;
    }
    case MechChoice::SI:
      switch (plan.task.kind) {
        case TaskKind::Cov0: {
          const auto t =
              mech::privatize_si_cov(path, 0, plan.sched, alpha, noise_rng);
          estimate = estim::est_cov_si(t, 0);
          break;
        }
        case TaskKind::CovJ: {
          const auto t = mech::privatize_si_cov(path, plan.task.j, plan.sched,
                                                alpha, noise_rng);
          estimate = estim::est_cov_si(t, plan.task.j);
          break;
        }
        case TaskKind::SdfPoint: {
          const auto t =
              mech::privatize_si_point(path, plan.task.omega, plan.bandwidth,
                                       plan.sched, alpha, noise_rng);
          estimate = scale * estim::est_sdf_point_si(t, plan.bandwidth);
          break;
        }
        case TaskKind::SdfGlobal: {
          const auto t = mech::privatize_si_global(path, plan.bandwidth,
                                                   plan.sched, alpha, noise_rng);
          const Eigen::VectorXd coeffs =
              estim::est_cov_vector_global(t, plan.bandwidth);
          return scale * scale * parseval_ise(coeffs, m.covs);
        }
      }
      break;
  }
  const double err = estimate - plan.truth;
  return err * err;
}

unsigned resolve_workers(std::optional<unsigned> worker_override) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (worker_override) return std::max(1u, *worker_override);
  if (const char* env = std::getenv("LDP_SPECTRAL_THREADS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed >= 1) return std::min<unsigned>(static_cast<unsigned>(parsed), hw);
    return 1;
  }
  return hw;
}

}  // namespace

double true_value(const ExperimentConfig& cfg, const Task& task) {
  cfg.validate();
  return truth_for(resolve_model(cfg), task);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                std::optional<unsigned> worker_override) {
  cfg.validate();
  const ResolvedModel m = resolve_model(cfg);
  const procgen::StationarySampler sampler(m.covs, cfg.n);

  std::vector<CellPlan> cells;
  for (size_t ai = 0; ai < cfg.alphas.size(); ++ai)
    for (size_t ti = 0; ti < cfg.tasks.size(); ++ti)
      for (size_t mi = 0; mi < cfg.mechanisms.size(); ++mi)
        cells.push_back(plan_cell(cfg, m, ai, ti, mi));

  const size_t reps = static_cast<size_t>(cfg.replications);
  std::vector<std::vector<double>> sqerr(cells.size(),
                                         std::vector<double>(reps, 0.0));

  const auto run_item = [&](size_t item) {
    const size_t cell = item / reps;
    const size_t rep = item % reps;
    const CellPlan& plan = cells[cell];
    SeededRng path_rng(cfg.seed, 2 * static_cast<std::uint64_t>(rep) + 1);
    const Eigen::VectorXd path = sampler.draw(path_rng);
    SeededRng noise_rng(cfg.seed,
                        2 * (static_cast<std::uint64_t>(cell) * reps + rep) + 2);
    sqerr[cell][rep] =
        replicate_squared_error(plan, m, path, plan.alpha, noise_rng);
  };

  const size_t items = cells.size() * reps;
  const unsigned workers =
      std::min<size_t>(resolve_workers(worker_override), items);
  if (workers <= 1) {
    for (size_t item = 0; item < items; ++item) run_item(item);
  } else {
    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        for (;;) {
          const size_t item = next.fetch_add(1);
          if (item >= items) return;
          try {
            run_item(item);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            next.store(items);
            return;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  ExperimentResult result;
  result.rows.reserve(cells.size());
  for (size_t c = 0; c < cells.size(); ++c) {
    const CellPlan& plan = cells[c];
    const auto& sq = sqerr[c];
    const double mse = pairwise_sum(sq.data(), sq.size()) / sq.size();
    double se = 0.0;
    if (sq.size() > 1) {
      std::vector<double> centered(sq.size());
      for (size_t r = 0; r < sq.size(); ++r) {
        const double d = sq[r] - mse;
        centered[r] = d * d;
      }
      const double var =
          pairwise_sum(centered.data(), centered.size()) / (sq.size() - 1);
      se = std::sqrt(var / sq.size());
    }
    ResultRow row;
    row.example = cfg.process ? 0 : cfg.example;
    row.task = plan.task.label();
    row.mechanism = to_string(plan.mech);
    row.alpha = plan.mech == MechChoice::NonPrivate
                    ? std::numeric_limits<double>::infinity()
                    : plan.alpha;
    row.mse = mse;
    row.mse_se = se;
    row.truth = plan.truth;
    row.n = cfg.n;
    row.replications = cfg.replications;
    row.tau = plan.mech == MechChoice::NonPrivate ? 0.0 : plan.sched.tau;
    row.tau_tilde =
        plan.mech == MechChoice::NonPrivate ? 0.0 : plan.sched.tau_tilde;
    row.bandwidth = plan.bandwidth;
    result.rows.push_back(std::move(row));
  }
  return result;
}

SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points,
                          std::pair<double, double> alpha_window) {
  std::vector<std::pair<double, double>> selected;
  for (const auto& [alpha, mse] : points) {
    if (alpha < alpha_window.first || alpha > alpha_window.second) continue;
    if (!(mse > 0.0))
      throw std::invalid_argument("log-log fit needs positive mse values");
    selected.emplace_back(std::log(alpha), std::log(mse));
  }
  if (selected.size() < 3)
    throw std::invalid_argument("log-log fit needs at least 3 in-window points");
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : selected) {
    mx += x;
    my += y;
  }
  mx /= selected.size();
  my /= selected.size();
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : selected) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0)
    throw std::invalid_argument("log-log fit needs distinct alphas");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (const auto& [x, y] : selected) {
    const double r = y - (fit.intercept + fit.slope * x);
    ss_res += r * r;
  }
  fit.r2 = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  return fit;
}

void emit_csv(const ExperimentResult& result, std::ostream& os) {
  os << "example,task,mechanism,alpha,mse,mse_se,truth,n,replications,tau,"
        "tau_tilde,bandwidth\n";
  for (const auto& row : result.rows) {
    os << row.example << ',' << row.task << ',' << row.mechanism << ','
       << io::format_double(row.alpha) << ',' << io::format_double(row.mse)
       << ',' << io::format_double(row.mse_se) << ','
       << io::format_double(row.truth) << ',' << row.n << ','
       << row.replications << ',' << io::format_double(row.tau) << ','
       << io::format_double(row.tau_tilde) << ',' << row.bandwidth << '\n';
  }
}

void emit_csv(const ExperimentResult& result, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  emit_csv(result, os);
  if (!os.good()) throw std::runtime_error("write failed: " + path);
}

}  // namespace ldps::bench
