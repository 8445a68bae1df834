#include "improper/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace improper {

std::string schedule_form_name(ScheduleForm form) {
  switch (form) {
    case ScheduleForm::constant: return "const";
    case ScheduleForm::log_n: return "log_n";
    case ScheduleForm::sqrt_n: return "sqrt_n";
    case ScheduleForm::linear_n: return "linear_n";
  }
  return "?";
}

ScheduleForm schedule_form_from_name(const std::string& name) {
  if (name == "const") return ScheduleForm::constant;
  if (name == "log_n") return ScheduleForm::log_n;
  if (name == "sqrt_n") return ScheduleForm::sqrt_n;
  if (name == "linear_n") return ScheduleForm::linear_n;
  throw std::invalid_argument("unknown schedule form: " + name);
}

double Schedule::radius(long n) const {
  const double nn = static_cast<double>(n);
  switch (form) {
    case ScheduleForm::constant: return c;
    case ScheduleForm::log_n: return c * std::log(nn);
    case ScheduleForm::sqrt_n: return c * std::sqrt(nn);
    case ScheduleForm::linear_n: return c * nn;
  }
  return c;
}

std::string Schedule::name() const {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s:%g", schedule_form_name(form).c_str(), c);
  return buf;
}

std::vector<Schedule> default_schedules() {
  std::vector<Schedule> out;
  for (ScheduleForm f : {ScheduleForm::constant, ScheduleForm::log_n,
                         ScheduleForm::sqrt_n, ScheduleForm::linear_n})
    for (double c : {0.1, 0.2, 1.0}) out.push_back({f, c});
  return out;
}

std::string task_name(TaskId task) {
  switch (task) {
    case TaskId::linreg_misspec: return "linreg_misspec";
    case TaskId::logistic_mix: return "logistic_mix";
    case TaskId::two_point_demo: return "two_point_demo";
  }
  return "?";
}

TaskId task_from_name(const std::string& name) {
  if (name == "linreg_misspec") return TaskId::linreg_misspec;
  if (name == "logistic_mix") return TaskId::logistic_mix;
  if (name == "two_point_demo") return TaskId::two_point_demo;
  throw std::invalid_argument("unknown task: " + name);
}

namespace {

Eigen::VectorXd unit_sphere_point(int d, Rng& rng) {
  Eigen::VectorXd u(d);
  double nrm = 0.0;
  do {
    for (int i = 0; i < d; ++i) u(i) = rng.normal();
    nrm = u.norm();
  } while (nrm == 0.0);
  return u / nrm;
}

}  // namespace

DatasetWithMeta gen_linreg_misspec(long n, int d, double tau, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  if (tau < 0.0) throw std::invalid_argument("tau must be >= 0");
  Rng root(seed);
  Rng star = root.split(0), rows = root.split(1);
  DatasetWithMeta out;
  out.theta_star = unit_sphere_point(d, star);
  out.data.d = d;
  for (long i = 0; i < n; ++i) {
    Eigen::VectorXd x(d);
    for (int j = 0; j < d; ++j) x(j) = rows.normal();
    const double h = rows.normal();
    const double noise = rows.normal();
    out.data.push_back(x, x.dot(out.theta_star) + tau * h + noise);
  }
  return out;
}

DatasetWithMeta gen_logistic_mix(long n, int d, double tau_fraction,
                                 std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  if (!(tau_fraction >= 0.0 && tau_fraction <= 1.0))
    throw std::invalid_argument("tau_fraction must lie in [0,1]");
  Rng root(seed);
  Rng star = root.split(0), rows = root.split(1), shuffle = root.split(2);
  const GlmFamily family = GlmFamily::logistic();

  DatasetWithMeta out;
  out.theta_star = 2.0 * unit_sphere_point(d, star);
  const Eigen::VectorXd shift_dir = unit_sphere_point(d, star);
  out.data.d = d;

  const long n_sub = std::lround(tau_fraction * static_cast<double>(n));
  out.n_subpopulation = n_sub;
  for (long i = 0; i < n; ++i) {
    Eigen::VectorXd x(d);
    for (int j = 0; j < d; ++j) x(j) = rows.normal();
    double y;
    if (i < n_sub) {
      x += 2.0 * shift_dir;
      y = rows.uniform() < 0.9 ? 1.0 : -1.0;
    } else {
      y = family.sample(out.theta_star, x, rows);
    }
    out.data.push_back(x, y);
  }
  // seeded shuffle so the subpopulation is interleaved
  for (long i = n - 1; i > 0; --i) {
    const long j = static_cast<long>(shuffle.uniform() * (i + 1));
    std::swap(out.data.x[i], out.data.x[std::min(j, i)]);
    std::swap(out.data.y[i], out.data.y[std::min(j, i)]);
  }
  return out;
}

RiskCurve run_experiment(const ExperimentConfig& cfg) {
  if (cfg.replications < 1) throw std::invalid_argument("replications must be >= 1");
  if (cfg.task == TaskId::two_point_demo)
    throw std::invalid_argument("two_point_demo is exact; use two_point_demo()");

  // label interval wide enough that no finite sample ever leaves it
  const GlmFamily family = cfg.task == TaskId::linreg_misspec
                               ? GlmFamily::gaussian(-1e6, 1e6)
                               : GlmFamily::logistic();
  RiskCurve curve;

  for (int rep = 0; rep < cfg.replications; ++rep) {
    Rng rep_rng = Rng(cfg.seed).split(static_cast<std::uint64_t>(rep));
    const std::uint64_t draw_seed = rep_rng.split(0).seed();
    Rng aha_rng = rep_rng.split(2);

    for (long n : cfg.n_grid) {
      // one pooled draw per cell block: train and held-out rows share the
      // population (same planted parameter), split after generation
      const long total = n + cfg.test_size;
      const std::uint64_t seed = draw_seed ^ static_cast<std::uint64_t>(n);
      const DatasetWithMeta pooled =
          cfg.task == TaskId::linreg_misspec
              ? gen_linreg_misspec(total, cfg.d, cfg.tau, seed)
              : gen_logistic_mix(total, cfg.d, cfg.tau, seed);
      DatasetWithMeta train, test;
      train.theta_star = test.theta_star = pooled.theta_star;
      train.data.d = test.data.d = cfg.d;
      for (long i = 0; i < total; ++i) {
        if (i < n)
          train.data.push_back(pooled.data.x[i], pooled.data.y[i]);
        else
          test.data.push_back(pooled.data.x[i], pooled.data.y[i]);
      }

      for (const Schedule& sch : cfg.schedules) {
        const double B = sch.radius(n);
        RiskCell mle_cell{n, "mle", sch, rep, 0.0};
        RiskCell aha_cell{n, "aha", sch, rep, 0.0};
        try {
          const Eigen::VectorXd theta_hat =
              fit_mle(family, family.matching_loss(), train.data, B);
          MixturePredictor point;
          point.components.push_back({theta_hat, 1.0});
          mle_cell.risk =
              risk_estimate(point, family, ScoringRule::log, test.data);
        } catch (const std::exception& e) {
          mle_cell.failed = true;
          mle_cell.error = e.what();
        }
        try {
          Rng fit_rng = aha_rng.split(
              static_cast<std::uint64_t>(n) * 131 +
              static_cast<std::uint64_t>(&sch - cfg.schedules.data()));
          const MixturePredictor mix =
              aha_fit(family, ScoringRule::log, train.data, B, cfg.K, fit_rng);
          aha_cell.risk =
              risk_estimate(mix, family, ScoringRule::log, test.data);
        } catch (const std::exception& e) {
          aha_cell.failed = true;
          aha_cell.error = e.what();
        }
        curve.cells.push_back(std::move(mle_cell));
        curve.cells.push_back(std::move(aha_cell));
      }
    }
  }

  // aggregate over replications
  std::map<std::tuple<long, std::string, std::string>, std::vector<double>> agg;
  std::map<std::tuple<long, std::string, std::string>, Schedule> sched_of;
  for (const RiskCell& c : curve.cells) {
    if (c.failed) continue;
    const auto key = std::make_tuple(c.n, c.estimator, c.schedule.name());
    agg[key].push_back(c.risk);
    sched_of.emplace(key, c.schedule);
  }
  for (const auto& [key, risks] : agg) {
    double mean = 0.0;
    for (double r : risks) mean += r;
    mean /= static_cast<double>(risks.size());
    double var = 0.0;
    for (double r : risks) var += (r - mean) * (r - mean);
    const double se = risks.size() > 1
                          ? std::sqrt(var / (risks.size() - 1) /
                                      static_cast<double>(risks.size()))
                          : 0.0;
    curve.rows.push_back(
        {std::get<0>(key), std::get<1>(key), sched_of.at(key), mean, se});
  }
  std::sort(curve.rows.begin(), curve.rows.end(), [](const auto& a, const auto& b) {
    return std::tie(a.n, a.estimator, a.schedule.form, a.schedule.c) <
           std::tie(b.n, b.estimator, b.schedule.form, b.schedule.c);
  });

  // best schedule per n according to the MLE mean risk
  for (long n : cfg.n_grid) {
    const RiskSummaryRow* best_mle = nullptr;
    for (const auto& row : curve.rows)
      if (row.n == n && row.estimator == "mle" &&
          (!best_mle || row.mean_risk < best_mle->mean_risk))
        best_mle = &row;
    if (!best_mle) continue;
    curve.best_by_mle.push_back(*best_mle);
    for (const auto& row : curve.rows)
      if (row.n == n && row.estimator == "aha" &&
          row.schedule.name() == best_mle->schedule.name())
        curve.best_by_mle.push_back(row);
  }
  return curve;
}

namespace {

// Exact two-atom expectation of -log p(y|x) for the mixture
// (1/n) p_0 + (1 - 1/n) p_n under the skewed two-point distribution.
double two_point_mixture_risk(long n) {
  const double nn = static_cast<double>(n);
  // atom (x, y) = (-n, 1), probability 1/(1+n):
  //   mixture mass = 1/(2n) + (1 - 1/n) sigmoid(-n^2)
  const double p1 = 1.0 / (2.0 * nn) + (1.0 - 1.0 / nn) * sigmoid(-nn * nn);
  // atom (x, y) = (1, 1), probability n/(1+n):
  const double p2 = 1.0 / (2.0 * nn) + (1.0 - 1.0 / nn) * sigmoid(nn);
  return -(1.0 / (1.0 + nn)) * std::log(p1) - (nn / (1.0 + nn)) * std::log(p2);
}

double two_point_theta_risk(long n, double theta) {
  const double nn = static_cast<double>(n);
  // -log sigmoid(y theta x) at the two atoms
  return (1.0 / (1.0 + nn)) * log1p_exp(nn * theta) +
         (nn / (1.0 + nn)) * log1p_exp(-theta);
}

}  // namespace

std::vector<TwoPointRow> two_point_demo(const std::vector<long>& n_list) {
  std::vector<TwoPointRow> rows;
  for (long n : n_list) {
    if (n < 2) throw std::invalid_argument("two_point_demo requires n >= 2");
    rows.push_back({n, two_point_theta_risk(n, 0.0), two_point_mixture_risk(n)});
  }
  return rows;
}

double two_point_risk_derivative_at_zero(long n, double step) {
  return (two_point_theta_risk(n, step) - two_point_theta_risk(n, -step)) /
         (2.0 * step);
}

}  // namespace improper
