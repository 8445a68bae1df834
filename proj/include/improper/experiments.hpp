#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "improper/learners.hpp"

namespace improper {

enum class ScheduleForm { constant, log_n, sqrt_n, linear_n };

std::string schedule_form_name(ScheduleForm form);
ScheduleForm schedule_form_from_name(const std::string& name);

// Regularization schedule B = c * f(n).
struct Schedule {
  ScheduleForm form;
  double c;

  double radius(long n) const;
  std::string name() const;
};

std::vector<Schedule> default_schedules();

enum class TaskId { linreg_misspec, logistic_mix, two_point_demo };

std::string task_name(TaskId task);
TaskId task_from_name(const std::string& name);

struct ExperimentConfig {
  TaskId task = TaskId::linreg_misspec;
  int d = 10;
  double tau = 0.0;
  std::vector<long> n_grid = {100, 300, 1000};
  int K = 20;
  std::vector<Schedule> schedules = default_schedules();
  long test_size = 5000;
  int replications = 20;
  std::uint64_t seed = 1;
};

struct DatasetWithMeta {
  LabeledDataset data;
  Eigen::VectorXd theta_star;
  long n_subpopulation = 0;  // logistic_mix only
};

// y | x ~ N(x^T theta*, 1 + tau^2): hidden-variable regression with
// theta* uniform on the unit sphere.
DatasetWithMeta gen_linreg_misspec(long n, int d, double tau, std::uint64_t seed);

// (1 - tau) fraction from a planted logistic model; tau fraction from a
// shifted subpopulation whose labels are a 0.9-biased coin, independent
// of x. Exactly round(tau * n) subpopulation rows.
DatasetWithMeta gen_logistic_mix(long n, int d, double tau_fraction,
                                 std::uint64_t seed);

struct RiskCell {
  long n;
  std::string estimator;  // "mle" | "aha"
  Schedule schedule;
  int replication;
  double risk;
  bool failed = false;
  std::string error;
};

struct RiskSummaryRow {
  long n;
  std::string estimator;
  Schedule schedule;
  double mean_risk;
  double std_err;
};

struct RiskCurve {
  std::vector<RiskCell> cells;        // full table
  std::vector<RiskSummaryRow> rows;   // aggregated over replications
  // per n: the schedule minimizing the MLE mean risk, with both estimators
  std::vector<RiskSummaryRow> best_by_mle;
};

RiskCurve run_experiment(const ExperimentConfig& cfg);

struct TwoPointRow {
  long n;
  double risk_best_theta;  // log 2 at theta = 0
  double risk_mixture;
};

// Exact two-atom risks of the best single parameter and the two-point
// mixture; no sampling.
std::vector<TwoPointRow> two_point_demo(const std::vector<long>& n_list);

// Central-difference derivative of the two-atom risk at theta = 0.
double two_point_risk_derivative_at_zero(long n, double step = 1e-6);

}  // namespace improper
