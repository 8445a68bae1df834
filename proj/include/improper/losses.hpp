#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "improper/distributions.hpp"
#include "improper/labels.hpp"

namespace improper {

enum class LossId { logistic, geometric, poisson, gaussian };

std::string loss_name(LossId id);

// Scalar induced loss phi(t, y) on the linear predictor t, with exact first
// and second derivatives in t. Evaluation is stable for |t| up to ~700.
struct ScalarLoss {
  LossId id;
  LabelSet label_set;

  static ScalarLoss logistic();
  static ScalarLoss geometric(int y_max = 10);
  static ScalarLoss poisson(int y_max = 10);
  static ScalarLoss gaussian(double y_lo = -10.0, double y_hi = 10.0);

  double eval(double t, double y) const;
  double d1(double t, double y) const;
  double d2(double t, double y) const;
};

// Type-erased scalar loss; lets solvers and grid searches run on either the
// canonical losses above or scoring-rule-composed ones.
struct ScalarFn {
  LabelSet label_set;
  std::string name;
  std::function<double(double, double)> f;
  std::function<double(double, double)> d1;
  std::function<double(double, double)> d2;
};

ScalarFn to_fn(const ScalarLoss& loss);

enum class ScoringRule { log, squared, hellinger, quadratic };

std::string rule_name(ScoringRule rule);

// Distribution-level loss. Log loss returns +inf when p(y) = 0; the
// aggregation code treats such components as weight zero.
double score_eval(ScoringRule rule, const PredictiveDistribution& p, double y);

// Largest eta making p -> exp(-eta * loss(p, y)) concave on the simplex.
double mixability_constant(ScoringRule rule);

struct ExpConcavityResult {
  bool holds = true;
  // First midpoint-concavity violation found, if any.
  std::vector<double> p1, p2;
  double y = 0.0;
  double deficit = 0.0;
};

// Midpoint-concavity test of p -> exp(-eta * rule(p, y)) over all pairs of
// simplex grid points and all outcomes. k is the number of outcomes;
// tolerance is absolute (1e-9).
ExpConcavityResult check_exp_concavity(ScoringRule rule, double eta, int k,
                                       int grid_resolution);

// log(1 + e^t) without overflow.
double log1p_exp(double t);
// 1 / (1 + e^{-t})
double sigmoid(double t);

}  // namespace improper
