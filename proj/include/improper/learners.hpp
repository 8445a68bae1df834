#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "improper/families.hpp"
#include "improper/losses.hpp"
#include "improper/rng.hpp"

namespace improper {

struct LabeledDataset {
  std::vector<Eigen::VectorXd> x;
  std::vector<double> y;
  int d = 0;

  std::size_t size() const { return x.size(); }
  void push_back(Eigen::VectorXd xi, double yi) {
    x.push_back(std::move(xi));
    y.push_back(yi);
  }
  LabeledDataset head(std::size_t n) const;
};

struct SolverConfig {
  double tol = 1e-8;       // projected-gradient norm stop
  int max_iters = 10000;
  double step0 = 1.0;
  double armijo_c = 1e-4;
  double shrink = 0.5;
  std::vector<double>* trace = nullptr;  // accepted objective values, if set
};

// Constrained empirical risk minimizer over the ball ||theta|| <= B via
// projected gradient with backtracking line search. The objective is
// sum_i phi(theta^T x_i, y_i).
Eigen::VectorXd fit_mle(const GlmFamily& family, const ScalarFn& loss,
                        const LabeledDataset& data, double B,
                        const SolverConfig& cfg = {});
Eigen::VectorXd fit_mle(const GlmFamily& family, const ScalarLoss& loss,
                        const LabeledDataset& data, double B,
                        const SolverConfig& cfg = {});

// Deterministic grid over the parameter ball: equispaced directions (d = 2)
// or seeded unit directions (d > 2), crossed with radius levels.
std::vector<Eigen::VectorXd> make_theta_grid(int d, double B, int size,
                                             std::uint64_t seed = 0);

// Exponential-weights posterior over the grid after observing `history`:
// w_j proportional to exp(-eta * cumulative loss of component j), computed
// in log space. Components at infinite loss get weight exactly zero.
std::vector<double> vovk_weights(const GlmFamily& family, ScoringRule rule,
                                 double eta, const LabeledDataset& history,
                                 const std::vector<Eigen::VectorXd>& theta_grid);

// Weight-mixed predictive distribution at x.
PredictiveDistribution vovk_predict(const GlmFamily& family,
                                    const std::vector<double>& weights,
                                    const std::vector<Eigen::VectorXd>& theta_grid,
                                    const Eigen::VectorXd& x);

struct RegretReport {
  double cumulative_loss = 0.0;
  double best_comparator_loss = 0.0;
  double regret = 0.0;
  double regret_bound = 0.0;
  double lip = 0.0;
  bool lip_from_grid = false;  // analytic form unavailable; grid maximum used
};

// Replays the aggregation over the sequence, accumulating the mixture's loss
// and the per-component losses; reports regret against the best fixed grid
// element and the logarithmic regret bound.
RegretReport vovk_online_run(const GlmFamily& family, ScoringRule rule,
                             double eta, const LabeledDataset& sequence,
                             const std::vector<Eigen::VectorXd>& theta_grid,
                             double data_radius, double param_radius);

// Lipschitz constant of the scoring-rule-composed scalar loss on
// [-T, T] x Y. Analytic for the log rule; 1e4-point grid maximum otherwise.
double lipschitz_constant(const GlmFamily& family, ScoringRule rule, double T,
                          bool* from_grid = nullptr);

struct MixturePredictor {
  struct Component {
    Eigen::VectorXd theta;
    double weight;
  };
  std::vector<Component> components;

  PredictiveDistribution predict(const GlmFamily& family,
                                 const Eigen::VectorXd& x) const;
};

// Subsample aggregation: K constrained fits on random subsets of size
// floor(2n/3), reweighted by exponentiated full-sample loss.
MixturePredictor aha_fit(const GlmFamily& family, ScoringRule rule,
                         const LabeledDataset& data, double B, int K, Rng& rng,
                         const SolverConfig& cfg = {});

// Mean scoring-rule loss of the mixture's prediction over a test set.
double risk_estimate(const MixturePredictor& predictor, const GlmFamily& family,
                     ScoringRule rule, const LabeledDataset& test);

}  // namespace improper
