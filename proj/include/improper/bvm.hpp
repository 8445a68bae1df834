#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <vector>

#include "improper/families.hpp"
#include "improper/learners.hpp"

namespace improper {

// (1/n) sum_i phi''(theta^T x_i, y_i) x_i x_i^T for the rule-composed loss.
Eigen::MatrixXd empirical_hessian(const GlmFamily& family, ScoringRule rule,
                                  const LabeledDataset& data,
                                  const Eigen::VectorXd& theta);

// Gaussian approximation of the aggregation weight measure: mean at the
// constrained empirical minimizer, precision n * (empirical Hessian there).
struct GaussianApprox {
  Eigen::VectorXd mean;
  Eigen::MatrixXd precision;
  double log_normalizer;  // log of the density normalizing constant

  static GaussianApprox make(Eigen::VectorXd mean, Eigen::MatrixXd precision);
  static GaussianApprox from_fit(const GlmFamily& family, ScoringRule rule,
                                 const LabeledDataset& data,
                                 const Eigen::VectorXd& theta_hat);

  double density(const Eigen::VectorXd& theta) const;
};

// Cells tiling the parameter ball, for Riemann-cell TV at d <= 2.
struct BallGrid {
  std::vector<Eigen::VectorXd> centers;
  std::vector<double> volumes;
};

BallGrid make_ball_cells_1d(double B, int cells);
BallGrid make_ball_cells_2d(double B, int radial_cells, int angular_cells);

// (1/2) sum_cells |w_cell - gaussian mass of the cell| plus half of the
// Gaussian's off-ball mass, midpoint-rule cell integrals. d <= 2 only.
double tv_distance_grid(const std::vector<double>& weights,
                        const GaussianApprox& approx, const BallGrid& grid);

// Total variation between two predictive distributions on a shared outcome
// space; closed form for a pair of unit-variance Gaussians.
double predictive_tv(const PredictiveDistribution& p,
                     const PredictiveDistribution& q);

struct BvmTrendRow {
  std::uint64_t seed;
  long n;
  double tv_param;
  std::array<double, 3> tv_predictive;
};

struct BvmTrendConfig {
  int seeds = 20;
  std::vector<long> n_ladder = {200, 2000, 20000};
  double theta_star = 0.7;
  double B = 2.0;
  int cells = 801;
  double eta = 1.0;
  std::array<double, 3> query_points = {0.5, 1.0, 2.0};
  std::uint64_t base_seed = 1;
};

// Well-specified d=1 logistic simulation: TV between the discretized
// aggregation measure and its Gaussian approximation, and predictive TV
// against the point model, along the sample-size ladder.
std::vector<BvmTrendRow> bvm_trend(const BvmTrendConfig& cfg);

}  // namespace improper
