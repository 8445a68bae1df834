#include "improper/bvm.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace improper {

Eigen::MatrixXd empirical_hessian(const GlmFamily& family, ScoringRule rule,
                                  const LabeledDataset& data,
                                  const Eigen::VectorXd& theta) {
  const ScalarFn loss = composed_loss(family, rule);
  const int d = data.d;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double c = loss.d2(theta.dot(data.x[i]), data.y[i]);
    H.selfadjointView<Eigen::Lower>().rankUpdate(data.x[i], c);
  }
  H = H.selfadjointView<Eigen::Lower>();
  if (data.size() > 0) H /= static_cast<double>(data.size());
  return H;
}

GaussianApprox GaussianApprox::make(Eigen::VectorXd mean, Eigen::MatrixXd precision) {
  GaussianApprox g;
  g.mean = std::move(mean);
  Eigen::MatrixXd sym = 0.5 * (precision + precision.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  double log_det = 0.0;
  for (int i = 0; i < sym.rows(); ++i) {
    if (!(es.eigenvalues()(i) > 0.0))
      throw std::runtime_error("gaussian approximation: precision not positive definite");
    log_det += std::log(es.eigenvalues()(i));
  }
  g.precision = std::move(sym);
  const double d = static_cast<double>(g.precision.rows());
  g.log_normalizer = 0.5 * log_det - 0.5 * d * std::log(2.0 * M_PI);
  return g;
}

GaussianApprox GaussianApprox::from_fit(const GlmFamily& family, ScoringRule rule,
                                        const LabeledDataset& data,
                                        const Eigen::VectorXd& theta_hat) {
  Eigen::MatrixXd H = empirical_hessian(family, rule, data, theta_hat);
  return make(theta_hat, static_cast<double>(data.size()) * H);
}

double GaussianApprox::density(const Eigen::VectorXd& theta) const {
  const Eigen::VectorXd z = theta - mean;
  return std::exp(log_normalizer - 0.5 * z.dot(precision * z));
}

BallGrid make_ball_cells_1d(double B, int cells) {
  if (cells < 1) throw std::invalid_argument("cells must be >= 1");
  BallGrid g;
  const double h = 2.0 * B / cells;
  for (int i = 0; i < cells; ++i) {
    Eigen::VectorXd c(1);
    c(0) = -B + h * (i + 0.5);
    g.centers.push_back(c);
    g.volumes.push_back(h);
  }
  return g;
}

BallGrid make_ball_cells_2d(double B, int radial_cells, int angular_cells) {
  if (radial_cells < 1 || angular_cells < 1)
    throw std::invalid_argument("cells must be >= 1");
  BallGrid g;
  for (int i = 0; i < radial_cells; ++i) {
    const double r0 = B * i / radial_cells;
    const double r1 = B * (i + 1) / radial_cells;
    const double rc = 0.5 * (r0 + r1);
    const double area = M_PI * (r1 * r1 - r0 * r0) / angular_cells;
    for (int j = 0; j < angular_cells; ++j) {
      const double a = 2.0 * M_PI * (j + 0.5) / angular_cells;
      Eigen::VectorXd c(2);
      c << rc * std::cos(a), rc * std::sin(a);
      g.centers.push_back(c);
      g.volumes.push_back(area);
    }
  }
  return g;
}

double tv_distance_grid(const std::vector<double>& weights,
                        const GaussianApprox& approx, const BallGrid& grid) {
  if (weights.size() != grid.centers.size())
    throw std::invalid_argument("weights/grid size mismatch");
  if (!grid.centers.empty() && grid.centers.front().size() > 2)
    throw std::invalid_argument("cell TV supported at d <= 2 only");
  double sum = 0.0, gauss_in = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double gm = approx.density(grid.centers[i]) * grid.volumes[i];
    gauss_in += gm;
    sum += std::abs(weights[i] - gm);
  }
  const double off_ball = std::max(0.0, 1.0 - gauss_in);
  return 0.5 * (sum + off_ball);
}

double predictive_tv(const PredictiveDistribution& p,
                     const PredictiveDistribution& q) {
  if (p.is_discrete() != q.is_discrete())
    throw std::domain_error("predictive_tv: mismatched outcome spaces");
  if (p.is_discrete()) {
    // union of supports; labels must agree where both are present
    double s = 0.0;
    const std::size_t n = std::max(p.labels().size(), q.labels().size());
    for (std::size_t i = 0; i < n; ++i) {
      const bool in_p = i < p.labels().size();
      const bool in_q = i < q.labels().size();
      if (in_p && in_q && p.labels()[i] != q.labels()[i])
        throw std::domain_error("predictive_tv: mismatched label sets");
      const double pm = in_p ? p.mass()[i] : 0.0;
      const double qm = in_q ? q.mass()[i] : 0.0;
      s += std::abs(pm - qm);
    }
    return 0.5 * s;
  }
  if (p.means().size() != 1 || q.means().size() != 1)
    throw std::domain_error(
        "predictive_tv: closed form covers single-component Gaussians only");
  // TV(N(m1,1), N(m2,1)) = erf(|m1-m2| / (2 sqrt(2)))
  return std::erf(std::abs(p.means()[0] - q.means()[0]) / (2.0 * std::sqrt(2.0)));
}

std::vector<BvmTrendRow> bvm_trend(const BvmTrendConfig& cfg) {
  const GlmFamily family = GlmFamily::logistic();
  std::vector<BvmTrendRow> rows;
  const long n_max = *std::max_element(cfg.n_ladder.begin(), cfg.n_ladder.end());

  const BallGrid grid = make_ball_cells_1d(cfg.B, cfg.cells);
  Eigen::VectorXd theta_star(1);
  theta_star << cfg.theta_star;

  for (int s = 0; s < cfg.seeds; ++s) {
    Rng rng(cfg.base_seed + static_cast<std::uint64_t>(s));
    Rng xs = rng.split(0), ys = rng.split(1);
    LabeledDataset data;
    data.d = 1;
    for (long i = 0; i < n_max; ++i) {
      Eigen::VectorXd x(1);
      x << xs.normal();
      data.push_back(x, family.sample(theta_star, x, ys));
    }
    for (long n : cfg.n_ladder) {
      const LabeledDataset prefix = data.head(static_cast<std::size_t>(n));
      const Eigen::VectorXd theta_hat =
          fit_mle(family, family.matching_loss(), prefix, cfg.B);
      const GaussianApprox approx =
          GaussianApprox::from_fit(family, ScoringRule::log, prefix, theta_hat);
      // cells are uniform, so softmax over centers is the cell measure
      const std::vector<double> w =
          vovk_weights(family, ScoringRule::log, cfg.eta, prefix, grid.centers);
      BvmTrendRow row;
      row.seed = cfg.base_seed + static_cast<std::uint64_t>(s);
      row.n = n;
      row.tv_param = tv_distance_grid(w, approx, grid);
      for (std::size_t k = 0; k < cfg.query_points.size(); ++k) {
        Eigen::VectorXd xq(1);
        xq << cfg.query_points[k];
        const PredictiveDistribution mix =
            vovk_predict(family, w, grid.centers, xq);
        const PredictiveDistribution point = family.predict(theta_hat, xq);
        row.tv_predictive[k] = predictive_tv(mix, point);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace improper
