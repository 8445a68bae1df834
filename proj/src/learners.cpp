#include "improper/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace improper {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd project_ball(const Eigen::VectorXd& theta, double B) {
  const double nrm = theta.norm();
  if (nrm <= B || nrm == 0.0) return theta;
  return theta * (B / nrm);
}

}  // namespace

LabeledDataset LabeledDataset::head(std::size_t n) const {
  LabeledDataset out;
  out.d = d;
  const std::size_t m = std::min(n, size());
  out.x.assign(x.begin(), x.begin() + m);
  out.y.assign(y.begin(), y.begin() + m);
  return out;
}

Eigen::VectorXd fit_mle(const GlmFamily& family, const ScalarFn& loss,
                        const LabeledDataset& data, double B,
                        const SolverConfig& cfg) {
  (void)family;
  if (data.size() == 0) throw std::invalid_argument("fit_mle: empty dataset");
  if (B < 0.0) throw std::invalid_argument("fit_mle: negative radius");
  const int d = data.d;
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(d);
  if (B == 0.0) return theta;

  const auto objective = [&](const Eigen::VectorXd& th) {
    double s = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i)
      s += loss.f(th.dot(data.x[i]), data.y[i]);
    return s;
  };
  const auto gradient = [&](const Eigen::VectorXd& th) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(d);
    for (std::size_t i = 0; i < data.size(); ++i)
      g += loss.d1(th.dot(data.x[i]), data.y[i]) * data.x[i];
    return g;
  };

  double fval = objective(theta);
  if (!std::isfinite(fval)) {
    std::ostringstream os;
    os << "fit_mle: non-finite objective at the initial iterate theta=0";
    throw std::runtime_error(os.str());
  }
  if (cfg.trace) cfg.trace->push_back(fval);
  double step = cfg.step0;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    const Eigen::VectorXd g = gradient(theta);
    // grow the step back each iteration, then backtrack
    step = std::min(step * 2.0, 1e8);
    Eigen::VectorXd next;
    double fnext = kInf;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      next = project_ball(theta - step * g, B);
      fnext = objective(next);
      const double decrease = (theta - next).squaredNorm() / step;
      if (std::isfinite(fnext) && fnext <= fval - cfg.armijo_c * decrease) {
        accepted = true;
        break;
      }
      step *= cfg.shrink;
    }
    if (!accepted) {
      if (!std::isfinite(fnext)) {
        std::ostringstream os;
        os << "fit_mle: non-finite loss during line search; iterate = [";
        for (int j = 0; j < d; ++j) os << (j ? ", " : "") << theta(j);
        os << "], objective = " << fval;
        throw std::runtime_error(os.str());
      }
      break;  // no further progress at the smallest step
    }
    const double move = (theta - next).norm() / step;
    theta = next;
    fval = fnext;
    if (cfg.trace) cfg.trace->push_back(fval);
    if (move <= cfg.tol) break;
  }
  return theta;
}

Eigen::VectorXd fit_mle(const GlmFamily& family, const ScalarLoss& loss,
                        const LabeledDataset& data, double B,
                        const SolverConfig& cfg) {
  return fit_mle(family, to_fn(loss), data, B, cfg);
}

std::vector<Eigen::VectorXd> make_theta_grid(int d, double B, int size,
                                             std::uint64_t seed) {
  if (d < 1 || size < 1) throw std::invalid_argument("make_theta_grid: bad shape");
  std::vector<Eigen::VectorXd> grid;
  grid.reserve(size);
  if (d == 1) {
    for (int i = 0; i < size; ++i) {
      Eigen::VectorXd p(1);
      p(0) = size == 1 ? 0.0 : -B + 2.0 * B * i / (size - 1);
      grid.push_back(p);
    }
    return grid;
  }
  // radius levels x directions; directions equispaced at d = 2, seeded
  // unit vectors otherwise
  const int n_rad = std::max(1, static_cast<int>(std::round(std::sqrt(size / 2.0))));
  const int n_dir = std::max(1, size / n_rad);
  Rng rng(seed);
  std::vector<Eigen::VectorXd> dirs;
  dirs.reserve(n_dir);
  for (int j = 0; j < n_dir; ++j) {
    Eigen::VectorXd u(d);
    if (d == 2) {
      const double a = 2.0 * M_PI * j / n_dir;
      u << std::cos(a), std::sin(a);
    } else {
      for (int c = 0; c < d; ++c) u(c) = rng.normal();
      const double nrm = u.norm();
      u /= nrm > 0.0 ? nrm : 1.0;
    }
    dirs.push_back(u);
  }
  for (int i = 0; i < n_rad && static_cast<int>(grid.size()) < size; ++i) {
    const double r = B * (i + 1) / n_rad;
    for (const auto& u : dirs) {
      if (static_cast<int>(grid.size()) >= size) break;
      grid.push_back(r * u);
    }
  }
  while (static_cast<int>(grid.size()) < size)
    grid.push_back(Eigen::VectorXd::Zero(d));
  return grid;
}

namespace {

// softmax of -eta * losses with max subtraction; infinite losses get
// exactly zero weight
std::vector<double> weights_from_losses(const std::vector<double>& cum, double eta) {
  double best = kInf;
  for (double c : cum) best = std::min(best, c);
  if (best == kInf)
    throw std::runtime_error("all mixture components at infinite loss");
  std::vector<double> w(cum.size());
  double z = 0.0;
  for (std::size_t j = 0; j < cum.size(); ++j) {
    w[j] = cum[j] == kInf ? 0.0 : std::exp(-eta * (cum[j] - best));
    z += w[j];
  }
  for (double& v : w) v /= z;
  return w;
}

}  // namespace

namespace {

// Scoring-rule loss of a single component without materializing the mass
// vector; the log rule is the exact negative log density, including the
// +inf sentinel when the density underflows to zero.
double component_score(const GlmFamily& family, ScoringRule rule,
                       const Eigen::VectorXd& theta, const Eigen::VectorXd& x,
                       double y) {
  if (rule == ScoringRule::log) {
    const double p = family.conditional_density(theta.dot(x), y);
    return p > 0.0 ? -std::log(p) : kInf;
  }
  return score_eval(rule, family.predict(theta, x), y);
}

}  // namespace

std::vector<double> vovk_weights(const GlmFamily& family, ScoringRule rule,
                                 double eta, const LabeledDataset& history,
                                 const std::vector<Eigen::VectorXd>& theta_grid) {
  if (eta <= 0.0) throw std::invalid_argument("eta must be > 0");
  if (theta_grid.empty()) throw std::invalid_argument("empty theta grid");
  std::vector<double> cum(theta_grid.size(), 0.0);
  for (std::size_t j = 0; j < theta_grid.size(); ++j) {
    for (std::size_t i = 0; i < history.size(); ++i) {
      cum[j] += component_score(family, rule, theta_grid[j], history.x[i],
                                history.y[i]);
      if (cum[j] == kInf) break;
    }
  }
  return weights_from_losses(cum, eta);
}

PredictiveDistribution vovk_predict(const GlmFamily& family,
                                    const std::vector<double>& weights,
                                    const std::vector<Eigen::VectorXd>& theta_grid,
                                    const Eigen::VectorXd& x) {
  if (weights.size() != theta_grid.size())
    throw std::invalid_argument("weights/grid size mismatch");
  if (family.id() == FamilyId::gaussian_unit_variance) {
    std::vector<double> means(theta_grid.size()), w = weights;
    for (std::size_t j = 0; j < theta_grid.size(); ++j)
      means[j] = theta_grid[j].dot(x);
    return PredictiveDistribution::gaussian_mixture(std::move(means), std::move(w));
  }
  // discrete: accumulate over the union of the materialized supports
  std::vector<double> labels, mass;
  for (std::size_t j = 0; j < theta_grid.size(); ++j) {
    if (weights[j] == 0.0) continue;
    const PredictiveDistribution p = family.predict(theta_grid[j], x);
    for (std::size_t i = 0; i < p.labels().size(); ++i) {
      if (i >= labels.size()) {
        labels.push_back(p.labels()[i]);
        mass.push_back(0.0);
      }
      mass[i] += weights[j] * p.mass()[i];
    }
  }
  return PredictiveDistribution::categorical(std::move(labels), std::move(mass));
}

double lipschitz_constant(const GlmFamily& family, ScoringRule rule, double T,
                          bool* from_grid) {
  if (from_grid) *from_grid = false;
  if (rule == ScoringRule::log) {
    const std::vector<double> ys = family.label_set().candidates();
    double lip = 0.0;
    const ScalarLoss loss = family.matching_loss();
    // |phi'| is monotone in t for each family; extremes sit at t = +-T
    for (double y : ys)
      for (double t : {-T, T}) lip = std::max(lip, std::abs(loss.d1(t, y)));
    return lip;
  }
  if (from_grid) *from_grid = true;
  const ScalarFn fn = composed_loss(family, rule);
  const std::vector<double> ys = family.label_set().candidates();
  double lip = 0.0;
  constexpr int kGrid = 10000;
  for (double y : ys)
    for (int i = 0; i < kGrid; ++i) {
      const double t = -T + 2.0 * T * i / (kGrid - 1);
      lip = std::max(lip, std::abs(fn.d1(t, y)));
    }
  return lip;
}

RegretReport vovk_online_run(const GlmFamily& family, ScoringRule rule,
                             double eta, const LabeledDataset& sequence,
                             const std::vector<Eigen::VectorXd>& theta_grid,
                             double data_radius, double param_radius) {
  if (eta <= 0.0) throw std::invalid_argument("eta must be > 0");
  if (theta_grid.empty()) throw std::invalid_argument("empty theta grid");

  RegretReport rep;
  std::vector<double> cum(theta_grid.size(), 0.0);
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    const std::vector<double> w = weights_from_losses(cum, eta);
    const PredictiveDistribution mix =
        vovk_predict(family, w, theta_grid, sequence.x[i]);
    rep.cumulative_loss += score_eval(rule, mix, sequence.y[i]);
    for (std::size_t j = 0; j < theta_grid.size(); ++j) {
      if (cum[j] == kInf) continue;
      cum[j] += component_score(family, rule, theta_grid[j], sequence.x[i],
                                sequence.y[i]);
    }
  }
  rep.best_comparator_loss = kInf;
  for (double c : cum)
    rep.best_comparator_loss = std::min(rep.best_comparator_loss, c);
  if (sequence.size() == 0) rep.best_comparator_loss = 0.0;
  rep.regret = rep.cumulative_loss - rep.best_comparator_loss;

  const double d = sequence.d > 0 ? sequence.d : 1;
  rep.lip = lipschitz_constant(family, rule, data_radius * param_radius,
                               &rep.lip_from_grid);
  const double n = static_cast<double>(sequence.size());
  rep.regret_bound =
      5.0 * d / eta * std::log(rep.lip * n / d + std::exp(1.0));
  return rep;
}

PredictiveDistribution MixturePredictor::predict(const GlmFamily& family,
                                                 const Eigen::VectorXd& x) const {
  if (components.empty()) throw std::invalid_argument("empty mixture");
  std::vector<Eigen::VectorXd> thetas;
  std::vector<double> w;
  for (const auto& c : components) {
    thetas.push_back(c.theta);
    w.push_back(c.weight);
  }
  return vovk_predict(family, w, thetas, x);
}

MixturePredictor aha_fit(const GlmFamily& family, ScoringRule rule,
                         const LabeledDataset& data, double B, int K, Rng& rng,
                         const SolverConfig& cfg) {
  if (K < 1) throw std::invalid_argument("K must be >= 1");
  const std::size_t n = data.size();
  if (n < 3) throw std::invalid_argument("aha_fit requires n >= 3");
  const std::size_t sub = (2 * n) / 3;
  const ScalarFn loss = composed_loss(family, rule);

  MixturePredictor out;
  std::vector<double> full_losses(K, 0.0);
  for (int k = 0; k < K; ++k) {
    Rng child = rng.split(static_cast<std::uint64_t>(k));
    // partial Fisher-Yates draw of `sub` indices without replacement
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < sub; ++i) {
      const std::size_t j =
          i + static_cast<std::size_t>(child.uniform() * (n - i));
      std::swap(idx[i], idx[std::min(j, n - 1)]);
    }
    LabeledDataset subset;
    subset.d = data.d;
    for (std::size_t i = 0; i < sub; ++i)
      subset.push_back(data.x[idx[i]], data.y[idx[i]]);

    Eigen::VectorXd theta;
    try {
      theta = fit_mle(family, loss, subset, B, cfg);
    } catch (const std::exception& e) {
      throw std::runtime_error("aha_fit: subsample " + std::to_string(k + 1) +
                               " solver failure: " + e.what());
    }
    double full = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      full += component_score(family, rule, theta, data.x[i], data.y[i]);
    full_losses[k] = full;
    out.components.push_back({theta, 0.0});
  }
  const std::vector<double> w = weights_from_losses(full_losses, 1.0);
  for (int k = 0; k < K; ++k) out.components[k].weight = w[k];
  return out;
}

double risk_estimate(const MixturePredictor& predictor, const GlmFamily& family,
                     ScoringRule rule, const LabeledDataset& test) {
  if (test.size() == 0) throw std::invalid_argument("risk_estimate: empty test set");
  double s = 0.0;
  for (std::size_t i = 0; i < test.size(); ++i)
    s += score_eval(rule, predictor.predict(family, test.x[i]), test.y[i]);
  return s / static_cast<double>(test.size());
}

}  // namespace improper
