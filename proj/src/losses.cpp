#include "improper/losses.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace improper {

double log1p_exp(double t) {
  if (t > 30.0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

std::string loss_name(LossId id) {
  switch (id) {
    case LossId::logistic: return "logistic";
    case LossId::geometric: return "geometric";
    case LossId::poisson: return "poisson";
    case LossId::gaussian: return "gaussian";
  }
  return "?";
}

ScalarLoss ScalarLoss::logistic() { return {LossId::logistic, LabelSet::binary()}; }
ScalarLoss ScalarLoss::geometric(int y_max) {
  return {LossId::geometric, LabelSet::bounded_integers(y_max)};
}
ScalarLoss ScalarLoss::poisson(int y_max) {
  return {LossId::poisson, LabelSet::bounded_integers(y_max)};
}
ScalarLoss ScalarLoss::gaussian(double y_lo, double y_hi) {
  return {LossId::gaussian, LabelSet::real_interval(y_lo, y_hi)};
}

namespace {

void require_label(const LabelSet& set, double y) {
  if (!set.contains(y))
    throw std::domain_error("label outside the loss label set: y=" + std::to_string(y));
}

}  // namespace

double ScalarLoss::eval(double t, double y) const {
  require_label(label_set, y);
  switch (id) {
    case LossId::logistic: return log1p_exp(-t * y);
    case LossId::geometric: return (y + 1.0) * log1p_exp(t) - t;
    case LossId::poisson: return std::exp(t) - y * t;
    case LossId::gaussian: return 0.5 * (t - y) * (t - y);
  }
  return 0.0;
}

double ScalarLoss::d1(double t, double y) const {
  require_label(label_set, y);
  switch (id) {
    case LossId::logistic: return -y * sigmoid(-t * y);
    case LossId::geometric: return (y + 1.0) * sigmoid(t) - 1.0;
    case LossId::poisson: return std::exp(t) - y;
    case LossId::gaussian: return t - y;
  }
  return 0.0;
}

double ScalarLoss::d2(double t, double y) const {
  require_label(label_set, y);
  switch (id) {
    case LossId::logistic: {
      const double s = sigmoid(t * y);
      return s * (1.0 - s);
    }
    case LossId::geometric: {
      const double s = sigmoid(t);
      return (y + 1.0) * s * (1.0 - s);
    }
    case LossId::poisson: return std::exp(t);
    case LossId::gaussian: return 1.0;
  }
  return 0.0;
}

ScalarFn to_fn(const ScalarLoss& loss) {
  ScalarFn fn{loss.label_set, loss_name(loss.id), {}, {}, {}};
  fn.f = [loss](double t, double y) { return loss.eval(t, y); };
  fn.d1 = [loss](double t, double y) { return loss.d1(t, y); };
  fn.d2 = [loss](double t, double y) { return loss.d2(t, y); };
  return fn;
}

std::string rule_name(ScoringRule rule) {
  switch (rule) {
    case ScoringRule::log: return "log";
    case ScoringRule::squared: return "squared";
    case ScoringRule::hellinger: return "hellinger";
    case ScoringRule::quadratic: return "quadratic";
  }
  return "?";
}

double score_eval(ScoringRule rule, const PredictiveDistribution& p, double y) {
  switch (rule) {
    case ScoringRule::log: {
      const double py = p.density(y);
      if (py <= 0.0) return std::numeric_limits<double>::infinity();
      return -std::log(py);
    }
    case ScoringRule::squared: {
      const double py = p.density(y);
      return 0.5 * (py - 1.0) * (py - 1.0);
    }
    case ScoringRule::hellinger: {
      const double py = p.density(y);
      const double r = std::sqrt(py) - 1.0;
      return r * r;
    }
    case ScoringRule::quadratic: {
      if (!p.is_discrete())
        throw std::domain_error("quadratic rule requires a discrete outcome space");
      double s = 0.0;
      bool seen = false;
      for (std::size_t i = 0; i < p.labels().size(); ++i) {
        const double e = p.labels()[i] == y ? 1.0 : 0.0;
        seen = seen || e == 1.0;
        const double r = p.mass()[i] - e;
        s += r * r;
      }
      if (!seen) s += 1.0;  // observed label carries zero predicted mass
      return 0.5 * s;
    }
  }
  return 0.0;
}

double mixability_constant(ScoringRule rule) {
  switch (rule) {
    case ScoringRule::log: return 1.0;
    case ScoringRule::squared: return 1.0;
    case ScoringRule::hellinger: return 3.0;
    case ScoringRule::quadratic: return 0.5;
  }
  return 0.0;
}

namespace {

// All k-part compositions of (resolution - 1), i.e. the simplex grid.
void simplex_grid(int k, int resolution, std::vector<std::vector<double>>& out) {
  std::vector<int> counts(k, 0);
  const int total = resolution - 1;
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == k - 1) {
      counts[pos] = left;
      std::vector<double> p(k);
      for (int i = 0; i < k; ++i) p[i] = static_cast<double>(counts[i]) / total;
      out.push_back(std::move(p));
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts[pos] = c;
      rec(pos + 1, left - c);
    }
  };
  rec(0, total);
}

double exp_neg_eta_loss(ScoringRule rule, double eta, const std::vector<double>& p,
                        int y_index) {
  // Inline the rules on a raw simplex point; labels are 0..k-1.
  const double py = p[y_index];
  double loss = 0.0;
  switch (rule) {
    case ScoringRule::log:
      if (py <= 0.0) return 0.0;  // exp(-eta * inf)
      loss = -std::log(py);
      break;
    case ScoringRule::squared:
      loss = 0.5 * (py - 1.0) * (py - 1.0);
      break;
    case ScoringRule::hellinger: {
      const double r = std::sqrt(py) - 1.0;
      loss = r * r;
      break;
    }
    case ScoringRule::quadratic: {
      double s = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        const double r = p[i] - (static_cast<int>(i) == y_index ? 1.0 : 0.0);
        s += r * r;
      }
      loss = 0.5 * s;
      break;
    }
  }
  return std::exp(-eta * loss);
}

}  // namespace

ExpConcavityResult check_exp_concavity(ScoringRule rule, double eta, int k,
                                       int grid_resolution) {
  if (k < 2) throw std::invalid_argument("k must be >= 2");
  if (grid_resolution < 3) throw std::invalid_argument("grid_resolution must be >= 3");
  constexpr double kTol = 1e-9;

  std::vector<std::vector<double>> grid;
  simplex_grid(k, grid_resolution, grid);

  std::vector<double> mid(k);
  ExpConcavityResult res;
  for (int y = 0; y < k; ++y) {
    std::vector<double> fv(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      fv[i] = exp_neg_eta_loss(rule, eta, grid[i], y);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (std::size_t j = i + 1; j < grid.size(); ++j) {
        for (int c = 0; c < k; ++c) mid[c] = 0.5 * (grid[i][c] + grid[j][c]);
        const double fm = exp_neg_eta_loss(rule, eta, mid, y);
        const double avg = 0.5 * (fv[i] + fv[j]);
        if (fm < avg - kTol) {
          res.holds = false;
          res.p1 = grid[i];
          res.p2 = grid[j];
          res.y = static_cast<double>(y);
          res.deficit = avg - fm;
          return res;
        }
      }
    }
  }
  return res;
}

}  // namespace improper
