#include "improper/families.hpp"

#include <cmath>
#include <stdexcept>

namespace improper {

namespace {

constexpr double kTailBound = 1e-12;
constexpr std::size_t kSupportCap = 2'000'000;

double u_of(const Eigen::VectorXd& theta, const Eigen::VectorXd& x) {
  if (theta.size() != x.size())
    throw std::invalid_argument("theta/x dimension mismatch");
  return theta.dot(x);
}

}  // namespace

std::string family_name(FamilyId id) {
  switch (id) {
    case FamilyId::logistic: return "logistic";
    case FamilyId::geometric: return "geometric";
    case FamilyId::poisson: return "poisson";
    case FamilyId::gaussian_unit_variance: return "gaussian";
  }
  return "?";
}

GlmFamily GlmFamily::logistic() {
  return GlmFamily(FamilyId::logistic, LabelSet::binary());
}
GlmFamily GlmFamily::geometric(int y_max) {
  return GlmFamily(FamilyId::geometric, LabelSet::bounded_integers(y_max));
}
GlmFamily GlmFamily::poisson(int y_max) {
  return GlmFamily(FamilyId::poisson, LabelSet::bounded_integers(y_max));
}
GlmFamily GlmFamily::gaussian(double y_lo, double y_hi) {
  return GlmFamily(FamilyId::gaussian_unit_variance, LabelSet::real_interval(y_lo, y_hi));
}

double GlmFamily::conditional_density(double u, double y) const {
  switch (id_) {
    case FamilyId::logistic:
      return sigmoid(y * u);
    case FamilyId::geometric:
      // log p = u - (y+1) log(1+e^u)
      return std::exp(u - (y + 1.0) * log1p_exp(u));
    case FamilyId::poisson:
      return std::exp(-std::exp(u) + y * u - std::lgamma(y + 1.0));
    case FamilyId::gaussian_unit_variance: {
      const double z = y - u;
      return std::exp(-0.5 * z * z) * 0.3989422804014326779399461;
    }
  }
  return 0.0;
}

double GlmFamily::dlog_density(double u, double y) const {
  switch (id_) {
    case FamilyId::logistic: return y * sigmoid(-y * u);
    case FamilyId::geometric: return 1.0 - (y + 1.0) * sigmoid(u);
    case FamilyId::poisson: return y - std::exp(u);
    case FamilyId::gaussian_unit_variance: return y - u;
  }
  return 0.0;
}

double GlmFamily::d2log_density(double u, double y) const {
  switch (id_) {
    case FamilyId::logistic: {
      const double s = sigmoid(y * u);
      return -s * (1.0 - s);
    }
    case FamilyId::geometric: {
      const double s = sigmoid(u);
      return -(y + 1.0) * s * (1.0 - s);
    }
    case FamilyId::poisson: return -std::exp(u);
    case FamilyId::gaussian_unit_variance: return -1.0;
  }
  return 0.0;
}

PredictiveDistribution GlmFamily::predict_at(double u) const {
  switch (id_) {
    case FamilyId::logistic:
      return PredictiveDistribution::categorical({-1.0, 1.0},
                                                 {sigmoid(-u), sigmoid(u)});
    case FamilyId::geometric: {
      const double a = log1p_exp(u);  // -log(1 - lambda)
      // tail after y: exp(-(y+1) a) <= kTailBound
      const double count_d = std::ceil(-std::log(kTailBound) / a);
      if (!(count_d < static_cast<double>(kSupportCap)))
        throw std::domain_error("geometric support too large to materialize");
      const std::size_t count = static_cast<std::size_t>(count_d);
      std::vector<double> labels(count), mass(count);
      for (std::size_t y = 0; y < count; ++y) {
        labels[y] = static_cast<double>(y);
        mass[y] = conditional_density(u, labels[y]);
      }
      return PredictiveDistribution::categorical(std::move(labels), std::move(mass));
    }
    case FamilyId::poisson: {
      const double mu = std::exp(u);
      if (!(mu < static_cast<double>(kSupportCap) / 2))
        throw std::domain_error("poisson mean too large to materialize");
      std::vector<double> labels, mass;
      double cum = 0.0;
      for (std::size_t y = 0; y < kSupportCap; ++y) {
        const double p = conditional_density(u, static_cast<double>(y));
        labels.push_back(static_cast<double>(y));
        mass.push_back(p);
        cum += p;
        if (cum >= 1.0 - kTailBound && static_cast<double>(y) > mu) break;
      }
      return PredictiveDistribution::categorical(std::move(labels), std::move(mass));
    }
    case FamilyId::gaussian_unit_variance:
      return PredictiveDistribution::gaussian(u);
  }
  throw std::logic_error("unreachable");
}

PredictiveDistribution GlmFamily::predict(const Eigen::VectorXd& theta,
                                          const Eigen::VectorXd& x) const {
  return predict_at(u_of(theta, x));
}

double GlmFamily::sample_at(double u, Rng& rng) const {
  switch (id_) {
    case FamilyId::logistic:
      return rng.uniform() < sigmoid(u) ? 1.0 : -1.0;
    case FamilyId::geometric: {
      // inverse cdf: y = floor(log(1-U) / log(1-lambda))
      const double a = log1p_exp(u);
      double un = rng.uniform();
      return std::floor(-std::log1p(-un) / a);
    }
    case FamilyId::poisson: {
      const double mu = std::exp(u);
      if (mu > 700.0)
        throw std::domain_error("poisson natural parameter too large to sample");
      const double un = rng.uniform();
      double p = std::exp(-mu), cum = p;
      double y = 0.0;
      while (un > cum && y < 1e9) {
        y += 1.0;
        p *= mu / y;
        cum += p;
      }
      return y;
    }
    case FamilyId::gaussian_unit_variance:
      return u + rng.normal();
  }
  return 0.0;
}

double GlmFamily::sample(const Eigen::VectorXd& theta, const Eigen::VectorXd& x,
                         Rng& rng) const {
  return sample_at(u_of(theta, x), rng);
}

ScalarLoss GlmFamily::matching_loss() const {
  switch (id_) {
    case FamilyId::logistic: return ScalarLoss::logistic();
    case FamilyId::geometric:
      return {LossId::geometric, label_set_};
    case FamilyId::poisson:
      return {LossId::poisson, label_set_};
    case FamilyId::gaussian_unit_variance:
      return {LossId::gaussian, label_set_};
  }
  throw std::logic_error("unreachable");
}

LogPartition GlmFamily::log_partition() const {
  switch (id_) {
    case FamilyId::logistic:
    case FamilyId::geometric:
      return {[](double u) { return log1p_exp(u); },
              [](double u) { return sigmoid(u); },
              [](double u) {
                const double s = sigmoid(u);
                return s * (1.0 - s);
              }};
    case FamilyId::poisson:
      return {[](double u) { return std::exp(u); },
              [](double u) { return std::exp(u); },
              [](double u) { return std::exp(u); }};
    case FamilyId::gaussian_unit_variance:
      return {[](double u) { return 0.5 * u * u; }, [](double u) { return u; },
              [](double) { return 1.0; }};
  }
  throw std::logic_error("unreachable");
}

double GlmFamily::kl_conditional(double t, double u) const {
  const LogPartition lp = log_partition();
  return lp.A(u) - lp.A(t) - lp.A1(t) * (u - t);
}

namespace {

// Natural-form pmf exp(y u - A(u)): Bernoulli for the sigmoid-link
// families, Poisson for the exponential link, N(u,1) for the Gaussian.
double natural_pmf(FamilyId id, double u, double y) {
  switch (id) {
    case FamilyId::logistic:
    case FamilyId::geometric:
      return y == 1.0 ? sigmoid(u) : sigmoid(-u);
    case FamilyId::poisson:
      return std::exp(-std::exp(u) + y * u - std::lgamma(y + 1.0));
    case FamilyId::gaussian_unit_variance: {
      const double z = y - u;
      return std::exp(-0.5 * z * z) * 0.3989422804014326779399461;
    }
  }
  return 0.0;
}

double kl_term(double pt, double mix) {
  if (pt <= 0.0) return 0.0;
  return pt * std::log(pt / mix);
}

}  // namespace

KlExpansion GlmFamily::kl_mixture_expansion_check(double t, double u) const {
  if (std::abs(t) > 1.0 || std::abs(u) > 1.0)
    throw std::invalid_argument("kl_mixture_expansion_check requires |t|,|u| <= 1");

  double lhs = 0.0;
  switch (id_) {
    case FamilyId::logistic:
    case FamilyId::geometric: {
      for (double y : {0.0, 1.0}) {
        const double pt = natural_pmf(id_, t, y);
        const double pu = natural_pmf(id_, u, y);
        lhs += kl_term(pt, 0.5 * (pt + pu));
      }
      break;
    }
    case FamilyId::poisson: {
      // truncated series; tail below 1e-14 of p_t mass
      double cum = 0.0;
      const double mu = std::exp(t);
      for (long y = 0; y < 100000; ++y) {
        const double pt = natural_pmf(id_, t, static_cast<double>(y));
        const double pu = natural_pmf(id_, u, static_cast<double>(y));
        lhs += kl_term(pt, 0.5 * (pt + pu));
        cum += pt;
        if (cum >= 1.0 - 1e-14 && static_cast<double>(y) > mu + 10.0) break;
      }
      break;
    }
    case FamilyId::gaussian_unit_variance: {
      // composite Simpson over +-12 sd around both means
      const double lo = std::min(t, u) - 12.0, hi = std::max(t, u) + 12.0;
      const int n = 48000;  // even
      const double h = (hi - lo) / n;
      double s = 0.0;
      for (int i = 0; i <= n; ++i) {
        const double y = lo + i * h;
        const double pt = natural_pmf(id_, t, y);
        const double pu = natural_pmf(id_, u, y);
        const double v = kl_term(pt, 0.5 * (pt + pu));
        s += (i == 0 || i == n) ? v : (i % 2 == 1 ? 4.0 * v : 2.0 * v);
      }
      lhs = s * h / 3.0;
      break;
    }
  }

  const double a2_0 = log_partition().A2(0.0);
  const double quad = (u - t) * (u - t) * a2_0 / 8.0;
  return {lhs, quad, lhs - quad};
}

ScalarFn composed_loss(const GlmFamily& family, ScoringRule rule) {
  if (rule == ScoringRule::log) return to_fn(family.matching_loss());
  if (rule == ScoringRule::quadratic &&
      family.id() == FamilyId::gaussian_unit_variance)
    throw std::domain_error("quadratic rule requires a discrete outcome space");

  GlmFamily fam = family;
  ScalarFn fn{family.label_set(),
              family_name(family.id()) + "+" + rule_name(rule),
              {}, {}, {}};

  auto check_y = [fam](double y) {
    switch (fam.id()) {
      case FamilyId::logistic:
        if (y != 1.0 && y != -1.0) throw std::domain_error("label must be +-1");
        break;
      case FamilyId::geometric:
      case FamilyId::poisson:
        if (y < 0.0 || y != std::floor(y))
          throw std::domain_error("label must be a nonnegative integer");
        break;
      case FamilyId::gaussian_unit_variance:
        if (!std::isfinite(y)) throw std::domain_error("label must be finite");
        break;
    }
  };

  if (rule == ScoringRule::squared || rule == ScoringRule::hellinger) {
    const bool hell = rule == ScoringRule::hellinger;
    fn.f = [fam, check_y, hell](double t, double y) {
      check_y(y);
      const double g = fam.conditional_density(t, y);
      if (hell) {
        const double r = std::sqrt(g) - 1.0;
        return r * r;
      }
      return 0.5 * (g - 1.0) * (g - 1.0);
    };
    fn.d1 = [fam, check_y, hell](double t, double y) {
      check_y(y);
      const double g = fam.conditional_density(t, y);
      const double s1 = fam.dlog_density(t, y);
      if (hell) return s1 * (g - std::sqrt(g));
      return (g - 1.0) * g * s1;
    };
    fn.d2 = [fam, check_y, hell](double t, double y) {
      check_y(y);
      const double g = fam.conditional_density(t, y);
      const double s1 = fam.dlog_density(t, y);
      const double s2 = fam.d2log_density(t, y);
      if (hell)
        return 0.5 * std::sqrt(g) * s1 * s1 + (g - std::sqrt(g)) * (s1 * s1 + s2);
      return g * g * s1 * s1 + (g - 1.0) * g * (s1 * s1 + s2);
    };
    return fn;
  }

  // quadratic over a discrete family: sums over the materialized support
  fn.f = [fam, check_y](double t, double y) {
    check_y(y);
    const PredictiveDistribution p = fam.predict_at(t);
    double s = 0.0;
    bool seen = false;
    for (std::size_t i = 0; i < p.labels().size(); ++i) {
      const double e = p.labels()[i] == y ? 1.0 : 0.0;
      seen = seen || e == 1.0;
      const double r = p.mass()[i] - e;
      s += r * r;
    }
    if (!seen) s += 1.0;
    return 0.5 * s;
  };
  fn.d1 = [fam, check_y](double t, double y) {
    check_y(y);
    const PredictiveDistribution p = fam.predict_at(t);
    double s = 0.0;
    for (std::size_t i = 0; i < p.labels().size(); ++i) {
      const double pk = p.mass()[i];
      s += pk * pk * fam.dlog_density(t, p.labels()[i]);
    }
    const double py = fam.conditional_density(t, y);
    return s - py * fam.dlog_density(t, y);
  };
  fn.d2 = [fam, check_y](double t, double y) {
    check_y(y);
    const PredictiveDistribution p = fam.predict_at(t);
    double s = 0.0;
    for (std::size_t i = 0; i < p.labels().size(); ++i) {
      const double pk = p.mass()[i];
      const double s1 = fam.dlog_density(t, p.labels()[i]);
      const double s2 = fam.d2log_density(t, p.labels()[i]);
      s += pk * pk * (2.0 * s1 * s1 + s2);
    }
    const double py = fam.conditional_density(t, y);
    const double s1y = fam.dlog_density(t, y);
    const double s2y = fam.d2log_density(t, y);
    return s - py * (s1y * s1y + s2y);
  };
  return fn;
}

}  // namespace improper
