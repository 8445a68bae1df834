#pragma once

#include <Eigen/Core>
#include <functional>

#include "improper/distributions.hpp"
#include "improper/labels.hpp"
#include "improper/losses.hpp"
#include "improper/rng.hpp"

namespace improper {

enum class FamilyId { logistic, geometric, poisson, gaussian_unit_variance };

std::string family_name(FamilyId id);

// Log-partition calculus of the family's natural form exp(y u - A(u)).
// For the sigmoid-link families this is the Bernoulli form A(u) = log(1+e^u).
struct LogPartition {
  std::function<double(double)> A;
  std::function<double(double)> A1;
  std::function<double(double)> A2;
};

struct KlExpansion {
  double lhs;             // KL(p_t || (p_t + p_u)/2), exact sum/integral
  double quadratic_term;  // (u-t)^2 A''(0) / 8
  double residual;
};

// Generalized-linear conditional family p_theta(y|x) driven by the natural
// parameter u = theta^T x. Distributions with unbounded support are kept
// exact; explicit mass vectors truncate at a tail below 1e-12.
class GlmFamily {
 public:
  static GlmFamily logistic();
  static GlmFamily geometric(int y_max = 10);
  static GlmFamily poisson(int y_max = 10);
  static GlmFamily gaussian(double y_lo = -10.0, double y_hi = 10.0);

  FamilyId id() const { return id_; }
  const LabelSet& label_set() const { return label_set_; }

  // Conditional distribution at natural parameter u.
  PredictiveDistribution predict_at(double u) const;
  PredictiveDistribution predict(const Eigen::VectorXd& theta,
                                 const Eigen::VectorXd& x) const;

  double sample_at(double u, Rng& rng) const;
  double sample(const Eigen::VectorXd& theta, const Eigen::VectorXd& x,
                Rng& rng) const;

  // Exact conditional pmf (density for the Gaussian family).
  double conditional_density(double u, double y) const;

  // d/du log p_u(y) and d^2/du^2 log p_u(y); defined on the true support,
  // not clipped to the declared label set.
  double dlog_density(double u, double y) const;
  double d2log_density(double u, double y) const;

  ScalarLoss matching_loss() const;
  LogPartition log_partition() const;

  // Bregman form A(u) - A(t) - A'(t)(u - t) of KL(p_t || p_u) between the
  // natural-form conditionals.
  double kl_conditional(double t, double u) const;

  // Mixture expansion check: exact KL(p_t || (p_t+p_u)/2) against its
  // quadratic approximation. Requires |t|, |u| <= 1.
  KlExpansion kl_mixture_expansion_check(double t, double u) const;

 private:
  GlmFamily(FamilyId id, LabelSet set) : id_(id), label_set_(set) {}

  FamilyId id_;
  LabelSet label_set_;
};

// Scalar loss induced by scoring the family's prediction at natural
// parameter t: phi(t, y) = rule(p_t(.), y), with exact derivatives.
// The log rule reduces to the family's matching scalar loss.
ScalarFn composed_loss(const GlmFamily& family, ScoringRule rule);

}  // namespace improper
