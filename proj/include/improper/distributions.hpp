#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace improper {

// Predictive distribution over the outcome space: an explicit mass vector
// for discrete outcomes, or a mixture of unit-variance Gaussians for real
// outcomes. Discrete masses are exact model probabilities; families with
// unbounded support are materialized up to a tail below 1e-12 and are not
// renormalized.
class PredictiveDistribution {
 public:
  enum class Kind { categorical, gaussian_mixture };

  static PredictiveDistribution categorical(std::vector<double> labels,
                                            std::vector<double> mass) {
    if (labels.size() != mass.size() || labels.empty())
      throw std::invalid_argument("categorical: labels/mass size mismatch");
    PredictiveDistribution p;
    p.kind_ = Kind::categorical;
    p.labels_ = std::move(labels);
    p.mass_ = std::move(mass);
    return p;
  }

  static PredictiveDistribution gaussian(double mean) {
    return gaussian_mixture({mean}, {1.0});
  }

  static PredictiveDistribution gaussian_mixture(std::vector<double> means,
                                                 std::vector<double> weights) {
    if (means.size() != weights.size() || means.empty())
      throw std::invalid_argument("gaussian_mixture: size mismatch");
    PredictiveDistribution p;
    p.kind_ = Kind::gaussian_mixture;
    p.means_ = std::move(means);
    p.weights_ = std::move(weights);
    return p;
  }

  Kind kind() const { return kind_; }
  bool is_discrete() const { return kind_ == Kind::categorical; }

  const std::vector<double>& labels() const { return labels_; }
  const std::vector<double>& mass() const { return mass_; }
  const std::vector<double>& means() const { return means_; }
  const std::vector<double>& weights() const { return weights_; }

  double total_mass() const {
    double s = 0.0;
    if (is_discrete())
      for (double m : mass_) s += m;
    else
      for (double w : weights_) s += w;
    return s;
  }

  // Probability mass at a label; 0 for labels outside the stored support.
  double prob(double y) const {
    if (!is_discrete())
      throw std::domain_error("prob: discrete distribution required");
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == y) return mass_[i];
    return 0.0;
  }

  // pmf for discrete outcomes, pdf for Gaussian mixtures.
  double density(double y) const {
    if (is_discrete()) return prob(y);
    double s = 0.0;
    for (std::size_t i = 0; i < means_.size(); ++i) {
      const double z = y - means_[i];
      s += weights_[i] * std::exp(-0.5 * z * z) * 0.3989422804014326779399461;
    }
    return s;
  }

  double mean() const {
    double s = 0.0;
    if (is_discrete())
      for (std::size_t i = 0; i < labels_.size(); ++i) s += labels_[i] * mass_[i];
    else
      for (std::size_t i = 0; i < means_.size(); ++i) s += means_[i] * weights_[i];
    return s;
  }

 private:
  PredictiveDistribution() = default;

  Kind kind_ = Kind::categorical;
  std::vector<double> labels_, mass_;    // categorical
  std::vector<double> means_, weights_;  // gaussian mixture, unit variance
};

}  // namespace improper
