#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "improper/families.hpp"
#include "improper/losses.hpp"

namespace improper {

// Problem radii and perturbation budget.
struct Radii {
  double data_radius;   // R > 0
  double param_radius;  // B > 0
  double perturbation;  // gamma in [0, 1]
  long sample_size;     // n >= 1

  Radii(double R, double B, double gamma, long n)
      : data_radius(R), param_radius(B), perturbation(gamma), sample_size(n) {
    if (!(R > 0.0) || !(B > 0.0)) throw std::invalid_argument("radii must be positive");
    if (!(gamma >= 0.0 && gamma <= 1.0))
      throw std::invalid_argument("perturbation must lie in [0,1]");
    if (n < 1) throw std::invalid_argument("sample size must be >= 1");
  }

  double rb() const { return data_radius * param_radius; }
};

struct QWorstResult {
  double q = 0.0;
  bool feasible = false;
  double alpha = 0.0;
  double y0 = 0.0;
};

// Worst-case mixing weight: supremum of a/(a - b) over alpha in [-1,1] and
// y0 candidates, where a = alpha * phi'(alpha t, y0), b = phi'(t, y), subject
// to sign(a) != sign(b). Returns q = 0 (infeasible) when phi'(t, y) = 0 or
// no candidate satisfies the sign constraint.
QWorstResult q_worst(const ScalarFn& loss, double t, double y,
                     int alpha_grid = 2001,
                     const std::vector<double>& y0_candidates = {});
QWorstResult q_worst(const ScalarLoss& loss, double t, double y,
                     int alpha_grid = 2001);

struct LinearityConfig {
  int t_delta_grid = 201;   // grid per axis over the admissible disk
  int delta_sup_grid = 101; // minimum resolution of the inner curvature sup
  int alpha_grid = 201;     // inner q grid
  int y_candidates = 101;   // label candidates for continuous outcome sets
  bool refine = true;       // one golden-section pass around the best cell
};

struct LinearityResult {
  double lambda = 0.0;
  double t = 0.0, delta = 0.0, y = 0.0;  // argmax
  double q = 0.0;
};

// The loss's linearity constant: sup over y and the disk 2(t^2+d^2) <= R^2B^2
// of |phi'| * min{ delta*sqrt(gamma q), |phi'| q / (sup phi'' * sqrt(2n)) }.
LinearityResult linearity_constant(const ScalarFn& loss, const Radii& radii,
                                   const LinearityConfig& cfg = {});
LinearityResult linearity_constant(const ScalarLoss& loss, const Radii& radii,
                                   const LinearityConfig& cfg = {});

// lambda / (4 sqrt(n))
double minimax_lower_bound(double lambda, long n);

// Closed-form bound shapes for the four worked models, with the unspecified
// numerical constants set to 1. A shape calculator, not a certified bound.
double closed_form_bound(LossId example, const Radii& radii, double diam_Y);

struct RateProbeResult {
  bool applicable = false;
  std::string reason;
  double t = 0.0, y = 0.0, q = 0.0;
  std::vector<std::pair<long, double>> points;  // (n, lambda_n)
  double slope = 0.0;                           // fitted log-log slope
};

// Evaluates the lower-bound expression at delta = n^{-1/4} at a point where
// the curvature vanishes but the slope does not; reports the decay rate.
RateProbeResult rate_probe(const ScalarFn& loss, const Radii& radii,
                           const std::vector<long>& n_list, int t_grid = 2001,
                           int delta_sup_grid = 101);

// Raised when the Le Cam construction is infeasible at the requested point.
struct construction_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WeightedAtom {
  Eigen::VectorXd x;
  double y;
  double mass;
};

struct ThreePointDistribution {
  std::vector<WeightedAtom> atoms;
};

// (1 - gamma) P0 + gamma P_sigma, with P0 putting all X-mass at the origin
// and Y | X = 0 following the family's theta = 0 conditional.
struct PerturbedDistribution {
  double gamma = 1.0;
  std::vector<WeightedAtom> atoms;  // the three atoms, masses scaled by gamma
};

// The Le Cam construction bundle.
struct HardInstance {
  ScalarLoss loss;
  Radii radii;
  Eigen::VectorXd v, w;
  double t, delta, epsilon, q, alpha, y, y0;
  ThreePointDistribution P_plus, P_minus, P_zero;
  double sep_lower;  // (q eps / 2) |phi'(t,y)| delta
  double kl_exact;   // q eps log((1+eps)/(1-eps))
  double kl_bound;   // q eps^2 (recorded; see certificate flag)
  double gamma = 1.0;
  std::optional<PerturbedDistribution> Q_plus, Q_minus;
  double sep_lower_perturbed = 0.0;  // gamma * sep_lower
  double kl_upper_perturbed = 0.0;   // gamma * kl_exact

  GlmFamily family() const;
};

HardInstance build_hard_instance(const ScalarLoss& loss, const Radii& radii,
                                 double t, double y, double epsilon, int d,
                                 int alpha_grid = 2001, int delta_sup_grid = 101);

HardInstance perturb_instance(const HardInstance& instance, double gamma);

// Risk of theta under a weighted-atom distribution: sum m * phi(theta^T x, y).
double atoms_risk(const std::vector<WeightedAtom>& atoms, const ScalarFn& loss,
                  const Eigen::VectorXd& theta);

// Mean loss of the zero predictor under the family's theta=0 conditional.
double origin_mean_loss(FamilyId id);

// Risk functional of the instance's P_sigma or (when perturbed) Q_sigma.
std::function<double(const Eigen::VectorXd&)> instance_risk(const HardInstance&,
                                                            int sigma,
                                                            bool perturbed = false);

// Grids over the parameter ball for brute-force scans. d = 1 or 2.
std::vector<Eigen::VectorXd> make_theta_ball_grid(int d, double B, int resolution);

// Largest eps (bisection to `tolerance`) such that no grid point is
// eps-optimal for both risks simultaneously.
double separation_bruteforce(const std::function<double(const Eigen::VectorXd&)>& f_plus,
                             const std::function<double(const Eigen::VectorXd&)>& f_minus,
                             const std::vector<Eigen::VectorXd>& theta_grid,
                             double tolerance);

struct SeparationCertificate {
  double sep_lower = 0.0;
  double kl_exact = 0.0;
  double kl_bound = 0.0;
  int grid_resolution = 0;
  double sep_bruteforce = 0.0;
  double kl_direct = 0.0;       // summed over the support directly
  double lecam_value = 0.0;     // gamma sep (1 - sqrt(n gamma KL / 2))
  bool kl_bound_holds = false;  // recorded, not asserted (see README)
  double epsilon_recommended = 0.0;
  bool epsilon_feasible = false;  // eps^2 <= 1/3
  bool pass = false;
  std::string failure;
};

SeparationCertificate verify_instance(const HardInstance& instance,
                                      const std::vector<Eigen::VectorXd>& theta_grid,
                                      double tolerance = 1e-4);

}  // namespace improper
