#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "improper/families.hpp"
#include "improper/losses.hpp"
#include "improper/rng.hpp"

using namespace improper;
using improper::testing::central_diff;

TEST_CASE("loss_eval closed forms") {
  CHECK(ScalarLoss::logistic().eval(0.0, 1.0) == doctest::Approx(std::log(2.0)));
  CHECK(ScalarLoss::poisson().eval(0.0, 0.0) == doctest::Approx(1.0));
  CHECK(ScalarLoss::gaussian().eval(3.0, 1.0) == doctest::Approx(2.0));
  CHECK(ScalarLoss::geometric().eval(0.0, 0.0) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("derivative closed forms") {
  const ScalarLoss lg = ScalarLoss::logistic();
  CHECK(lg.d1(0.0, 1.0) == doctest::Approx(-0.5));
  CHECK(lg.d2(0.0, 1.0) == doctest::Approx(0.25));

  const ScalarLoss gs = ScalarLoss::gaussian();
  for (double t : {-3.0, 0.0, 7.0}) CHECK(gs.d2(t, 1.0) == 1.0);

  // frozen from the finite-difference oracle on phi at step 1e-5
  const ScalarLoss ps = ScalarLoss::poisson();
  CHECK(ps.d1(1.0, 2.0) == doctest::Approx(std::exp(1.0) - 2.0).epsilon(1e-12));
  CHECK(ps.d2(1.0, 2.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  CHECK(central_diff([&](double t) { return ps.eval(t, 2.0); }, 1.0) ==
        doctest::Approx(std::exp(1.0) - 2.0).epsilon(1e-8));
}

TEST_CASE("derivatives match central differences on a grid") {
  const ScalarLoss losses[] = {ScalarLoss::logistic(), ScalarLoss::geometric(6),
                               ScalarLoss::poisson(6),
                               ScalarLoss::gaussian(-3.0, 3.0)};
  for (const ScalarLoss& loss : losses) {
    for (double y : loss.label_set.candidates(5)) {
      for (int i = 0; i < 25; ++i) {
        const double t = -4.0 + 8.0 * i / 24;
        const double fd1 = central_diff([&](double u) { return loss.eval(u, y); }, t);
        const double fd2 = central_diff([&](double u) { return loss.d1(u, y); }, t);
        CHECK(std::abs(loss.d1(t, y) - fd1) <= 1e-6 * (1.0 + std::abs(loss.d1(t, y))));
        CHECK(std::abs(loss.d2(t, y) - fd2) <= 1e-6 * (1.0 + std::abs(loss.d2(t, y))));
        CHECK(loss.d2(t, y) >= 0.0);  // convexity in t
      }
    }
  }
}

TEST_CASE("evaluation is stable at large |t|") {
  const ScalarLoss lg = ScalarLoss::logistic();
  CHECK(std::isfinite(lg.eval(700.0, 1.0)));
  CHECK(lg.eval(-700.0, 1.0) == doctest::Approx(700.0));
  CHECK(std::isfinite(ScalarLoss::geometric().eval(700.0, 3.0)));
  CHECK(std::isfinite(lg.d1(700.0, -1.0)));
}

TEST_CASE("labels outside the label set are rejected") {
  CHECK_THROWS_AS(ScalarLoss::logistic().eval(0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(ScalarLoss::poisson(5).eval(0.0, 6.0), std::domain_error);
  CHECK_THROWS_AS(ScalarLoss::poisson(5).d1(0.0, 2.5), std::domain_error);
  CHECK_THROWS_AS(ScalarLoss::gaussian(-1.0, 1.0).eval(0.0, 2.0), std::domain_error);
}

TEST_CASE("score_eval closed forms") {
  const auto uniform = PredictiveDistribution::categorical({-1.0, 1.0}, {0.5, 0.5});
  CHECK(score_eval(ScoringRule::log, uniform, 1.0) == doctest::Approx(std::log(2.0)));

  const auto point = PredictiveDistribution::categorical({-1.0, 1.0}, {0.0, 1.0});
  CHECK(score_eval(ScoringRule::quadratic, point, 1.0) == 0.0);

  const auto quarter =
      PredictiveDistribution::categorical({0.0, 1.0, 2.0}, {0.25, 0.5, 0.25});
  CHECK(score_eval(ScoringRule::hellinger, quarter, 0.0) == doctest::Approx(0.25));

  CHECK(score_eval(ScoringRule::log, point, -1.0) ==
        std::numeric_limits<double>::infinity());
  CHECK(score_eval(ScoringRule::squared, quarter, 1.0) == doctest::Approx(0.125));
}

TEST_CASE("bounded rules are nonnegative on random distributions") {
  improper::Rng rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + static_cast<int>(rng.uniform() * 4);
    std::vector<double> labels(k), mass(k);
    double z = 0.0;
    for (int i = 0; i < k; ++i) {
      labels[i] = i;
      mass[i] = -std::log(1.0 - rng.uniform());
      z += mass[i];
    }
    for (double& m : mass) m /= z;
    const auto p = PredictiveDistribution::categorical(labels, mass);
    const double y = std::floor(rng.uniform() * k);
    CHECK(score_eval(ScoringRule::squared, p, y) >= 0.0);
    CHECK(score_eval(ScoringRule::hellinger, p, y) >= 0.0);
    CHECK(score_eval(ScoringRule::quadratic, p, y) >= 0.0);
    CHECK(score_eval(ScoringRule::log, p, y) >= 0.0);
  }
}

TEST_CASE("quadratic rule is permutation equivariant") {
  const auto p = PredictiveDistribution::categorical({0.0, 1.0, 2.0}, {0.2, 0.5, 0.3});
  const auto perm =
      PredictiveDistribution::categorical({2.0, 0.0, 1.0}, {0.3, 0.2, 0.5});
  for (double y : {0.0, 1.0, 2.0})
    CHECK(score_eval(ScoringRule::quadratic, p, y) ==
          doctest::Approx(score_eval(ScoringRule::quadratic, perm, y)).epsilon(1e-15));
}

TEST_CASE("log score agrees with the matching scalar loss up to a constant") {
  const GlmFamily fams[] = {GlmFamily::logistic(), GlmFamily::geometric(8),
                            GlmFamily::poisson(8), GlmFamily::gaussian()};
  for (const GlmFamily& fam : fams) {
    const ScalarLoss loss = fam.matching_loss();
    const double y = fam.label_set().kind() == LabelKind::binary ? 1.0 : 2.0;
    double first = 0.0;
    for (int i = 0; i < 5; ++i) {
      const double u = -1.5 + 0.7 * i;
      const double c =
          score_eval(ScoringRule::log, fam.predict_at(u), y) - loss.eval(u, y);
      if (i == 0)
        first = c;
      else
        CHECK(std::abs(c - first) <= 1e-9);
    }
    if (fam.id() == FamilyId::logistic) CHECK(std::abs(first) <= 1e-12);
    if (fam.id() == FamilyId::gaussian_unit_variance)
      CHECK(first == doctest::Approx(0.5 * std::log(2.0 * M_PI)));
  }
}

TEST_CASE("mixability constants") {
  CHECK(mixability_constant(ScoringRule::log) == 1.0);
  CHECK(mixability_constant(ScoringRule::squared) == 1.0);
  CHECK(mixability_constant(ScoringRule::hellinger) == 3.0);
  CHECK(mixability_constant(ScoringRule::quadratic) == 0.5);
}

TEST_CASE("exp-concavity holds at the table values") {
  for (ScoringRule rule : {ScoringRule::log, ScoringRule::squared,
                           ScoringRule::hellinger, ScoringRule::quadratic}) {
    for (int k : {2, 3}) {
      CHECK(check_exp_concavity(rule, mixability_constant(rule), k, 21).holds);
    }
  }
  CHECK(check_exp_concavity(ScoringRule::hellinger, 27.0 / 8.0, 2, 21).holds);
  CHECK(check_exp_concavity(ScoringRule::hellinger, 27.0 / 8.0, 3, 21).holds);
}

TEST_CASE("log loss at eta = 2 violates midpoint concavity") {
  const ExpConcavityResult r = check_exp_concavity(ScoringRule::log, 2.0, 2, 21);
  CHECK_FALSE(r.holds);
  CHECK(r.deficit > 1e-9);
}

TEST_CASE("exp-concavity input validation") {
  CHECK_THROWS_AS(check_exp_concavity(ScoringRule::log, 1.0, 1, 21),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_exp_concavity(ScoringRule::log, 1.0, 2, 2),
                  std::invalid_argument);
}
