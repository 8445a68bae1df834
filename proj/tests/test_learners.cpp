#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "helpers.hpp"
#include "improper/learners.hpp"

using namespace improper;

namespace {

LabeledDataset gaussian_rows(int n, int d, std::uint64_t seed, double spread = 1.0) {
  Rng rng(seed);
  LabeledDataset data;
  data.d = d;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd x(d);
    for (int j = 0; j < d; ++j) x(j) = spread * rng.normal();
    data.push_back(x, rng.normal());
  }
  return data;
}

}  // namespace

TEST_CASE("fit_mle degenerate ball") {
  const LabeledDataset data = gaussian_rows(20, 3, 5);
  const Eigen::VectorXd theta =
      fit_mle(GlmFamily::gaussian(), GlmFamily::gaussian().matching_loss(), data, 0.0);
  CHECK(theta.norm() == 0.0);
}

TEST_CASE("fit_mle matches the normal equations when unconstrained") {
  Rng rng(11);
  LabeledDataset data;
  data.d = 3;
  Eigen::VectorXd truth(3);
  truth << 0.3, -0.2, 0.1;
  for (int i = 0; i < 50; ++i) {
    Eigen::VectorXd x(3);
    for (int j = 0; j < 3; ++j) x(j) = rng.normal();
    data.push_back(x, truth.dot(x) + 0.1 * rng.normal());
  }
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(3, 3);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(3);
  for (std::size_t i = 0; i < data.size(); ++i) {
    G += data.x[i] * data.x[i].transpose();
    b += data.y[i] * data.x[i];
  }
  const Eigen::VectorXd exact = G.ldlt().solve(b);
  REQUIRE(exact.norm() < 5.0);  // interior of the ball below

  const Eigen::VectorXd theta =
      fit_mle(GlmFamily::gaussian(), GlmFamily::gaussian().matching_loss(), data, 5.0);
  CHECK((theta - exact).norm() <= 1e-6);
}

TEST_CASE("fit_mle hits the boundary on separable logistic data") {
  LabeledDataset data;
  data.d = 2;
  Eigen::VectorXd x1(2), x2(2);
  x1 << 1.0, 0.0;
  x2 << -1.0, 0.0;
  data.push_back(x1, 1.0);
  data.push_back(x2, -1.0);
  const double B = 0.5;
  const Eigen::VectorXd theta =
      fit_mle(GlmFamily::logistic(), ScalarLoss::logistic(), data, B);
  CHECK(theta.norm() == doctest::Approx(B).epsilon(1e-8));

  // 1-d scan along the margin direction confirms the boundary optimum
  const ScalarLoss loss = ScalarLoss::logistic();
  double best = 1e18, best_b = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double bb = -B + 2.0 * B * i / 1000;
    const double obj = loss.eval(bb, 1.0) + loss.eval(bb, 1.0);
    if (obj < best) {
      best = obj;
      best_b = bb;
    }
  }
  CHECK(best_b == doctest::Approx(B));
  CHECK(theta(0) == doctest::Approx(B).epsilon(1e-6));
}

TEST_CASE("fit_mle objective decreases across accepted steps") {
  const LabeledDataset data = gaussian_rows(40, 2, 3);
  const GlmFamily fam = GlmFamily::gaussian();
  std::vector<double> trace;
  SolverConfig cfg;
  cfg.trace = &trace;
  fit_mle(fam, fam.matching_loss(), data, 2.0, cfg);
  REQUIRE(trace.size() >= 2);
  for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1]);
}

TEST_CASE("theta grids have the requested size and stay in the ball") {
  const auto g2 = make_theta_grid(2, 1.5, 512, 0);
  CHECK(g2.size() == 512);
  for (const auto& p : g2) CHECK(p.norm() <= 1.5 + 1e-12);
  const auto g10 = make_theta_grid(10, 1.0, 4096, 7);
  CHECK(g10.size() == 4096);
  for (const auto& p : g10) CHECK(p.norm() <= 1.0 + 1e-12);
  // deterministic given the seed
  const auto g10b = make_theta_grid(10, 1.0, 4096, 7);
  CHECK((g10[17] - g10b[17]).norm() == 0.0);
}

TEST_CASE("vovk weights: uniform on empty history, softmax afterwards") {
  const GlmFamily fam = GlmFamily::gaussian();
  LabeledDataset empty;
  empty.d = 1;
  Eigen::VectorXd a(1), b(1);
  a << 0.0;
  b << std::sqrt(2.0);
  const std::vector<Eigen::VectorXd> grid = {a, b};
  const auto w0 = vovk_weights(fam, ScoringRule::log, 1.0, empty, grid);
  CHECK(w0[0] == 0.5);
  CHECK(w0[1] == 0.5);

  const auto w1 = vovk_weights(fam, ScoringRule::log, 1.0, empty, {a});
  CHECK(w1[0] == 1.0);

  // one observation at x = 1, y = 0: losses differ by exactly 1
  LabeledDataset hist;
  hist.d = 1;
  Eigen::VectorXd x(1);
  x << 1.0;
  hist.push_back(x, 0.0);
  const auto w = vovk_weights(fam, ScoringRule::log, 1.0, hist, grid);
  const double e = std::exp(1.0);
  CHECK(w[0] == doctest::Approx(e / (e + 1.0)).epsilon(1e-12));
  CHECK(w[1] == doctest::Approx(1.0 / (e + 1.0)).epsilon(1e-12));
}

TEST_CASE("vovk weights are shift invariant") {
  const GlmFamily fam = GlmFamily::gaussian();
  Eigen::VectorXd a(1), b(1), c(1);
  a << -0.5;
  b << 0.3;
  c << 1.1;
  const std::vector<Eigen::VectorXd> grid = {a, b, c};
  LabeledDataset hist;
  hist.d = 1;
  Eigen::VectorXd x1(1), x0(1);
  x1 << 1.0;
  x0 << 0.0;  // x = 0 adds the same loss to every component
  hist.push_back(x1, 0.4);
  const auto w = vovk_weights(fam, ScoringRule::log, 1.0, hist, grid);
  hist.push_back(x0, 0.7);
  const auto ws = vovk_weights(fam, ScoringRule::log, 1.0, hist, grid);
  for (int j = 0; j < 3; ++j) CHECK(std::abs(w[j] - ws[j]) <= 1e-12);
}

TEST_CASE("vovk weights zero out infinite-loss components") {
  const GlmFamily fam = GlmFamily::logistic();
  // theta large enough that sigmoid saturates to exactly 1/0 in doubles
  Eigen::VectorXd good(1), bad(1);
  good << 0.1;
  bad << -800.0;
  LabeledDataset hist;
  hist.d = 1;
  Eigen::VectorXd x(1);
  x << 1.0;
  hist.push_back(x, 1.0);
  const auto w =
      vovk_weights(fam, ScoringRule::log, 1.0, hist, {good, bad});
  CHECK(w[1] == 0.0);
  CHECK(w[0] == 1.0);

  CHECK_THROWS_AS(vovk_weights(fam, ScoringRule::log, 1.0, hist, {bad}),
                  std::runtime_error);
}

TEST_CASE("vovk_predict mixes component predictions") {
  const GlmFamily fam = GlmFamily::logistic();
  Eigen::VectorXd th(2), x(2);
  th << 0.7, -0.2;
  x << 0.5, 1.0;

  const auto single = vovk_predict(fam, {1.0}, {th}, x);
  const auto direct = fam.predict(th, x);
  CHECK(single.prob(1.0) == doctest::Approx(direct.prob(1.0)).epsilon(1e-15));

  const auto sym = vovk_predict(fam, {0.5, 0.5}, {th, -th}, x);
  CHECK(sym.prob(1.0) == doctest::Approx(0.5).epsilon(1e-15));

  Eigen::VectorXd t1(1), t2(1), t3(1), xq(1);
  t1 << -0.3;
  t2 << 0.1;
  t3 << 0.9;
  xq << 1.0;
  const std::vector<double> w = {0.2, 0.3, 0.5};
  const auto mix = vovk_predict(fam, w, {t1, t2, t3}, xq);
  for (double y : {-1.0, 1.0}) {
    double expect = 0.0;
    for (int j = 0; j < 3; ++j)
      expect += w[j] *
                fam.predict(std::vector<Eigen::VectorXd>{t1, t2, t3}[j], xq).prob(y);
    CHECK(mix.prob(y) == doctest::Approx(expect).epsilon(1e-15));
  }
}

TEST_CASE("mixture predictions stay valid distributions under random weights") {
  Rng rng(41);
  for (const GlmFamily& fam :
       {GlmFamily::logistic(), GlmFamily::geometric(8), GlmFamily::poisson(8)}) {
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<Eigen::VectorXd> grid;
      std::vector<double> w;
      double z = 0.0;
      for (int j = 0; j < 4; ++j) {
        Eigen::VectorXd th(2);
        th << rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0);
        grid.push_back(th);
        w.push_back(-std::log(1.0 - rng.uniform()));
        z += w.back();
      }
      for (double& v : w) v /= z;
      Eigen::VectorXd x(2);
      x << rng.normal(), rng.normal();
      const auto mix = vovk_predict(fam, w, grid, x);
      CHECK(mix.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
      for (double m : mix.mass()) CHECK(m >= 0.0);
    }
  }
}

TEST_CASE("online run: empty sequence and the classic log-grid bound") {
  const GlmFamily fam = GlmFamily::logistic();
  const auto grid = make_theta_grid(2, 1.0, 64, 0);
  LabeledDataset empty;
  empty.d = 2;
  const RegretReport r0 =
      vovk_online_run(fam, ScoringRule::log, 1.0, empty, grid, 1.0, 1.0);
  CHECK(r0.regret == 0.0);

  // a constant repeated example: exponential weights regret <= log |grid|
  LabeledDataset rep;
  rep.d = 2;
  Eigen::VectorXd x(2);
  x << 0.8, -0.4;
  for (int i = 0; i < 200; ++i) rep.push_back(x, 1.0);
  const RegretReport rr =
      vovk_online_run(fam, ScoringRule::log, 1.0, rep, grid, 1.0, 1.0);
  CHECK(rr.regret <= std::log(static_cast<double>(grid.size())) + 1e-9);
  CHECK(rr.regret >= -1e-9);
}

TEST_CASE("online run stays within the logarithmic bound on random sequences") {
  const GlmFamily fam = GlmFamily::logistic();
  const auto grid = make_theta_grid(2, 1.5, 128, 0);
  Rng rng(21);
  LabeledDataset seq;
  seq.d = 2;
  for (int i = 0; i < 300; ++i) {
    Eigen::VectorXd x(2);
    x << rng.normal(), rng.normal();
    if (x.norm() > 2.0) x *= 2.0 / x.norm();
    seq.push_back(x, rng.uniform() < 0.5 ? 1.0 : -1.0);
  }
  const RegretReport r =
      vovk_online_run(fam, ScoringRule::log, 1.0, seq, grid, 2.0, 1.5);
  CHECK(r.regret <= r.regret_bound);
  CHECK_FALSE(r.lip_from_grid);
  CHECK(r.lip == doctest::Approx(sigmoid(2.0 * 1.5)));
}

TEST_CASE("online run with the squared rule uses the grid Lipschitz fallback") {
  const GlmFamily fam = GlmFamily::logistic();
  const auto grid = make_theta_grid(2, 1.0, 64, 0);
  Rng rng(33);
  LabeledDataset seq;
  seq.d = 2;
  for (int i = 0; i < 120; ++i) {
    Eigen::VectorXd x(2);
    x << rng.normal(), rng.normal();
    if (x.norm() > 1.5) x *= 1.5 / x.norm();
    seq.push_back(x, rng.uniform() < 0.5 ? 1.0 : -1.0);
  }
  const RegretReport r = vovk_online_run(fam, ScoringRule::squared,
                                         mixability_constant(ScoringRule::squared),
                                         seq, grid, 1.5, 1.0);
  CHECK(r.lip_from_grid);
  CHECK(r.lip > 0.0);
  CHECK(r.regret <= r.regret_bound);
}

TEST_CASE("per-round mixability inequality at the table constants") {
  const GlmFamily fam = GlmFamily::logistic();
  const auto grid = make_theta_grid(2, 1.0, 32, 0);
  Rng rng(9);
  LabeledDataset seq;
  seq.d = 2;
  for (int i = 0; i < 40; ++i) {
    Eigen::VectorXd x(2);
    x << rng.normal(), rng.normal();
    seq.push_back(x, rng.uniform() < 0.5 ? 1.0 : -1.0);
  }
  for (ScoringRule rule : {ScoringRule::log, ScoringRule::squared,
                           ScoringRule::hellinger, ScoringRule::quadratic}) {
    const double eta = mixability_constant(rule);
    for (std::size_t t = 0; t < seq.size(); ++t) {
      const LabeledDataset hist = seq.head(t);
      const auto w = vovk_weights(fam, rule, eta, hist, grid);
      const auto mix = vovk_predict(fam, w, grid, seq.x[t]);
      const double mix_loss = score_eval(rule, mix, seq.y[t]);
      double z = 0.0;
      for (std::size_t j = 0; j < grid.size(); ++j) {
        const double lj =
            score_eval(rule, fam.predict(grid[j], seq.x[t]), seq.y[t]);
        z += w[j] * std::exp(-eta * lj);
      }
      CHECK(mix_loss <= -std::log(z) / eta + 1e-9);
    }
  }
}

TEST_CASE("aha: single subsample and exact uniformity") {
  const GlmFamily fam = GlmFamily::gaussian();
  const LabeledDataset data = gaussian_rows(30, 2, 13);
  Rng rng(5);
  const MixturePredictor one = aha_fit(fam, ScoringRule::log, data, 1.0, 1, rng);
  CHECK(one.components.size() == 1);
  CHECK(one.components[0].weight == 1.0);

  // B = 0 forces every subsample fit to zero: weights exactly uniform
  Rng rng2(5);
  const MixturePredictor four = aha_fit(fam, ScoringRule::log, data, 0.0, 4, rng2);
  for (const auto& c : four.components) CHECK(c.weight == 0.25);
}

TEST_CASE("aha weights match direct exponentiation at small losses") {
  const GlmFamily fam = GlmFamily::logistic();
  Rng gen(77);
  LabeledDataset data;
  data.d = 2;
  Eigen::VectorXd truth(2);
  truth << 0.6, -0.3;
  for (int i = 0; i < 12; ++i) {
    Eigen::VectorXd x(2);
    x << gen.normal(), gen.normal();
    data.push_back(x, fam.sample(truth, x, gen));
  }
  Rng rng(31);
  const MixturePredictor mix = aha_fit(fam, ScoringRule::log, data, 1.0, 3, rng);
  // recompute full-sample losses and normalize without log-space shifts
  std::vector<double> direct;
  for (const auto& c : mix.components) {
    double full = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i)
      full += score_eval(ScoringRule::log, fam.predict(c.theta, data.x[i]),
                         data.y[i]);
    REQUIRE(full < 20.0);
    direct.push_back(std::exp(-full));
  }
  const double z = direct[0] + direct[1] + direct[2];
  for (int k = 0; k < 3; ++k)
    CHECK(mix.components[k].weight == doctest::Approx(direct[k] / z).epsilon(1e-12));

  // weights are a probability vector
  double total = 0.0;
  for (const auto& c : mix.components) total += c.weight;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("aha requires enough rows") {
  const GlmFamily fam = GlmFamily::gaussian();
  const LabeledDataset tiny = gaussian_rows(2, 1, 3);
  Rng rng(1);
  CHECK_THROWS_AS(aha_fit(fam, ScoringRule::log, tiny, 1.0, 2, rng),
                  std::invalid_argument);
}

TEST_CASE("aha surfaces subsample failures with the component index") {
  // labels outside {-1, +1} make the logistic scalar loss throw inside the fit
  const GlmFamily fam = GlmFamily::logistic();
  LabeledDataset bad;
  bad.d = 1;
  Eigen::VectorXd x(1);
  x << 1.0;
  for (int i = 0; i < 6; ++i) bad.push_back(x, 0.0);
  Rng rng(1);
  try {
    aha_fit(fam, ScoringRule::log, bad, 1.0, 2, rng);
    FAIL("expected a subsample failure");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("subsample 1") != std::string::npos);
  }
}

TEST_CASE("risk_estimate closed forms") {
  const GlmFamily fam = GlmFamily::logistic();
  LabeledDataset test;
  test.d = 1;
  Eigen::VectorXd x(1);
  x << 1.0;
  test.push_back(x, 1.0);
  test.push_back(x, 1.0);

  // saturated component: the quadratic score of a certain prediction is zero
  MixturePredictor sure;
  Eigen::VectorXd big(1);
  big << 800.0;
  sure.components.push_back({big, 1.0});
  CHECK(risk_estimate(sure, fam, ScoringRule::quadratic, test) == 0.0);

  MixturePredictor uniform;
  Eigen::VectorXd zero(1);
  zero << 0.0;
  uniform.components.push_back({zero, 1.0});
  CHECK(risk_estimate(uniform, fam, ScoringRule::log, test) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));

  // hand-summed two-component mixture over three rows
  MixturePredictor two;
  Eigen::VectorXd ta(1), tb(1);
  ta << 0.4;
  tb << -0.8;
  two.components.push_back({ta, 0.3});
  two.components.push_back({tb, 0.7});
  LabeledDataset three;
  three.d = 1;
  Eigen::VectorXd xs(1);
  double hand = 0.0;
  const double labels[3] = {1.0, -1.0, 1.0};
  const double xvals[3] = {0.5, -1.2, 2.0};
  for (int i = 0; i < 3; ++i) {
    xs << xvals[i];
    three.push_back(xs, labels[i]);
    const double p =
        0.3 * sigmoid(labels[i] * 0.4 * xvals[i]) +
        0.7 * sigmoid(labels[i] * -0.8 * xvals[i]);
    hand += -std::log(p);
  }
  CHECK(risk_estimate(two, fam, ScoringRule::log, three) ==
        doctest::Approx(hand / 3.0).epsilon(1e-12));
}

TEST_CASE("risk_estimate is invariant to test row order") {
  const GlmFamily fam = GlmFamily::gaussian();
  LabeledDataset test = gaussian_rows(50, 2, 17);
  MixturePredictor mix;
  Eigen::VectorXd t1(2), t2(2);
  t1 << 0.2, -0.1;
  t2 << -0.4, 0.6;
  mix.components.push_back({t1, 0.6});
  mix.components.push_back({t2, 0.4});
  const double before = risk_estimate(mix, fam, ScoringRule::log, test);
  std::reverse(test.x.begin(), test.x.end());
  std::reverse(test.y.begin(), test.y.end());
  const double after = risk_estimate(mix, fam, ScoringRule::log, test);
  CHECK(std::abs(before - after) <= 1e-12);
}
