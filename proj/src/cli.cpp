#include "improper/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "improper/bvm.hpp"
#include "improper/experiments.hpp"
#include "improper/serialize.hpp"

namespace improper {

namespace {

namespace fs = std::filesystem;

constexpr int kArtifactVersion = 1;

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Ctx {
  json config;
  fs::path out_dir;
  std::uint64_t seed = 0;
  bool force = false;
  json meta;
  // staged outputs; nothing touches disk until the command succeeds
  std::vector<std::pair<fs::path, std::string>> files;

  void stage(const std::string& name, const std::string& content) {
    files.emplace_back(out_dir / name, content);
  }
  void stage_json(const std::string& name, json j) {
    j["meta"] = meta;
    stage(name, j.dump(2) + "\n");
  }
  void flush() {
    fs::create_directories(out_dir);
    for (const auto& [path, content] : files) {
      if (fs::exists(path) && !force)
        throw CliError("output exists (pass --force to overwrite): " + path.string());
    }
    for (const auto& [path, content] : files) {
      std::ofstream os(path, std::ios::binary);
      if (!os) throw std::runtime_error("cannot write " + path.string());
      os << content;
    }
  }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) {
    for (std::size_t i = 0; i < header.size(); ++i)
      os_ << (i ? "," : "") << header[i];
    os_ << "\r\n";
    width_ = header.size();
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < width_; ++i)
      os_ << (i ? "," : "") << (i < cells.size() ? cells[i] : "");
    os_ << "\r\n";
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
  std::size_t width_ = 0;
};

json load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw CliError("cannot open config: " + path);
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw CliError(std::string("malformed JSON config: ") + e.what());
  }
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw CliError("config field '" + key + "': " + e.what());
  }
}

template <typename T>
T require(const json& j, const std::string& key) {
  if (!j.contains(key)) throw CliError("config is missing required field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw CliError("config field '" + key + "': " + e.what());
  }
}

ScalarLoss loss_from_config(const json& j) {
  const std::string name = require<std::string>(j, "loss");
  if (name == "logistic") return ScalarLoss::logistic();
  if (name == "geometric") return ScalarLoss::geometric(get_or<int>(j, "y_max", 10));
  if (name == "poisson") return ScalarLoss::poisson(get_or<int>(j, "y_max", 10));
  if (name == "gaussian")
    return ScalarLoss::gaussian(get_or<double>(j, "y_min", -10.0),
                                get_or<double>(j, "y_max", 10.0));
  throw CliError("unknown loss: " + name);
}

GlmFamily family_from_config(const json& j, const std::string& key = "family") {
  const std::string name = require<std::string>(j, key);
  if (name == "logistic") return GlmFamily::logistic();
  if (name == "geometric") return GlmFamily::geometric(get_or<int>(j, "y_max", 10));
  if (name == "poisson") return GlmFamily::poisson(get_or<int>(j, "y_max", 10));
  if (name == "gaussian")
    return GlmFamily::gaussian(get_or<double>(j, "y_min", -10.0),
                               get_or<double>(j, "y_max", 10.0));
  throw CliError("unknown family: " + name);
}

ScoringRule rule_from_name(const std::string& name) {
  if (name == "log") return ScoringRule::log;
  if (name == "squared") return ScoringRule::squared;
  if (name == "hellinger") return ScoringRule::hellinger;
  if (name == "quadratic") return ScoringRule::quadratic;
  throw CliError("unknown scoring rule: " + name);
}

Radii radii_from_config(const json& j) {
  try {
    return Radii(require<double>(j, "R"), require<double>(j, "B"),
                 require<double>(j, "gamma"), require<long>(j, "n"));
  } catch (const std::invalid_argument& e) {
    throw CliError(std::string("invalid radii: ") + e.what());
  }
}

// ---- subcommands ---------------------------------------------------------

int cmd_mixability(Ctx& ctx) {
  const json& cfg = ctx.config;
  const int res = get_or<int>(cfg, "grid_resolution", 21);
  const std::vector<int> ks = get_or<std::vector<int>>(cfg, "k_list", {2, 3, 4});

  Csv csv({"rule", "eta", "k", "holds"});
  json table = json::array();
  bool all_hold = true;
  const ScoringRule rules[] = {ScoringRule::log, ScoringRule::squared,
                               ScoringRule::hellinger, ScoringRule::quadratic};
  for (ScoringRule rule : rules) {
    std::vector<double> etas = {mixability_constant(rule)};
    if (rule == ScoringRule::hellinger) etas.push_back(27.0 / 8.0);
    for (double eta : etas) {
      for (int k : ks) {
        const ExpConcavityResult r = check_exp_concavity(rule, eta, k, res);
        all_hold = all_hold && r.holds;
        csv.row({rule_name(rule), fmt(eta), std::to_string(k),
                 r.holds ? "true" : "false"});
        table.push_back({{"rule", rule_name(rule)},
                         {"eta", eta},
                         {"k", k},
                         {"holds", r.holds}});
      }
    }
  }
  // log loss at eta = 2 must fail midpoint concavity
  const ExpConcavityResult viol = check_exp_concavity(ScoringRule::log, 2.0, 2, res);
  ctx.stage("mixability.csv", csv.str());
  ctx.stage_json("mixability.json",
                 {{"table", table},
                  {"grid_resolution", res},
                  {"log_eta2_violated", !viol.holds},
                  {"all_table_values_hold", all_hold}});
  ctx.flush();
  std::cout << "mixability: table "
            << (all_hold ? "holds" : "VIOLATED")
            << ", log eta=2 violation " << (!viol.holds ? "found" : "MISSING")
            << "\n";
  return all_hold && !viol.holds ? 0 : 1;
}

int cmd_bound(Ctx& ctx) {
  const json& cfg = ctx.config;
  const ScalarLoss loss = loss_from_config(cfg);
  const Radii radii = radii_from_config(cfg);

  LinearityConfig lc;
  lc.t_delta_grid = get_or<int>(cfg, "t_delta_grid", 201);
  lc.delta_sup_grid = get_or<int>(cfg, "delta_sup_grid", 101);
  lc.alpha_grid = get_or<int>(cfg, "alpha_grid", 201);
  lc.y_candidates = get_or<int>(cfg, "y_candidates", 101);

  const ScalarFn fn = to_fn(loss);
  const double rb = radii.rb();
  json qtable = json::array();
  std::vector<double> ys = loss.label_set.candidates(5);
  if (ys.size() > 5) {
    // trim discrete sets to ends and middle
    std::vector<double> trimmed = {ys.front(), ys[ys.size() / 4],
                                   ys[ys.size() / 2], ys[3 * ys.size() / 4],
                                   ys.back()};
    ys = trimmed;
  }
  for (double t : {0.0, rb / 4.0, -rb / 4.0, rb / 2.0, -rb / 2.0}) {
    for (double y : ys) {
      const QWorstResult q = q_worst(fn, t, y, get_or<int>(cfg, "qworst_alpha_grid", 2001));
      json row = to_json(q);
      row["t"] = t;
      row["y"] = y;
      qtable.push_back(row);
    }
  }

  const LinearityResult lin = linearity_constant(fn, radii, lc);
  json closed;
  try {
    closed = closed_form_bound(loss.id, radii, loss.label_set.diameter());
  } catch (const std::domain_error& e) {
    closed = {{"error", e.what()}};
  }
  ctx.stage_json("bound.json",
                 {{"loss", to_json(loss)},
                  {"radii", to_json(radii)},
                  {"q_worst_table", qtable},
                  {"lambda", lin.lambda},
                  {"argmax", {{"t", lin.t}, {"delta", lin.delta}, {"y", lin.y}, {"q", lin.q}}},
                  {"minimax_lower_bound", minimax_lower_bound(lin.lambda, radii.sample_size)},
                  {"closed_form_bound", closed}});
  ctx.flush();
  std::cout << "bound: lambda = " << fmt(lin.lambda) << ", lower bound = "
            << fmt(minimax_lower_bound(lin.lambda, radii.sample_size)) << "\n";
  return 0;
}

int cmd_construct(Ctx& ctx) {
  const json& cfg = ctx.config;
  const ScalarLoss loss = loss_from_config(cfg);
  const Radii radii = radii_from_config(cfg);
  const double t = require<double>(cfg, "t");
  const double y = require<double>(cfg, "y");
  const double epsilon = require<double>(cfg, "epsilon");
  const int d = get_or<int>(cfg, "d", 2);
  const int res = get_or<int>(cfg, "grid_resolution", 200);
  const double tol = get_or<double>(cfg, "tolerance", 1e-4);
  if (!(epsilon > 0.0 && epsilon <= 0.6))
    throw CliError("epsilon must lie in (0, 3/5]");
  if (d != 2) throw CliError("the verification grid requires d = 2");

  HardInstance inst = build_hard_instance(
      loss, radii, t, y, epsilon, d, get_or<int>(cfg, "alpha_grid", 2001),
      get_or<int>(cfg, "delta_sup_grid", 101));
  inst = perturb_instance(inst, radii.perturbation);
  const SeparationCertificate cert = verify_instance(
      inst, make_theta_ball_grid(2, radii.param_radius, res), tol);

  ctx.stage_json("instance.json", to_json(inst));
  ctx.stage_json("certificate.json", to_json(cert));
  ctx.flush();
  std::cout << "construct: certificate " << (cert.pass ? "pass" : "FAIL")
            << " (sep " << fmt(cert.sep_bruteforce) << " >= " << fmt(cert.sep_lower)
            << ", kl " << fmt(cert.kl_direct) << ")\n";
  return cert.pass ? 0 : 1;
}

int cmd_verify(Ctx& ctx) {
  const json& cfg = ctx.config;
  const std::string path = require<std::string>(cfg, "instance_path");
  std::ifstream is(path);
  if (!is) throw CliError("cannot open instance: " + path);
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception& e) {
    throw CliError(std::string("malformed instance JSON: ") + e.what());
  }
  const HardInstance inst = hard_instance_from_json(j);
  if (inst.v.size() != 2)
    throw CliError("the verification grid requires a d = 2 instance");
  const int res = get_or<int>(cfg, "grid_resolution", 200);
  const double tol = get_or<double>(cfg, "tolerance", 1e-4);
  const SeparationCertificate cert = verify_instance(
      inst, make_theta_ball_grid(2, inst.radii.param_radius, res), tol);
  ctx.stage_json("certificate.json", to_json(cert));
  ctx.flush();
  std::cout << "verify: certificate " << (cert.pass ? "pass" : "FAIL") << "\n";
  return cert.pass ? 0 : 1;
}

int cmd_regret(Ctx& ctx) {
  const json& cfg = ctx.config;
  const GlmFamily family = family_from_config(cfg);
  const ScoringRule rule = rule_from_name(get_or<std::string>(cfg, "rule", "log"));
  const double eta = get_or<double>(cfg, "eta", 1.0);
  const int d = get_or<int>(cfg, "d", 2);
  const long n = get_or<long>(cfg, "n", 500);
  const int grid_size = get_or<int>(cfg, "grid_size", 512);
  const double R = get_or<double>(cfg, "R", 2.0);
  const double B = get_or<double>(cfg, "B", 1.5);
  const int n_seq = get_or<int>(cfg, "sequences", 10);

  const std::vector<Eigen::VectorXd> grid = make_theta_grid(d, B, grid_size, ctx.seed);
  Csv csv({"seed", "n", "d", "eta", "cumulative_loss", "best_comparator_loss",
           "regret", "regret_bound"});
  json rows = json::array();
  bool all_bounded = true;
  for (int s = 0; s < n_seq; ++s) {
    const std::uint64_t seq_seed = ctx.seed + static_cast<std::uint64_t>(s);
    Rng rng(seq_seed);
    Rng dir = rng.split(0), lab = rng.split(1);
    Eigen::VectorXd theta_star(d);
    for (int i = 0; i < d; ++i) theta_star(i) = dir.normal();
    theta_star *= (B / 2.0) / std::max(theta_star.norm(), 1e-12);
    LabeledDataset seq;
    seq.d = d;
    for (long i = 0; i < n; ++i) {
      Eigen::VectorXd x(d);
      for (int c = 0; c < d; ++c) x(c) = dir.normal();
      const double nrm = x.norm();
      if (nrm > R) x *= R / nrm;
      seq.push_back(x, family.sample(theta_star, x, lab));
    }
    const RegretReport rep = vovk_online_run(family, rule, eta, seq, grid, R, B);
    all_bounded = all_bounded && rep.regret <= rep.regret_bound;
    csv.row({std::to_string(seq_seed), std::to_string(n), std::to_string(d),
             fmt(eta), fmt(rep.cumulative_loss), fmt(rep.best_comparator_loss),
             fmt(rep.regret), fmt(rep.regret_bound)});
    json row = to_json(rep);
    row["seed"] = seq_seed;
    rows.push_back(row);
  }
  ctx.stage("regret.csv", csv.str());
  ctx.stage_json("regret.json",
                 {{"rows", rows}, {"all_within_bound", all_bounded}});
  ctx.flush();
  std::cout << "regret: " << n_seq << " sequences, bound "
            << (all_bounded ? "holds on all" : "VIOLATED") << "\n";
  return 0;
}

int cmd_aha(Ctx& ctx) {
  const json& cfg = ctx.config;
  const TaskId task = task_from_name(get_or<std::string>(cfg, "task", "linreg_misspec"));
  const int d = get_or<int>(cfg, "d", 10);
  const long n = require<long>(cfg, "n");
  const double tau = get_or<double>(cfg, "tau", 0.0);
  const double B = require<double>(cfg, "B");
  const int K = get_or<int>(cfg, "K", 20);
  const long test_size = get_or<long>(cfg, "test_size", 2000);

  const GlmFamily family = task == TaskId::linreg_misspec
                               ? GlmFamily::gaussian(-1e6, 1e6)
                               : GlmFamily::logistic();
  // pooled draw so the held-out rows share the training population
  const DatasetWithMeta pooled =
      task == TaskId::linreg_misspec
          ? gen_linreg_misspec(n + test_size, d, tau, ctx.seed)
          : gen_logistic_mix(n + test_size, d, tau, ctx.seed);
  LabeledDataset train_rows, test_rows;
  train_rows.d = test_rows.d = d;
  for (long i = 0; i < n + test_size; ++i) {
    if (i < n)
      train_rows.push_back(pooled.data.x[i], pooled.data.y[i]);
    else
      test_rows.push_back(pooled.data.x[i], pooled.data.y[i]);
  }
  const DatasetWithMeta train{train_rows, pooled.theta_star, 0};
  const DatasetWithMeta test{test_rows, pooled.theta_star, 0};

  Rng rng = Rng(ctx.seed).split(7);
  const MixturePredictor mix =
      aha_fit(family, ScoringRule::log, train.data, B, K, rng);
  const Eigen::VectorXd theta_hat =
      fit_mle(family, family.matching_loss(), train.data, B);
  MixturePredictor point;
  point.components.push_back({theta_hat, 1.0});

  json out = to_json(mix);
  out["risk_aha"] = risk_estimate(mix, family, ScoringRule::log, test.data);
  out["risk_mle"] = risk_estimate(point, family, ScoringRule::log, test.data);
  out["task"] = task_name(task);
  ctx.stage_json("aha.json", out);
  ctx.flush();
  std::cout << "aha: risk " << fmt(out["risk_aha"].get<double>()) << " vs mle "
            << fmt(out["risk_mle"].get<double>()) << "\n";
  return 0;
}

int cmd_experiment(Ctx& ctx) {
  const json& cfg = ctx.config;
  ExperimentConfig ec;
  ec.task = task_from_name(get_or<std::string>(cfg, "task", "linreg_misspec"));
  // desk-scale defaults per task
  const bool mix = ec.task == TaskId::logistic_mix;
  ec.d = get_or<int>(cfg, "d", mix ? 5 : 10);
  ec.tau = get_or<double>(cfg, "tau", 0.0);
  ec.n_grid = get_or<std::vector<long>>(
      cfg, "n_grid", mix ? std::vector<long>{50, 100, 200}
                         : std::vector<long>{100, 300, 1000});
  ec.K = get_or<int>(cfg, "K", mix ? 10 : 20);
  ec.test_size = get_or<long>(cfg, "test_size", 5000);
  ec.replications = get_or<int>(cfg, "replications", 20);
  ec.seed = ctx.seed;
  if (cfg.contains("schedules")) {
    ec.schedules.clear();
    for (const auto& s : cfg.at("schedules")) ec.schedules.push_back(schedule_from_json(s));
  }

  const RiskCurve curve = run_experiment(ec);

  Csv csv({"task", "tau", "n", "schedule_form", "schedule_c", "estimator",
           "replication", "risk"});
  for (const RiskCell& c : curve.cells)
    csv.row({task_name(ec.task), fmt(ec.tau), std::to_string(c.n),
             schedule_form_name(c.schedule.form), fmt(c.schedule.c), c.estimator,
             std::to_string(c.replication), c.failed ? "" : fmt(c.risk)});

  json summary = json::array(), best = json::array();
  for (const auto& r : curve.rows)
    summary.push_back({{"n", r.n},
                       {"estimator", r.estimator},
                       {"schedule", to_json(r.schedule)},
                       {"mean_risk", r.mean_risk},
                       {"std_err", r.std_err}});
  for (const auto& r : curve.best_by_mle)
    best.push_back({{"n", r.n},
                    {"estimator", r.estimator},
                    {"schedule", to_json(r.schedule)},
                    {"mean_risk", r.mean_risk},
                    {"std_err", r.std_err}});
  json failures = json::array();
  for (const RiskCell& c : curve.cells)
    if (c.failed)
      failures.push_back({{"n", c.n},
                          {"estimator", c.estimator},
                          {"schedule", to_json(c.schedule)},
                          {"replication", c.replication},
                          {"error", c.error}});
  ctx.stage("experiment.csv", csv.str());
  ctx.stage_json("experiment_summary.json",
                 {{"task", task_name(ec.task)},
                  {"tau", ec.tau},
                  {"summary", summary},
                  {"best_by_mle", best},
                  {"failures", failures}});
  ctx.flush();
  std::cout << "experiment: " << curve.cells.size() << " cells, "
            << failures.size() << " failures\n";
  return 0;
}

int cmd_bvm(Ctx& ctx) {
  const json& cfg = ctx.config;
  BvmTrendConfig bc;
  bc.seeds = get_or<int>(cfg, "seeds", 20);
  bc.n_ladder = get_or<std::vector<long>>(cfg, "n_ladder", {200, 2000, 20000});
  bc.theta_star = get_or<double>(cfg, "theta_star", 0.7);
  bc.B = get_or<double>(cfg, "B", 2.0);
  bc.cells = get_or<int>(cfg, "cells", 801);
  bc.eta = get_or<double>(cfg, "eta", 1.0);
  const auto q = get_or<std::vector<double>>(cfg, "query_points", {0.5, 1.0, 2.0});
  if (q.size() != 3) throw CliError("query_points must have exactly 3 entries");
  bc.query_points = {q[0], q[1], q[2]};
  bc.base_seed = ctx.seed;

  const std::vector<BvmTrendRow> rows = bvm_trend(bc);

  Csv csv({"seed", "n", "tv_param", "tv_predictive_x1", "tv_predictive_x2",
           "tv_predictive_x3"});
  for (const auto& r : rows)
    csv.row({std::to_string(r.seed), std::to_string(r.n), fmt(r.tv_param),
             fmt(r.tv_predictive[0]), fmt(r.tv_predictive[1]),
             fmt(r.tv_predictive[2])});

  // medians per n
  json medians = json::array();
  for (long n : bc.n_ladder) {
    std::vector<double> tvp;
    std::array<std::vector<double>, 3> tvq;
    for (const auto& r : rows)
      if (r.n == n) {
        tvp.push_back(r.tv_param);
        for (int k = 0; k < 3; ++k) tvq[k].push_back(r.tv_predictive[k]);
      }
    const auto median = [](std::vector<double> v) {
      std::sort(v.begin(), v.end());
      const std::size_t m = v.size();
      return m == 0 ? 0.0 : (m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]));
    };
    medians.push_back({{"n", n},
                       {"tv_param", median(tvp)},
                       {"tv_predictive",
                        {median(tvq[0]), median(tvq[1]), median(tvq[2])}}});
  }
  ctx.stage("bvm.csv", csv.str());
  ctx.stage_json("bvm_summary.json", {{"medians", medians}});
  ctx.flush();
  std::cout << "bvm: " << rows.size() << " rows\n";
  return 0;
}

int cmd_demo(Ctx& ctx) {
  const json& cfg = ctx.config;
  const std::vector<long> ns = get_or<std::vector<long>>(cfg, "n_list", {10, 100, 1000});
  const std::vector<TwoPointRow> rows = two_point_demo(ns);

  Csv csv({"n", "risk_best_theta", "risk_mixture"});
  json jrows = json::array();
  for (const auto& r : rows) {
    csv.row({std::to_string(r.n), fmt(r.risk_best_theta), fmt(r.risk_mixture)});
    jrows.push_back({{"n", r.n},
                     {"risk_best_theta", r.risk_best_theta},
                     {"risk_mixture", r.risk_mixture},
                     {"stationarity_residual", two_point_risk_derivative_at_zero(r.n)}});
  }
  ctx.stage("demo.csv", csv.str());
  ctx.stage_json("demo.json", {{"rows", jrows}});
  ctx.flush();
  std::cout << "demo: " << rows.size() << " rows\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"robust probabilistic prediction under misspecification"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  long long seed_flag = -1;
  int threads = 1;
  bool force = false;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config path")->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seed", seed_flag, "seed override");
    cmd->add_option("--threads", threads, "thread budget (outputs are unaffected)");
    cmd->add_flag("--force", force, "overwrite existing outputs");
  };

  std::map<std::string, int (*)(Ctx&)> handlers{
      {"bound", cmd_bound},       {"construct", cmd_construct},
      {"verify", cmd_verify},     {"regret", cmd_regret},
      {"aha", cmd_aha},           {"experiment", cmd_experiment},
      {"bvm", cmd_bvm},           {"demo", cmd_demo},
      {"mixability", cmd_mixability}};
  for (auto& [name, fn] : handlers) add_common(app.add_subcommand(name));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      std::cout << app.help();
      return 0;
    }
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    Ctx ctx;
    ctx.config = load_config(config_path);
    ctx.out_dir = out_dir;
    ctx.force = force;
    if (seed_flag >= 0) ctx.config["seed"] = static_cast<std::uint64_t>(seed_flag);
    ctx.seed = get_or<std::uint64_t>(ctx.config, "seed", 1);
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                  static_cast<unsigned long long>(config_hash(ctx.config)));
    ctx.meta = {{"seed", ctx.seed},
                {"config_hash", std::string(hash_hex)},
                {"artifact_version", kArtifactVersion}};
    return handlers.at(app.get_subcommands().front()->get_name())(ctx);
  } catch (const CliError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const construction_error& e) {
    std::cerr << "construction infeasible: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace improper
