#include "improper/serialize.hpp"

#include <stdexcept>

namespace improper {

json to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = j[i].get<double>();
  return v;
}

json to_json(const LabelSet& set) {
  switch (set.kind()) {
    case LabelKind::binary:
      return {{"kind", "binary"}};
    case LabelKind::bounded_integers:
      return {{"kind", "bounded_integers"}, {"y_max", set.max_label()}};
    case LabelKind::real_interval:
      return {{"kind", "real_interval"},
              {"y_min", set.min_label()},
              {"y_max", set.max_label()}};
  }
  throw std::logic_error("unreachable");
}

LabelSet label_set_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "binary") return LabelSet::binary();
  if (kind == "bounded_integers")
    return LabelSet::bounded_integers(j.at("y_max").get<int>());
  if (kind == "real_interval")
    return LabelSet::real_interval(j.at("y_min").get<double>(),
                                   j.at("y_max").get<double>());
  throw std::invalid_argument("unknown label set kind: " + kind);
}

namespace {

LossId loss_id_from_name(const std::string& name) {
  if (name == "logistic") return LossId::logistic;
  if (name == "geometric") return LossId::geometric;
  if (name == "poisson") return LossId::poisson;
  if (name == "gaussian") return LossId::gaussian;
  throw std::invalid_argument("unknown loss: " + name);
}

}  // namespace

json to_json(const ScalarLoss& loss) {
  return {{"id", loss_name(loss.id)}, {"label_set", to_json(loss.label_set)}};
}

ScalarLoss scalar_loss_from_json(const json& j) {
  return {loss_id_from_name(j.at("id").get<std::string>()),
          label_set_from_json(j.at("label_set"))};
}

json to_json(const Radii& r) {
  return {{"data_radius", r.data_radius},
          {"param_radius", r.param_radius},
          {"perturbation", r.perturbation},
          {"sample_size", r.sample_size}};
}

Radii radii_from_json(const json& j) {
  return Radii(j.at("data_radius").get<double>(),
               j.at("param_radius").get<double>(),
               j.at("perturbation").get<double>(),
               j.at("sample_size").get<long>());
}

namespace {

json atoms_to_json(const std::vector<WeightedAtom>& atoms) {
  json arr = json::array();
  for (const auto& a : atoms)
    arr.push_back({{"x", to_json(a.x)}, {"y", a.y}, {"mass", a.mass}});
  return arr;
}

std::vector<WeightedAtom> atoms_from_json(const json& j) {
  std::vector<WeightedAtom> atoms;
  for (const auto& a : j)
    atoms.push_back({vector_from_json(a.at("x")), a.at("y").get<double>(),
                     a.at("mass").get<double>()});
  return atoms;
}

}  // namespace

json to_json(const ThreePointDistribution& p) {
  return {{"atoms", atoms_to_json(p.atoms)}};
}

json to_json(const PerturbedDistribution& p) {
  return {{"gamma", p.gamma}, {"atoms", atoms_to_json(p.atoms)}};
}

json to_json(const HardInstance& inst) {
  json j{{"loss", to_json(inst.loss)},
         {"radii", to_json(inst.radii)},
         {"v", to_json(inst.v)},
         {"w", to_json(inst.w)},
         {"t", inst.t},
         {"delta", inst.delta},
         {"epsilon", inst.epsilon},
         {"q", inst.q},
         {"alpha", inst.alpha},
         {"y", inst.y},
         {"y0", inst.y0},
         {"P_plus", to_json(inst.P_plus)},
         {"P_minus", to_json(inst.P_minus)},
         {"P_zero", to_json(inst.P_zero)},
         {"sep_lower", inst.sep_lower},
         {"kl_exact", inst.kl_exact},
         {"kl_bound", inst.kl_bound},
         {"gamma", inst.gamma}};
  if (inst.Q_plus) {
    j["Q_plus"] = to_json(*inst.Q_plus);
    j["Q_minus"] = to_json(*inst.Q_minus);
    j["sep_lower_perturbed"] = inst.sep_lower_perturbed;
    j["kl_upper_perturbed"] = inst.kl_upper_perturbed;
  }
  return j;
}

HardInstance hard_instance_from_json(const json& j) {
  HardInstance inst{scalar_loss_from_json(j.at("loss")),
                    radii_from_json(j.at("radii")),
                    vector_from_json(j.at("v")),
                    vector_from_json(j.at("w")),
                    j.at("t").get<double>(),
                    j.at("delta").get<double>(),
                    j.at("epsilon").get<double>(),
                    j.at("q").get<double>(),
                    j.at("alpha").get<double>(),
                    j.at("y").get<double>(),
                    j.at("y0").get<double>(),
                    {atoms_from_json(j.at("P_plus").at("atoms"))},
                    {atoms_from_json(j.at("P_minus").at("atoms"))},
                    {atoms_from_json(j.at("P_zero").at("atoms"))},
                    j.at("sep_lower").get<double>(),
                    j.at("kl_exact").get<double>(),
                    j.at("kl_bound").get<double>()};
  inst.gamma = j.at("gamma").get<double>();
  if (j.contains("Q_plus")) {
    PerturbedDistribution qp, qm;
    qp.gamma = j.at("Q_plus").at("gamma").get<double>();
    qp.atoms = atoms_from_json(j.at("Q_plus").at("atoms"));
    qm.gamma = j.at("Q_minus").at("gamma").get<double>();
    qm.atoms = atoms_from_json(j.at("Q_minus").at("atoms"));
    inst.Q_plus = qp;
    inst.Q_minus = qm;
    inst.sep_lower_perturbed = j.at("sep_lower_perturbed").get<double>();
    inst.kl_upper_perturbed = j.at("kl_upper_perturbed").get<double>();
  }
  return inst;
}

json to_json(const SeparationCertificate& cert) {
  return {{"sep_lower", cert.sep_lower},
          {"kl_exact", cert.kl_exact},
          {"kl_bound", cert.kl_bound},
          {"grid_resolution", cert.grid_resolution},
          {"sep_bruteforce", cert.sep_bruteforce},
          {"kl_direct", cert.kl_direct},
          {"lecam_value", cert.lecam_value},
          {"kl_bound_holds", cert.kl_bound_holds},
          {"epsilon_recommended", cert.epsilon_recommended},
          {"epsilon_feasible", cert.epsilon_feasible},
          {"pass", cert.pass},
          {"failure", cert.failure}};
}

json to_json(const QWorstResult& q) {
  return {{"q", q.q}, {"feasible", q.feasible}, {"alpha", q.alpha}, {"y0", q.y0}};
}

json to_json(const MixturePredictor& mix) {
  json comps = json::array();
  for (const auto& c : mix.components)
    comps.push_back({{"theta", to_json(c.theta)}, {"weight", c.weight}});
  return {{"components", comps}};
}

json to_json(const RegretReport& rep) {
  return {{"cumulative_loss", rep.cumulative_loss},
          {"best_comparator_loss", rep.best_comparator_loss},
          {"regret", rep.regret},
          {"regret_bound", rep.regret_bound},
          {"lip", rep.lip},
          {"lip_from_grid", rep.lip_from_grid}};
}

json to_json(const Schedule& s) {
  return {{"form", schedule_form_name(s.form)}, {"c", s.c}};
}

Schedule schedule_from_json(const json& j) {
  return {schedule_form_from_name(j.at("form").get<std::string>()),
          j.at("c").get<double>()};
}

std::uint64_t config_hash(const json& config) {
  const std::string s = config.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace improper
