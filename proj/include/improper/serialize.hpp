#pragma once

#include <json.hpp>

#include "improper/bvm.hpp"
#include "improper/experiments.hpp"
#include "improper/learners.hpp"
#include "improper/minimax.hpp"

namespace improper {

using json = nlohmann::json;

json to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const json& j);

json to_json(const LabelSet& set);
LabelSet label_set_from_json(const json& j);

json to_json(const ScalarLoss& loss);
ScalarLoss scalar_loss_from_json(const json& j);

json to_json(const Radii& r);
Radii radii_from_json(const json& j);

json to_json(const ThreePointDistribution& p);
json to_json(const PerturbedDistribution& p);
json to_json(const HardInstance& inst);
HardInstance hard_instance_from_json(const json& j);

json to_json(const SeparationCertificate& cert);
json to_json(const QWorstResult& q);
json to_json(const MixturePredictor& mix);
json to_json(const RegretReport& rep);
json to_json(const Schedule& s);
Schedule schedule_from_json(const json& j);

// FNV-1a of the canonical dump; stable across runs and platforms.
std::uint64_t config_hash(const json& config);

}  // namespace improper
