#pragma once

#include <string>

#include <json.hpp>

#include "hslab/optimizer.hpp"
#include "hslab/profile.hpp"
#include "hslab/scaling.hpp"

namespace hslab {

using json = nlohmann::json;

json params_to_json(const FractionalParams& p);
FractionalParams params_from_json(const json& j);

json profile_to_json(const RadialProfile& profile);
RadialProfile profile_from_json(const json& j);

json quad_to_json(const QuadratureConfig& q);
QuadratureConfig quad_from_json(const json& j);

json plan_to_json(const ExperimentPlan& plan);
ExperimentPlan plan_from_json(const json& j);

json fit_to_json(const ScalingFit& fit);
json report_to_json(const TheoremReport& report);
json seminorm_to_json(const SeminormValue& v);
json optimizer_result_to_json(const OptimizerResult& r);

// CSV with the sweep columns:
// eps,delta,q,seminorm,err,converged,deficit1,deficit2,besov_sigma_t,gagliardo_s_t
std::string table_to_csv(const SweepTable& table);

// (rho, u(rho)) table of a profile on its natural grid.
std::string profile_to_csv(const RadialProfile& profile, int points = 257);

std::string history_to_csv(const OptimizerResult& result);

// Writes atomically: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace hslab
