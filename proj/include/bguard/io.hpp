#pragma once

#include <nlohmann/json_fwd.hpp>
#include <iosfwd>
#include <string>

#include "bguard/attack.hpp"
#include "bguard/conditions.hpp"
#include "bguard/hankel.hpp"
#include "bguard/recover_exact.hpp"
#include "bguard/system.hpp"

namespace bguard::io {

using json = nlohmann::json;

json to_json(const SystemSpec& sys);
SystemSpec system_from_json(const json& j);

json to_json(const GpeReport& rep);
json to_json(const Certificate& cert);

json to_json(const AttackRecord& rec);
AttackRecord attack_from_json(const json& j);

json to_json(const RecoveryResult& res);

/// One row per time step, header u_1..u_m,y_1..y_p (m + p = q).
void write_trajectory_csv(std::ostream& os, const Trajectory& w, int m);
Trajectory read_trajectory_csv(std::istream& is);

/// Dense row-major matrix dump, no header.
void write_matrix_csv(std::ostream& os, const MatrixXd& M);

std::string attack_kind_name(AttackKind kind);
std::string status_name(RecoveryStatus status);

}  // namespace bguard::io
