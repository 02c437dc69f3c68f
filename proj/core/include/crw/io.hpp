#pragma once

#include <nlohmann/json.hpp>
#include <ostream>
#include <vector>

#include "crw/oracle.hpp"
#include "crw/schedule.hpp"
#include "crw/walk.hpp"
#include "crw/zigzag.hpp"

namespace crw {

/// Schedule <-> JSON object. Field names:
///   {"kind": "Constant",   "p": ...}
///   {"kind": "Critical",   "a": ..., "n0": ..., "prefix_p": ...}
///   {"kind": "PowerDecay", "c": ..., "gamma": ..., "n0": ..., "prefix_p": ...}
///   {"kind": "Periodic",   "values": [...], "n0": ..., "prefix_p": ...}
///   {"kind": "Explicit",   "values": [...]}
/// prefix_p is optional (default 1). Unknown kinds, missing fields or
/// parameters the families reject raise DomainError.
Schedule schedule_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json schedule_to_json(const Schedule& schedule);

nlohmann::ordered_json to_json(const RegimeClassification& c);

/// k,tau_k,axis,sign
void write_path_csv(std::ostream& os, const Path& path);
/// n,x_1..x_d for every integer time 0..horizon.
void write_dense_csv(std::ostream& os, const Path& path);
/// left,right,axis,sign
void write_zigzag_csv(std::ostream& os, const ZigzagPath& path);
/// t,z_1..z_d on the given grid (every t must lie in (epsilon, T]).
void write_trajectory_csv(std::ostream& os, const ZigzagPath& path,
                          const std::vector<double>& grid);
/// x_1..x_d,axis,sign,prob
void write_distribution_csv(std::ostream& os, const ExactDistribution& dist);

}  // namespace crw
