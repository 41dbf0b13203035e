#pragma once

#include <string>
#include <vector>

#include "tendonstat/equilibrium.hpp"
#include "tendonstat/friction.hpp"
#include "tendonstat/kinematics.hpp"
#include "tendonstat/robot_model.hpp"

namespace tendonstat::io {

/// Shortest decimal that round-trips, independent of the locale.
std::string fmt(double value);

/// Throws Error naming the path on failure.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// Header plus one row per disk frame (base included): section,disk,x_mm,y_mm,z_mm,qw,qx,qy,qz.
std::string shape_csv(const RobotDescription& desc, const ChainPoses& poses);

/// Configuration as an array of per-section arrays of degrees.
Configuration parse_configuration(const RobotDescription& desc, const std::string& json_text);
std::string configuration_json(const Configuration& config);

/// Per-section targets in degrees: [b] for body sections, [y, x] for tip sections.
SectionTargets parse_targets(const RobotDescription& desc, const std::string& json_text);

/// Proximal tensions in N, one per cable in description order.
Eigen::VectorXd parse_tensions(const RobotDescription& desc, const std::string& json_text);

/// {"force_N": [..], "moment_Nm": [..], "payload_g": ..}; every key optional.
LoadSet parse_loads(const std::string& json_text);

/// {a, b, c, theta_min_deg, theta_max_deg}
FrictionModel parse_friction(const std::string& json_text);
std::string friction_json(const FrictionModel& model);

/// Trial data with header theta_deg,weight_kg,measured_N. Throws DomainError when there are no rows.
std::vector<FrictionTrial> parse_trials_csv(const std::string& text, double gravity = 9.80665);

/// Shape, ladders, residuals and diagnostics. Angles in degrees, lengths in mm.
std::string result_json(const RobotDescription& desc, const EquilibriumResult& result);
std::string plan_json(const RobotDescription& desc, const PlanResult& plan);

}  // namespace tendonstat::io
