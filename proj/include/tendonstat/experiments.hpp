#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tendonstat/circle_fit.hpp"
#include "tendonstat/equilibrium.hpp"
#include "tendonstat/friction.hpp"
#include "tendonstat/kinematics.hpp"
#include "tendonstat/robot_model.hpp"

namespace tendonstat {

/// Length change of a cable from straight-line spans between consecutive hole points.
/// Built only from chain_pose and disk_hole_frame.
double chord_oracle(const RobotDescription& desc, const Configuration& config, int cable_id);

enum class Scenario { FrictionCalibration, SingleSectionBend, CcShape, StiffnessSweep };

/// Parses friction-calibration, single-section, cc-shape or stiffness-sweep.
Scenario parse_scenario(const std::string& name);
std::string scenario_name(Scenario s);

struct ExperimentSpec {
  Scenario scenario = Scenario::CcShape;
  std::vector<double> payloads_g;      // empty selects the scenario default
  std::vector<double> angles_deg;      // single-section sweep; empty selects 0..90 in 10 deg steps
  FrictionModel friction = FrictionModel::default_calibration();
  bool gravity = true;
  bool friction_on = true;
  double cc_radius = 0.56414;          // m
  Vec3 mount_rpy{1.5707963267948966, 1.5707963267948966, 0.0};  // local +y up, local z horizontal
  std::optional<std::string> trials_csv;  // friction calibration input; synthetic grid when absent
  FrictionModel planted = FrictionModel::default_calibration();
  std::uint64_t seed = 0;
  bool strict = false;

  /// Throws DomainError on a negative or non-increasing payload list.
  void check() const;
};

/// Plot-ready files keyed by file name, plus the manifest.
struct Dataset {
  std::map<std::string, std::string> files;
};

/// Writes every file of the dataset into `outdir`, creating it if needed.
void write_dataset(const Dataset& data, const std::string& outdir);

struct BendPose {
  double command = 0.0;   // rad
  double payload = 0.0;   // kg
  bool converged = false;
  double avg_deviation = 0.0;  // m, disk centres against the constant-curvature arc
  double max_deviation = 0.0;  // m
  double section_length = 0.0;
  Eigen::VectorXd cable_change;   // m
  Eigen::VectorXd tensions;       // N
  ChainPoses poses;
  std::string message;
};

struct SingleSectionResult {
  std::vector<BendPose> poses;  // angle-major, payload-minor
  Dataset data;
};

struct CcShapeResult {
  double commanded_radius = 0.0;
  CircleFit fit;
  double radius_deviation = 0.0;     // fraction of the commanded radius
  bool cc_converged = false;
  bool straight_converged = false;
  double straight_avg_deviation = 0.0;  // m, disk centres against the ideal straight line
  double straight_max_deviation = 0.0;
  double total_length = 0.0;
  EquilibriumResult cc;
  EquilibriumResult straight;
  Dataset data;
};

struct StiffnessCase {
  std::string shape;   // straight or cc
  double payload = 0.0;
  bool converged = false;
  Vec3 tip = Vec3::Zero();
  double deflection = 0.0;  // m, tip displacement from the unloaded solution
  EquilibriumResult result;
};

struct StiffnessResult {
  std::vector<StiffnessCase> cases;  // shape-major, payload-minor
  double total_length = 0.0;
  Dataset data;
};

struct FrictionCalibrationResult {
  FrictionFit fit;
  std::vector<FrictionTrial> trials;
  Dataset data;
};

/// One-section arm (first section, the cables anchored in it) taken from `desc`.
RobotDescription single_section_description(const RobotDescription& desc);

/// Section targets of the C-c pose: first section at its upper interlock, the rest of the
/// body and the tip x joints on an arc of `radius`, tip y joints straight.
SectionTargets cc_targets(const RobotDescription& desc, double radius);

/// Plan that realises `targets` with gravity and friction switched off.
/// Throws Error when it does not converge.
PlanResult ideal_plan(const RobotDescription& desc, const SectionTargets& targets);

SingleSectionResult run_single_section_bend(const RobotDescription& desc, const ExperimentSpec& spec);
CcShapeResult run_cc_shape(const RobotDescription& desc, const ExperimentSpec& spec);
StiffnessResult run_stiffness_sweep(const RobotDescription& desc, const ExperimentSpec& spec);
FrictionCalibrationResult run_friction_calibration(const ExperimentSpec& spec);

/// Noise-free pulley trials on the protocol grid for a planted model.
std::vector<FrictionTrial> synthetic_trials(const FrictionModel& planted, double gravity = 9.80665);

/// Runs the scenario selected in `spec` and returns its dataset.
Dataset run_experiment(const RobotDescription& desc, const ExperimentSpec& spec);

}  // namespace tendonstat
