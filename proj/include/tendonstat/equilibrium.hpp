#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tendonstat/friction.hpp"
#include "tendonstat/kinematics.hpp"
#include "tendonstat/statics.hpp"

namespace tendonstat {

enum class FrictionMode { Pulling, Releasing, Holding };

struct SolverOptions {
  double residual_tolerance = 1e-9;  // N m
  double step_tolerance = 1e-10;     // rad
  int max_iterations = 200;
  double fd_step = 1e-6;             // rad
  double relaxation = 0.5;           // fixed-point fallback
  bool gravity = true;
  FrictionMode friction_mode = FrictionMode::Pulling;
  bool strict = false;               // probe for other equilibria from perturbed starts
  std::uint64_t seed = 0;
  std::optional<Eigen::VectorXd> initial_guess;  // flat joint angles
};

struct EquilibriumResult {
  Configuration config;
  Eigen::VectorXd proximal_tensions;
  std::vector<TensionLadder> ladders;
  Eigen::VectorXd residual;        // b.M - K theta; at a pinned joint this is its contact moment
  std::vector<int> contact;        // -1 pinned at the lower limit, +1 at the upper, 0 free
  ChainPoses poses;
  int iterations = 0;              // Newton iterations over all ladder passes
  int ladder_passes = 0;
  bool converged = false;
  bool used_fallback = false;
  bool multistable = false;
  double max_residual = 0.0;       // over free joints, N m
  std::optional<Configuration> releasing_bound;  // holding mode only
  std::string message;

  /// Contact moment carried by the bevels at joint g (zero when free).
  double contact_moment(int joint) const { return contact[joint] != 0 ? residual[joint] : 0.0; }
};

/// Static shape under the given proximal cable tensions [N] and loads.
EquilibriumResult solve_equilibrium(const RobotDescription& desc, const Eigen::VectorXd& proximal_tensions,
                                    const LoadSet& loads, const FrictionModel& friction,
                                    const SolverOptions& options = {});

/// Reusable variant over a prebuilt model.
EquilibriumResult solve_equilibrium(const StaticsModel& model, const Eigen::VectorXd& proximal_tensions,
                                    const LoadSet& loads, const FrictionModel& friction, const SolverOptions& options);

/// Small-angle, frictionless, gravity-free joint angles for the given tensions, clamped to the limits.
Eigen::VectorXd linear_guess(const StaticsModel& model, const Eigen::VectorXd& proximal_tensions);

/// Desired section-level angles [rad]: one value per body section, (y-sum, x-sum) per tip section.
using SectionTargets = std::vector<std::vector<double>>;

struct PlanOptions {
  double pretension = 2.0;         // N on every cable
  double cable_limit = 200.0;      // N
  double tolerance = 1e-10;        // rad on every section target
  int max_iterations = 60;
  double overdrive = 1.5;          // factor on the tension of a section commanded into interlock
  SolverOptions solver;
};

struct PlanResult {
  CableState cables;               // lengths of the solved shape plus proximal tensions
  EquilibriumResult equilibrium;
  Eigen::VectorXd parameters;      // extra tension per actuated degree of freedom, N
  SectionTargets achieved;
  double max_error = 0.0;          // rad
  int iterations = 0;
  bool converged = false;
};

/// Proximal tensions for a set of per-degree-of-freedom extra tensions.
Eigen::VectorXd plan_tensions(const RobotDescription& desc, const Eigen::VectorXd& parameters, double pretension);

/// Section-level angles of a configuration in target layout.
SectionTargets section_angles(const RobotDescription& desc, const Configuration& config);

/// Finds proximal tensions whose equilibrium reaches the targets.
/// Throws InfeasiblePlanError when a tension would exceed the cable limit.
PlanResult actuation_plan(const RobotDescription& desc, const SectionTargets& targets, const LoadSet& loads,
                          const FrictionModel& friction, const PlanOptions& options = {});

}  // namespace tendonstat
