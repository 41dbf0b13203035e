#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "tendonstat/pose.hpp"
#include "tendonstat/robot_model.hpp"

namespace tendonstat {

/// Per-joint bend angles [rad], grouped by section. A tip section's angles follow
/// its joint_axes pattern.
struct Configuration {
  std::vector<std::vector<double>> sections;

  static Configuration zero(const RobotDescription& desc);
  static Configuration from_flat(const RobotDescription& desc, const Eigen::VectorXd& flat);
  Eigen::VectorXd flatten() const;

  /// Sum of all joint angles of a section.
  double section_sum(int section) const;
  /// Sum of the joint angles of a section that bend about `axis`.
  double section_sum(const RobotDescription& desc, int section, JointAxis axis) const;

  bool operator==(const Configuration&) const = default;
};

/// Constant-curvature arc: curvature kappa [1/m], direction phi [rad], length ell [m].
struct ArcParams {
  double kappa = 0.0;
  double phi = 0.0;
  double ell = 0.0;

  double theta() const { return kappa * ell; }
  bool straight() const { return kappa == 0.0; }
  /// 1/kappa, absent for a straight arc.
  std::optional<double> radius() const;
};

ArcParams arc_params(double theta, double ell, double phi = 0.0);

/// Length change of one cable across one bevelled gap. `s` is the bending-plane
/// projection of the hole; holes with s > 0 ride on bevel s1, s < 0 on bevel s2.
double gap_delta(double theta, double s, double bevel_s1, double bevel_s2);

/// Antagonistic pair (cable at `phase`, cable mirrored across the bend-neutral axis)
/// across a body gap. Throws BendLimitError outside [-s1, +s2].
std::pair<double, double> body_gap_delta(double theta, double phase, double rho, double bevel_s1, double bevel_s2);

/// Three cables across a y-joint gap (first three) then an x-joint gap (last three).
std::array<double, 6> tip_gap_deltas(double theta_j, double theta_j1, const std::array<double, 3>& phases,
                                     double rho, double bevel_s3);

struct CableState {
  Eigen::VectorXd lengths;                  // m, positive = released
  std::optional<Eigen::VectorXd> tensions;  // N, proximal

  int size() const { return static_cast<int>(lengths.size()); }
};

/// Sum of gap deltas along every cable's route.
CableState cable_lengths(const RobotDescription& desc, const Configuration& config);

/// Single joint arc transforms.
Pose body_segment_transform(double theta, double delta_ell);
Pose y_segment_transform(double theta, double delta_ell);
Pose joint_transform(JointAxis axis, double theta, double delta_ell);
/// A y-joint followed by an x-joint.
Pose tip_segment_transform(double theta_j, double theta_j1, double delta_ell);

/// Closed-form transform of one constant-curvature arc bending about x.
Pose single_arc_transform(double theta, double length);

struct ChainPoses {
  std::vector<Pose> disks;  // world frames of disks 0..N, disk 0 is the base
  Pose effector;
};

ChainPoses chain_pose(const RobotDescription& desc, const Configuration& config);
/// Fast path on a flat angle vector; no limit checks.
ChainPoses chain_pose(const RobotDescription& desc, const ChainLayout& layout, const Eigen::VectorXd& theta);

/// Throws DomainError on a shape mismatch and BendLimitError on a limit violation.
void check_configuration(const RobotDescription& desc, const Configuration& config);

}  // namespace tendonstat
