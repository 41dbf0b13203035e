#pragma once

#include <vector>

#include <Eigen/Core>

#include "tendonstat/friction.hpp"
#include "tendonstat/kinematics.hpp"
#include "tendonstat/pose.hpp"
#include "tendonstat/robot_model.hpp"

namespace tendonstat {

enum class CableDirection { Pulling, Releasing };

/// Tensions along one cable from the actuator to its anchor.
///
/// gap[g] is the tension in the free span between disk g and disk g+1, bore[d] the
/// tension inside the hole of disk d. entry_turn[d] / exit_turn[d] are the angles the
/// cable turns through at the proximal / distal face of disk d.
struct TensionLadder {
  int cable_id = 0;
  CableDirection direction = CableDirection::Pulling;
  std::vector<double> gap;
  std::vector<double> bore;
  std::vector<double> entry_turn;
  std::vector<double> exit_turn;

  double proximal() const { return bore.empty() ? 0.0 : bore.front(); }
  double distal() const { return bore.empty() ? 0.0 : bore.back(); }
  /// Sum of all turn angles where friction acts.
  double total_turn() const;
};

/// World coordinates of a cable's hole points on disks 0..termination.
struct RoutePoints {
  std::vector<Vec3> proximal;
  std::vector<Vec3> distal;
  std::vector<Vec3> axis;  // bore direction (disk z) per disk
};

/// Walks the route hole by hole. Pulling lowers the tension distally, releasing raises it.
/// Throws SlackCableError if the tension would go negative or friction locks the cable.
TensionLadder propagate_tensions(const RobotDescription& desc, const Configuration& config, int cable_id,
                                 double proximal_tension, const FrictionModel& friction, CableDirection direction);
TensionLadder propagate_tensions(const RoutePoints& route, int cable_id, double proximal_tension,
                                 const FrictionModel& friction, CableDirection direction);

/// Frame tag of a wrench: a disk index, or kWorldFrame.
inline constexpr int kWorldFrame = -1;

/// Force and moment, both expressed in `frame`, the moment taken about that frame's origin.
struct Wrench {
  Vec3 force = Vec3::Zero();
  Vec3 moment = Vec3::Zero();
  int frame = kWorldFrame;

  /// Throws DomainError when the frames differ.
  Wrench operator+(const Wrench& rhs) const;
  Wrench& operator+=(const Wrench& rhs);
};

/// A world wrench (about the world origin) re-expressed in disk frame `disk`.
Wrench to_disk_frame(const Wrench& world, const ChainPoses& poses, int disk);
/// Wrench in disk frame `disk` re-expressed in the world frame.
Wrench to_world_frame(const Wrench& local, const ChainPoses& poses);

/// External loading applied at the distal end of the arm.
struct LoadSet {
  Vec3 force = Vec3::Zero();   // N, world, at the end-effector origin
  Vec3 moment = Vec3::Zero();  // N m, world, free moment
  double payload_mass = 0.0;   // kg, point mass at the end-disk origin
};

/// Cable loading of one disk split into its tension, normal and friction parts.
struct CableLoad {
  Wrench wrench;                       // in frame disk-1
  Vec3 tension_in = Vec3::Zero();      // pull of the proximal span at h'
  Vec3 tension_out = Vec3::Zero();     // pull of the distal span at h
  Vec3 normal = Vec3::Zero();          // hole reaction normal to the cable, both edges
  Vec3 friction = Vec3::Zero();        // hole reaction along the cable, both edges
};

/// Load of every ladder on disk `disk` (global index >= 1), in frame disk-1.
CableLoad cable_wrench(const RobotDescription& desc, const Configuration& config, int disk,
                       const std::vector<TensionLadder>& ladders);

/// Weight of disk `disk` (global index >= 1), in frame disk-1.
Wrench gravity_wrench(const RobotDescription& desc, const ChainPoses& poses, int disk);

/// Tip loads referred to the origin of frame disk-1 (disk >= 1).
Wrench external_wrench(const RobotDescription& desc, const LoadSet& loads, const ChainPoses& poses, int disk);

/// Backbone restoring moment E I theta / delta_ell about the joint's bend axis.
double restoring_moment(double youngs_modulus, double second_moment, double theta, double delta_ell);

/// World-frame bend axis of joint g: a positive moment about it drives a positive angle.
Vec3 bend_axis(const ChainLayout& layout, const ChainPoses& poses, int joint);

/// Precomputed geometry for repeated residual evaluation.
class StaticsModel {
 public:
  explicit StaticsModel(RobotDescription desc);

  const RobotDescription& description() const { return desc_; }
  const ChainLayout& layout() const { return layout_; }
  int joint_count() const { return layout_.joint_count(); }
  int cable_count() const { return static_cast<int>(desc_.cables.size()); }
  int termination(int cable) const { return termination_[cable]; }
  double stiffness(int joint) const { return layout_.joints[joint].stiffness; }

  RoutePoints route(const ChainPoses& poses, int cable) const;

  /// Ladders of every cable at configuration `poses`.
  std::vector<TensionLadder> ladders(const ChainPoses& poses, const Eigen::VectorXd& proximal_tensions,
                                     const FrictionModel& friction, CableDirection direction) const;

  /// Per-joint residual b.M - K theta, with the gap tensions of `ladders` held fixed.
  /// Loads on the distal subchain are accumulated from the tip toward the base.
  /// gravity_scale multiplies disk weights and the payload, tension_scale every ladder.
  Eigen::VectorXd residual(const Eigen::VectorXd& theta, const std::vector<TensionLadder>& ladders,
                           const LoadSet& loads, double gravity_scale, double tension_scale = 1.0) const;

 private:
  RobotDescription desc_;
  ChainLayout layout_;
  std::vector<int> termination_;
  std::vector<std::vector<HolePoints>> holes_;  // [cable][disk], disk frame
};

/// Independent whole-chain moment balance about every joint, rebuilt from public queries.
/// Returns b.M - K theta per joint; pinned joints carry their contact moment in this value.
Eigen::VectorXd audit_moment_balance(const RobotDescription& desc, const Configuration& config,
                                     const std::vector<TensionLadder>& ladders, const LoadSet& loads, bool gravity);

}  // namespace tendonstat
