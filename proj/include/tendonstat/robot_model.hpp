#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tendonstat/pose.hpp"

namespace tendonstat {

enum class SectionKind { Body, Tip };

/// Local axis a joint bends about. X joints tilt z toward +y, Y joints tilt z toward +x.
enum class JointAxis { X, Y };

struct Backbone {
  double youngs_modulus = 60e9;   // Pa
  double rod_diameter = 0.6e-3;   // m
  int rods_in_parallel = 2;

  /// Summed second moment of area of the parallel rods [m^4].
  double second_moment() const;

  bool operator==(const Backbone&) const = default;
};

/// One independently actuated span of the arm.
///
/// A section with n disks owns n joints: the gap to the previous section's end
/// disk (or to the fixed base disk) plus the n-1 gaps between its own disks.
/// Bevel s1 sits on the side of a hole with positive bending-plane projection,
/// bevel s2 on the negative side. Joint limits are [-s1, +s2].
struct SectionSpec {
  SectionKind kind = SectionKind::Body;
  int disk_count = 8;
  double delta_ell = 6.75e-3;       // m, arc length between adjacent disk centres
  double disk_thickness = 2.5e-3;   // m, axial thickness at the centre ridge
  double bevel_s1 = 0.0;            // rad
  double bevel_s2 = 0.0;            // rad
  double disk_mass = 0.0;           // kg
  Backbone backbone;
  std::vector<JointAxis> joint_axes;               // one per joint
  std::optional<std::array<double, 2>> declared_limits;  // section-level [lower, upper] rad

  double joint_lower() const { return -bevel_s1; }
  double joint_upper() const { return bevel_s2; }
  double length() const { return disk_count * delta_ell; }
  /// EI / delta_ell [N m / rad].
  double joint_stiffness() const { return backbone.youngs_modulus * backbone.second_moment() / delta_ell; }
  int joints_on(JointAxis axis) const;

  static SectionSpec body_default();
  static SectionSpec tip_default();

  bool operator==(const SectionSpec&) const = default;
};

struct Mount {
  Vec3 rpy = Vec3::Zero();  // rad, applied as R_X R_Y R_Z
  Vec3 xyz = Vec3::Zero();  // m
  Pose pose() const { return {mount_rotation(rpy), xyz}; }
  bool operator==(const Mount&) const = default;
};

/// Route of one actuation cable from the base disk to the end disk of its section.
struct CableRoute {
  int id = 0;                       // 1-based cable number
  double pitch_radius = 0.0;        // m, on body disks
  double pitch_radius_tip = 0.0;    // m, on tip disks
  double phase = 0.0;               // rad, measured from local x toward local y
  int terminates_at_section = 0;    // 0-based section index
  double diameter = 0.9e-3;         // m

  double radius_on(SectionKind kind) const {
    return kind == SectionKind::Body ? pitch_radius : pitch_radius_tip;
  }
  bool operator==(const CableRoute&) const = default;
};

struct RobotDescription {
  std::string name;
  std::vector<SectionSpec> sections;
  Mount world_mount;
  Mount effector_mount;
  double gravity = 9.80665;                 // m/s^2
  Vec3 gravity_direction{0.0, 0.0, -1.0};   // unit vector in the world frame
  double outer_diameter = 12.7e-3;          // m
  bool pcd_is_diameter = false;             // document stores pitch diameters
  std::vector<CableRoute> cables;

  int disk_count() const;
  int joint_count() const { return disk_count(); }
  Vec3 gravity_vector() const { return gravity * gravity_direction; }

  bool operator==(const RobotDescription&) const = default;
};

/// Flattened per-disk and per-joint view of a description.
///
/// Disk 0 is the fixed base disk; disks 1..N are the arm disks in order.
/// Joint g (0-based) bends the gap between disk g and disk g+1.
struct DiskInfo {
  int section = -1;   // 0-based, -1 for the base disk
  int index = 0;      // 1-based position within the section, 0 for the base
  SectionKind kind = SectionKind::Body;
  double thickness = 0.0;
  double mass = 0.0;
};

struct JointInfo {
  int section = 0;
  int index = 0;      // 1-based within the section
  SectionKind kind = SectionKind::Body;
  JointAxis axis = JointAxis::X;
  double delta_ell = 0.0;
  double stiffness = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double bevel_s1 = 0.0;
  double bevel_s2 = 0.0;
};

struct ChainLayout {
  std::vector<DiskInfo> disks;      // size N + 1
  std::vector<JointInfo> joints;    // size N
  std::vector<int> section_first_joint;  // size sections + 1, prefix offsets

  int joint_count() const { return static_cast<int>(joints.size()); }
  /// Global index of the end disk of a section.
  int end_disk(int section) const { return section_first_joint[section + 1]; }
};

ChainLayout make_layout(const RobotDescription& desc);

/// Bending-plane projection of a hole at (x, y) for a joint axis; positive on the inside of a positive bend.
inline double bending_projection(JointAxis axis, double x, double y) { return axis == JointAxis::X ? y : x; }

/// Proximal-face (h') and distal-face (h) points of a routing hole, in the disk frame [m].
struct HolePoints {
  Vec3 proximal;
  Vec3 distal;
};

/// Hole geometry for cable `cable_id` (1-based) in disk `disk` (1-based) of section `section` (1-based).
/// Disk (1, 0) addresses the fixed base disk.
HolePoints disk_hole_frame(const RobotDescription& desc, int section, int disk, int cable_id);

/// Same, addressed by global disk index; `cable` is a position in desc.cables.
HolePoints hole_points(const RobotDescription& desc, const ChainLayout& layout, int cable, int global_disk);

/// Global index of the disk where a cable is anchored.
int termination_disk(const ChainLayout& layout, const CableRoute& cable);

/// Position of a cable id in desc.cables; throws DomainError if absent.
int cable_index(const RobotDescription& desc, int cable_id);

struct ValidationIssue {
  std::string path;
  std::string message;
};
using ValidationReport = std::vector<ValidationIssue>;

/// Lists every violated invariant; an empty report means the description is valid.
ValidationReport validate_description(const RobotDescription& desc);

/// Parses a description document (JSON). Throws ParseError or SchemaError.
RobotDescription load_description(std::string_view json_text);
RobotDescription load_description_file(const std::string& path);

/// Serialises in SI units so that load_description(serialize_description(d)) == d.
std::string serialize_description(const RobotDescription& desc);

/// JSON schema of the description document.
std::string description_schema();

/// The bundled reference robot document and its parsed form.
const std::string& bundled_reference_robot_json();
const RobotDescription& reference_robot();

}  // namespace tendonstat
