#include "tendonstat/kinematics.hpp"

#include <cmath>
#include <string>

#include "tendonstat/errors.hpp"

namespace tendonstat {

namespace {

constexpr double kSeriesBelow = 1e-4;
constexpr double kLimitSlack = 1e-12;

// (1 - cos t) / t and sin t / t with the removable singularity handled by series.
double one_minus_cos_over(double t) {
  if (std::abs(t) < kSeriesBelow) {
    const double t2 = t * t;
    return t * (0.5 - t2 / 24.0 + t2 * t2 / 720.0);
  }
  return (1.0 - std::cos(t)) / t;
}

double sin_over(double t) {
  if (std::abs(t) < kSeriesBelow) {
    const double t2 = t * t;
    return 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
  }
  return std::sin(t) / t;
}

void check_limit(double theta, double lower, double upper, const char* where) {
  if (theta < lower - kLimitSlack || theta > upper + kLimitSlack) throw BendLimitError(theta, lower, upper, where);
}

}  // namespace

Configuration Configuration::zero(const RobotDescription& desc) {
  Configuration c;
  for (const auto& s : desc.sections) c.sections.emplace_back(s.disk_count, 0.0);
  return c;
}

Configuration Configuration::from_flat(const RobotDescription& desc, const Eigen::VectorXd& flat) {
  if (flat.size() != desc.joint_count())
    throw DomainError("configuration has " + std::to_string(flat.size()) + " angles, expected " +
                      std::to_string(desc.joint_count()));
  Configuration c;
  int g = 0;
  for (const auto& s : desc.sections) {
    c.sections.emplace_back();
    for (int j = 0; j < s.disk_count; ++j) c.sections.back().push_back(flat[g++]);
  }
  return c;
}

Eigen::VectorXd Configuration::flatten() const {
  std::size_t n = 0;
  for (const auto& s : sections) n += s.size();
  Eigen::VectorXd flat(n);
  int g = 0;
  for (const auto& s : sections)
    for (double a : s) flat[g++] = a;
  return flat;
}

double Configuration::section_sum(int section) const {
  double sum = 0.0;
  for (double a : sections.at(section)) sum += a;
  return sum;
}

double Configuration::section_sum(const RobotDescription& desc, int section, JointAxis axis) const {
  const auto& axes = desc.sections.at(section).joint_axes;
  const auto& angles = sections.at(section);
  double sum = 0.0;
  for (std::size_t j = 0; j < angles.size() && j < axes.size(); ++j)
    if (axes[j] == axis) sum += angles[j];
  return sum;
}

std::optional<double> ArcParams::radius() const {
  if (kappa == 0.0) return std::nullopt;
  return 1.0 / kappa;
}

ArcParams arc_params(double theta, double ell, double phi) {
  if (!(ell > 0.0)) throw DomainError("arc length must be positive");
  return {theta / ell, phi, ell};
}

double gap_delta(double theta, double s, double bevel_s1, double bevel_s2) {
  if (s == 0.0) return 0.0;
  const double bevel = s > 0.0 ? bevel_s1 : bevel_s2;
  const double sign = s > 0.0 ? 1.0 : -1.0;
  return 2.0 * std::abs(s) * (std::sin(bevel - sign * 0.5 * theta) - std::sin(bevel)) / std::cos(bevel);
}

std::pair<double, double> body_gap_delta(double theta, double phase, double rho, double bevel_s1, double bevel_s2) {
  check_limit(theta, -bevel_s1, bevel_s2, "body gap");
  const double s = rho * std::sin(phase);
  return {gap_delta(theta, s, bevel_s1, bevel_s2), gap_delta(theta, -s, bevel_s1, bevel_s2)};
}

std::array<double, 6> tip_gap_deltas(double theta_j, double theta_j1, const std::array<double, 3>& phases,
                                     double rho, double bevel_s3) {
  check_limit(theta_j, -bevel_s3, bevel_s3, "tip gap (y)");
  check_limit(theta_j1, -bevel_s3, bevel_s3, "tip gap (x)");
  std::array<double, 6> out{};
  for (int k = 0; k < 3; ++k) {
    const double x = rho * std::cos(phases[k]);
    const double y = rho * std::sin(phases[k]);
    out[k] = gap_delta(theta_j, bending_projection(JointAxis::Y, x, y), bevel_s3, bevel_s3);
    out[3 + k] = gap_delta(theta_j1, bending_projection(JointAxis::X, x, y), bevel_s3, bevel_s3);
  }
  return out;
}

void check_configuration(const RobotDescription& desc, const Configuration& config) {
  if (config.sections.size() != desc.sections.size())
    throw DomainError("configuration has " + std::to_string(config.sections.size()) + " sections, expected " +
                      std::to_string(desc.sections.size()));
  for (std::size_t i = 0; i < desc.sections.size(); ++i) {
    const auto& s = desc.sections[i];
    if (static_cast<int>(config.sections[i].size()) != s.disk_count)
      throw DomainError("section " + std::to_string(i + 1) + " has " + std::to_string(config.sections[i].size()) +
                        " angles, expected " + std::to_string(s.disk_count));
    for (std::size_t j = 0; j < config.sections[i].size(); ++j) {
      const double a = config.sections[i][j];
      if (a < s.joint_lower() - kLimitSlack || a > s.joint_upper() + kLimitSlack)
        throw BendLimitError(a, s.joint_lower(), s.joint_upper(),
                             "section " + std::to_string(i + 1) + " joint " + std::to_string(j + 1));
    }
  }
}

CableState cable_lengths(const RobotDescription& desc, const Configuration& config) {
  check_configuration(desc, config);
  const auto layout = make_layout(desc);
  const auto theta = config.flatten();
  CableState state;
  state.lengths = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(desc.cables.size()));
  for (std::size_t c = 0; c < desc.cables.size(); ++c) {
    const auto& route = desc.cables[c];
    const int term = termination_disk(layout, route);
    double sum = 0.0;
    for (int g = 0; g < term; ++g) {
      if (theta[g] == 0.0) continue;
      const auto& joint = layout.joints[g];
      const double rho = route.radius_on(joint.kind);
      const double s = bending_projection(joint.axis, rho * std::cos(route.phase), rho * std::sin(route.phase));
      sum += gap_delta(theta[g], s, joint.bevel_s1, joint.bevel_s2);
    }
    state.lengths[static_cast<Eigen::Index>(c)] = sum;
  }
  return state;
}

Pose body_segment_transform(double theta, double delta_ell) {
  // Tilts local z toward +y.
  return {rot_x(-theta), Vec3(0.0, one_minus_cos_over(theta) * delta_ell, sin_over(theta) * delta_ell)};
}

Pose y_segment_transform(double theta, double delta_ell) {
  return {rot_y(theta), Vec3(one_minus_cos_over(theta) * delta_ell, 0.0, sin_over(theta) * delta_ell)};
}

Pose joint_transform(JointAxis axis, double theta, double delta_ell) {
  return axis == JointAxis::X ? body_segment_transform(theta, delta_ell) : y_segment_transform(theta, delta_ell);
}

Pose tip_segment_transform(double theta_j, double theta_j1, double delta_ell) {
  return y_segment_transform(theta_j, delta_ell) * body_segment_transform(theta_j1, delta_ell);
}

Pose single_arc_transform(double theta, double length) { return body_segment_transform(theta, length); }

ChainPoses chain_pose(const RobotDescription& desc, const ChainLayout& layout, const Eigen::VectorXd& theta) {
  ChainPoses out;
  out.disks.reserve(layout.disks.size());
  out.disks.push_back(desc.world_mount.pose());
  for (int g = 0; g < layout.joint_count(); ++g) {
    const auto& joint = layout.joints[g];
    out.disks.push_back(out.disks.back() * joint_transform(joint.axis, theta[g], joint.delta_ell));
  }
  out.effector = out.disks.back() * desc.effector_mount.pose();
  return out;
}

ChainPoses chain_pose(const RobotDescription& desc, const Configuration& config) {
  check_configuration(desc, config);
  return chain_pose(desc, make_layout(desc), config.flatten());
}

}  // namespace tendonstat
