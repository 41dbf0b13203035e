#include "tendonstat/statics.hpp"

#include <cmath>
#include <string>

#include "tendonstat/errors.hpp"

namespace tendonstat {

namespace {

double turn_angle(const Vec3& from, const Vec3& to) { return std::atan2(from.cross(to).norm(), from.dot(to)); }

double friction_step(double tension, double turn, const FrictionModel& friction, CableDirection direction,
                     int cable_id, int hole) {
  if (friction.is_frictionless() || turn == 0.0) return tension;
  const double ms = friction(turn) * std::sin(0.5 * turn);
  if (direction == CableDirection::Pulling) {
    if (ms >= 1.0)
      throw SlackCableError(cable_id, hole,
                            "cable " + std::to_string(cable_id) + " goes slack at hole " + std::to_string(hole));
    return tension * (1.0 - ms) / (1.0 + ms);
  }
  if (ms >= 1.0)
    throw SlackCableError(cable_id, hole,
                          "friction locks cable " + std::to_string(cable_id) + " at hole " + std::to_string(hole));
  return tension * (1.0 + ms) / (1.0 - ms);
}

// Splits a hole-edge reaction into its part along the bisector of the two cable
// directions (normal) and the remainder (friction).
void split_edge(const Vec3& a, const Vec3& b, const Vec3& force, Vec3& normal, Vec3& friction) {
  const Vec3 bisector = a + b;
  const double n = bisector.norm();
  if (n < 1e-15) {
    friction += force;
    return;
  }
  const Vec3 unit = bisector / n;
  const Vec3 fn = force.dot(unit) * unit;
  normal += fn;
  friction += force - fn;
}

// Global disk index to the (section, disk) addressing of disk_hole_frame.
std::pair<int, int> section_address(const RobotDescription& desc, int global) {
  if (global == 0) return {1, 0};
  int remaining = global;
  for (int i = 0; i < static_cast<int>(desc.sections.size()); ++i) {
    if (remaining <= desc.sections[i].disk_count) return {i + 1, remaining};
    remaining -= desc.sections[i].disk_count;
  }
  throw DomainError("disk index out of range: " + std::to_string(global));
}

}  // namespace

double TensionLadder::total_turn() const {
  double sum = 0.0;
  const int t = static_cast<int>(bore.size()) - 1;
  for (int d = 0; d < t; ++d) sum += exit_turn[d];
  for (int d = 1; d < t; ++d) sum += entry_turn[d];
  return sum;
}

TensionLadder propagate_tensions(const RoutePoints& route, int cable_id, double proximal_tension,
                                 const FrictionModel& friction, CableDirection direction) {
  if (!(proximal_tension >= 0.0))
    throw DomainError("proximal tension of cable " + std::to_string(cable_id) + " must be non-negative");
  const int t = static_cast<int>(route.proximal.size()) - 1;
  TensionLadder ladder;
  ladder.cable_id = cable_id;
  ladder.direction = direction;
  ladder.gap.resize(t);
  ladder.bore.resize(t + 1);
  ladder.entry_turn.assign(t + 1, 0.0);
  ladder.exit_turn.assign(t + 1, 0.0);
  ladder.bore[0] = proximal_tension;
  for (int d = 0; d < t; ++d) {
    const Vec3 u = (route.proximal[d + 1] - route.distal[d]).normalized();
    ladder.exit_turn[d] = turn_angle(route.axis[d], u);
    ladder.gap[d] = friction_step(ladder.bore[d], ladder.exit_turn[d], friction, direction, cable_id, 2 * d + 1);
    ladder.entry_turn[d + 1] = turn_angle(u, route.axis[d + 1]);
    // The anchor takes the span tension without sliding.
    ladder.bore[d + 1] = d + 1 == t ? ladder.gap[d]
                                    : friction_step(ladder.gap[d], ladder.entry_turn[d + 1], friction, direction,
                                                    cable_id, 2 * d + 2);
  }
  return ladder;
}

TensionLadder propagate_tensions(const RobotDescription& desc, const Configuration& config, int cable_id,
                                 double proximal_tension, const FrictionModel& friction, CableDirection direction) {
  const StaticsModel model(desc);
  const auto poses = chain_pose(desc, config);
  return propagate_tensions(model.route(poses, cable_index(desc, cable_id)), cable_id, proximal_tension, friction,
                            direction);
}

Wrench Wrench::operator+(const Wrench& rhs) const {
  Wrench out = *this;
  out += rhs;
  return out;
}

Wrench& Wrench::operator+=(const Wrench& rhs) {
  if (frame != rhs.frame)
    throw DomainError("cannot add wrenches in frames " + std::to_string(frame) + " and " + std::to_string(rhs.frame));
  force += rhs.force;
  moment += rhs.moment;
  return *this;
}

Wrench to_disk_frame(const Wrench& world, const ChainPoses& poses, int disk) {
  if (world.frame != kWorldFrame) throw DomainError("expected a world-frame wrench");
  const Pose& P = poses.disks.at(disk);
  return {P.R.transpose() * world.force, P.R.transpose() * (world.moment - P.p.cross(world.force)), disk};
}

Wrench to_world_frame(const Wrench& local, const ChainPoses& poses) {
  if (local.frame == kWorldFrame) return local;
  const Pose& P = poses.disks.at(local.frame);
  const Vec3 f = P.R * local.force;
  return {f, P.R * local.moment + P.p.cross(f), kWorldFrame};
}

CableLoad cable_wrench(const RobotDescription& desc, const Configuration& config, int disk,
                       const std::vector<TensionLadder>& ladders) {
  if (disk < 1 || disk > desc.disk_count()) throw DomainError("disk index out of range: " + std::to_string(disk));
  const StaticsModel model(desc);
  const auto poses = chain_pose(desc, config);

  Wrench world;
  CableLoad load;
  for (const auto& ladder : ladders) {
    const int c = cable_index(desc, ladder.cable_id);
    const int t = model.termination(c);
    if (disk > t) continue;
    if (static_cast<int>(ladder.gap.size()) != t)
      throw DomainError("ladder of cable " + std::to_string(ladder.cable_id) + " does not cover disk " +
                        std::to_string(disk));
    const auto route = model.route(poses, c);
    const Vec3 z = route.axis[disk];

    const Vec3 back = (route.distal[disk - 1] - route.proximal[disk]).normalized();
    const Vec3 f_in = ladder.gap[disk - 1] * back;
    Vec3 entry = f_in;
    if (disk < t) entry += ladder.bore[disk] * z;
    world.force += entry;
    world.moment += route.proximal[disk].cross(entry);
    load.tension_in += f_in;
    if (disk < t) {
      split_edge(back, z, entry, load.normal, load.friction);
      const Vec3 ahead = (route.proximal[disk + 1] - route.distal[disk]).normalized();
      const Vec3 f_out = ladder.gap[disk] * ahead;
      const Vec3 exit = f_out - ladder.bore[disk] * z;
      world.force += exit;
      world.moment += route.distal[disk].cross(exit);
      load.tension_out += f_out;
      split_edge(-z, ahead, exit, load.normal, load.friction);
    } else {
      load.normal += entry;
    }
  }

  const Pose& P = poses.disks[disk - 1];
  const Mat3 Rt = P.R.transpose();
  load.wrench = to_disk_frame(world, poses, disk - 1);
  load.tension_in = Rt * load.tension_in;
  load.tension_out = Rt * load.tension_out;
  load.normal = Rt * load.normal;
  load.friction = Rt * load.friction;
  return load;
}

Wrench gravity_wrench(const RobotDescription& desc, const ChainPoses& poses, int disk) {
  const auto layout = make_layout(desc);
  if (disk < 1 || disk > layout.joint_count()) throw DomainError("disk index out of range: " + std::to_string(disk));
  const Vec3 g = layout.disks[disk].mass * desc.gravity_vector();
  const Vec3 at = poses.disks[disk].p;
  return to_disk_frame({g, at.cross(g), kWorldFrame}, poses, disk - 1);
}

Wrench external_wrench(const RobotDescription& desc, const LoadSet& loads, const ChainPoses& poses, int disk) {
  const int n = static_cast<int>(poses.disks.size()) - 1;
  if (disk < 1 || disk > n) throw DomainError("disk index out of range: " + std::to_string(disk));
  if (loads.payload_mass < 0.0) throw DomainError("payload mass must be non-negative");
  Wrench world;
  const Vec3 w = loads.payload_mass * desc.gravity_vector();
  world.force = w + loads.force;
  world.moment = poses.disks[n].p.cross(w) + poses.effector.p.cross(loads.force) + loads.moment;
  return to_disk_frame(world, poses, disk - 1);
}

double restoring_moment(double youngs_modulus, double second_moment, double theta, double delta_ell) {
  if (!(delta_ell > 0.0)) throw DomainError("segment arc length must be positive");
  return youngs_modulus * second_moment * theta / delta_ell;
}

Vec3 bend_axis(const ChainLayout& layout, const ChainPoses& poses, int joint) {
  const Mat3& R = poses.disks[joint].R;
  return layout.joints[joint].axis == JointAxis::X ? Vec3(-R.col(0)) : Vec3(R.col(1));
}

// ---------------------------------------------------------------------------

StaticsModel::StaticsModel(RobotDescription desc) : desc_(std::move(desc)), layout_(make_layout(desc_)) {
  const int cables = static_cast<int>(desc_.cables.size());
  termination_.resize(cables);
  holes_.resize(cables);
  for (int c = 0; c < cables; ++c) {
    termination_[c] = termination_disk(layout_, desc_.cables[c]);
    for (int d = 0; d <= termination_[c]; ++d) holes_[c].push_back(hole_points(desc_, layout_, c, d));
  }
}

RoutePoints StaticsModel::route(const ChainPoses& poses, int cable) const {
  RoutePoints r;
  const int t = termination_[cable];
  r.proximal.reserve(t + 1);
  r.distal.reserve(t + 1);
  r.axis.reserve(t + 1);
  for (int d = 0; d <= t; ++d) {
    const Pose& P = poses.disks[d];
    r.proximal.push_back(P.apply(holes_[cable][d].proximal));
    r.distal.push_back(P.apply(holes_[cable][d].distal));
    r.axis.push_back(P.R.col(2));
  }
  return r;
}

std::vector<TensionLadder> StaticsModel::ladders(const ChainPoses& poses, const Eigen::VectorXd& proximal_tensions,
                                                 const FrictionModel& friction, CableDirection direction) const {
  if (proximal_tensions.size() != cable_count())
    throw DomainError("expected " + std::to_string(cable_count()) + " cable tensions, got " +
                      std::to_string(proximal_tensions.size()));
  std::vector<TensionLadder> out;
  out.reserve(cable_count());
  for (int c = 0; c < cable_count(); ++c)
    out.push_back(propagate_tensions(route(poses, c), desc_.cables[c].id, proximal_tensions[c], friction, direction));
  return out;
}

Eigen::VectorXd StaticsModel::residual(const Eigen::VectorXd& theta, const std::vector<TensionLadder>& ladders,
                                       const LoadSet& loads, double gravity_scale, double tension_scale) const {
  const int n = joint_count();
  const auto poses = chain_pose(desc_, layout_, theta);

  // Per-disk force and moment about the world origin.
  std::vector<Vec3> force(n + 1, Vec3::Zero());
  std::vector<Vec3> moment(n + 1, Vec3::Zero());
  const Vec3 g = gravity_scale * desc_.gravity_vector();
  for (int d = 1; d <= n; ++d) {
    const Vec3 w = layout_.disks[d].mass * g;
    force[d] += w;
    moment[d] += poses.disks[d].p.cross(w);
  }
  const Vec3 payload = loads.payload_mass * g;
  force[n] += payload + loads.force;
  moment[n] += poses.disks[n].p.cross(payload) + poses.effector.p.cross(loads.force) + loads.moment;

  for (int c = 0; c < cable_count(); ++c) {
    const int t = termination_[c];
    const auto& ladder = ladders[c];
    Vec3 prev_distal = poses.disks[0].apply(holes_[c][0].distal);
    for (int d = 1; d <= t; ++d) {
      const Pose& P = poses.disks[d];
      const Vec3 h_in = P.apply(holes_[c][d].proximal);
      const Vec3 f_in = tension_scale * ladder.gap[d - 1] * (prev_distal - h_in).normalized();
      force[d] += f_in;
      moment[d] += h_in.cross(f_in);
      if (d < t) {
        const Vec3 h_out = P.apply(holes_[c][d].distal);
        const Vec3 next_in = poses.disks[d + 1].apply(holes_[c][d + 1].proximal);
        const Vec3 f_out = tension_scale * ladder.gap[d] * (next_in - h_out).normalized();
        force[d] += f_out;
        moment[d] += h_out.cross(f_out);
        prev_distal = h_out;
      }
    }
  }

  Eigen::VectorXd r(n);
  Vec3 sum_f = Vec3::Zero();
  Vec3 sum_m = Vec3::Zero();
  for (int j = n - 1; j >= 0; --j) {
    sum_f += force[j + 1];
    sum_m += moment[j + 1];
    const Vec3 about = sum_m - poses.disks[j].p.cross(sum_f);
    r[j] = bend_axis(layout_, poses, j).dot(about) - layout_.joints[j].stiffness * theta[j];
  }
  return r;
}

Eigen::VectorXd audit_moment_balance(const RobotDescription& desc, const Configuration& config,
                                     const std::vector<TensionLadder>& ladders, const LoadSet& loads, bool gravity) {
  const auto poses = chain_pose(desc, config);
  const int n = desc.disk_count();
  const Vec3 g = gravity ? desc.gravity_vector() : Vec3::Zero();

  // Per-disk masses and joint properties straight from the section specs.
  std::vector<double> mass(n + 1, 0.0);
  std::vector<double> stiffness(n, 0.0);
  std::vector<JointAxis> axis(n, JointAxis::X);
  {
    int d = 0;
    for (const auto& s : desc.sections)
      for (int j = 0; j < s.disk_count; ++j) {
        stiffness[d] = restoring_moment(s.backbone.youngs_modulus, s.backbone.second_moment(), 1.0, s.delta_ell);
        axis[d] = s.joint_axes[j];
        mass[++d] = s.disk_mass;
      }
  }

  // Each cable crossing a joint acts on the distal subchain only through its cut span.
  struct Span {
    Vec3 point;
    Vec3 pull;
  };
  std::vector<std::vector<Span>> spans(n);
  for (const auto& ladder : ladders) {
    const int t = static_cast<int>(ladder.gap.size());
    for (int gidx = 0; gidx < t; ++gidx) {
      const auto [si, sj] = section_address(desc, gidx);
      const auto [ti, tj] = section_address(desc, gidx + 1);
      const Vec3 h = poses.disks[gidx].apply(disk_hole_frame(desc, si, sj, ladder.cable_id).distal);
      const Vec3 hp = poses.disks[gidx + 1].apply(disk_hole_frame(desc, ti, tj, ladder.cable_id).proximal);
      spans[gidx].push_back({hp, ladder.gap[gidx] * (h - hp).normalized()});
    }
  }

  const Eigen::VectorXd theta = config.flatten();
  Eigen::VectorXd r(n);
  const Vec3 payload = loads.payload_mass * g;
  for (int j = 0; j < n; ++j) {
    const Vec3 o = poses.disks[j].p;
    Vec3 m = Vec3::Zero();
    for (int d = j + 1; d <= n; ++d) m += (poses.disks[d].p - o).cross(mass[d] * g);
    m += (poses.disks[n].p - o).cross(payload);
    m += (poses.effector.p - o).cross(loads.force);
    m += loads.moment;
    for (const auto& s : spans[j]) m += (s.point - o).cross(s.pull);
    const Mat3& R = poses.disks[j].R;
    const Vec3 b = axis[j] == JointAxis::X ? Vec3(-R.col(0)) : Vec3(R.col(1));
    r[j] = b.dot(m) - stiffness[j] * theta[j];
  }
  return r;
}

}  // namespace tendonstat
