#pragma once

#include <random>

#include "tendonstat/experiments.hpp"
#include "tendonstat/kinematics.hpp"
#include "tendonstat/robot_model.hpp"

namespace tstest {

using namespace tendonstat;

inline const RobotDescription& robot() { return reference_robot(); }

inline RobotDescription one_body() { return single_section_description(reference_robot()); }

/// Uniformly random joint angles strictly inside every limit.
inline Configuration random_config(const RobotDescription& desc, std::mt19937_64& rng) {
  const auto layout = make_layout(desc);
  Eigen::VectorXd th(layout.joint_count());
  for (int g = 0; g < layout.joint_count(); ++g) {
    std::uniform_real_distribution<double> u(layout.joints[g].lower, layout.joints[g].upper);
    th[g] = u(rng);
  }
  return Configuration::from_flat(desc, th);
}

inline Configuration uniform_body(const RobotDescription& desc, int section, double total) {
  Configuration c = Configuration::zero(desc);
  for (auto& v : c.sections[section]) v = total / static_cast<double>(c.sections[section].size());
  return c;
}

/// Straight spans between consecutive hole points of one cable, one per gap crossed.
inline std::vector<double> gap_chords(const RobotDescription& desc, const Configuration& config, int cable_id) {
  const auto layout = make_layout(desc);
  const int end = termination_disk(layout, desc.cables[cable_index(desc, cable_id)]);
  const auto poses = chain_pose(desc, config);
  std::vector<double> out;
  for (int d = 0; d < end; ++d) {
    const auto& a = layout.disks[d];
    const auto& b = layout.disks[d + 1];
    const auto h0 = disk_hole_frame(desc, d == 0 ? 1 : a.section + 1, d == 0 ? 0 : a.index, cable_id);
    const auto h1 = disk_hole_frame(desc, b.section + 1, b.index, cable_id);
    out.push_back((poses.disks[d + 1].apply(h1.proximal) - poses.disks[d].apply(h0.distal)).norm());
  }
  return out;
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace tstest
