#pragma once

#include <limits>
#include <vector>

#include <Eigen/Core>

#include "tendonstat/pose.hpp"

namespace tendonstat {

struct CircleFit {
  Eigen::Vector2d centre = Eigen::Vector2d::Zero();  // in the fitted plane
  double radius = std::numeric_limits<double>::infinity();
  double rms = 0.0;        // RMS of |distance to centre| - radius
  bool straight = false;   // points are collinear
  Vec3 centre_3d = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();
};

/// Algebraic least-squares circle. Throws DomainError with fewer than 3 points.
CircleFit circle_fit(const std::vector<Eigen::Vector2d>& points);

/// 3-D points are projected onto their best-fit plane first.
CircleFit circle_fit(const std::vector<Vec3>& points);

}  // namespace tendonstat
