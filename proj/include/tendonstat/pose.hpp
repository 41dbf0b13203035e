#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace tendonstat {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Rigid homogeneous transform: rotation R (orthonormal, det +1) and translation p [m].
struct Pose {
  Mat3 R = Mat3::Identity();
  Vec3 p = Vec3::Zero();

  static Pose identity() { return {}; }
  static Pose translation(const Vec3& t) { return {Mat3::Identity(), t}; }

  Pose operator*(const Pose& rhs) const { return {R * rhs.R, R * rhs.p + p}; }
  Vec3 apply(const Vec3& point) const { return R * point + p; }
  Vec3 rotate(const Vec3& v) const { return R * v; }
  Pose inverse() const {
    const Mat3 Rt = R.transpose();
    return {Rt, -(Rt * p)};
  }

  Eigen::Matrix4d matrix() const;

  /// Unit quaternion of R with w >= 0.
  Eigen::Quaterniond quaternion() const;

  /// Infinity norm of R^T R - I.
  double orthonormality_error() const;
};

/// Right-handed elementary rotations.
Mat3 rot_x(double angle);
Mat3 rot_y(double angle);
Mat3 rot_z(double angle);

/// R_X(a) R_Y(b) R_Z(c) mount rotation built from three angles [rad].
Mat3 mount_rotation(const Vec3& rpy);

}  // namespace tendonstat
