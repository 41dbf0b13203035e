#include "tendonstat/pose.hpp"

#include <cmath>

namespace tendonstat {

Eigen::Matrix4d Pose::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = R;
  m.topRightCorner<3, 1>() = p;
  return m;
}

Eigen::Quaterniond Pose::quaternion() const {
  Eigen::Quaterniond q(R);
  q.normalize();
  if (q.w() < 0.0) q.coeffs() *= -1.0;
  return q;
}

double Pose::orthonormality_error() const {
  return (R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff();
}

Mat3 rot_x(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 m;
  m << 1, 0, 0, 0, c, -s, 0, s, c;
  return m;
}

Mat3 rot_y(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 m;
  m << c, 0, s, 0, 1, 0, -s, 0, c;
  return m;
}

Mat3 rot_z(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 m;
  m << c, -s, 0, s, c, 0, 0, 0, 1;
  return m;
}

Mat3 mount_rotation(const Vec3& rpy) { return rot_x(rpy.x()) * rot_y(rpy.y()) * rot_z(rpy.z()); }

}  // namespace tendonstat
