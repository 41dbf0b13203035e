#include "tendonstat/circle_fit.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "tendonstat/errors.hpp"

namespace tendonstat {

namespace {

constexpr double kCollinear = 1e-10;

void require_three(std::size_t n) {
  if (n < 3) throw DomainError("circle fit needs at least 3 points, got " + std::to_string(n));
}

}  // namespace

CircleFit circle_fit(const std::vector<Eigen::Vector2d>& points) {
  require_three(points.size());
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& q : points) mean += q;
  mean /= static_cast<double>(n);

  // Centre and scale so the normal equations stay well conditioned.
  Eigen::MatrixXd X(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) X.row(i) = (points[i] - mean).transpose();
  const double scale = std::sqrt(X.squaredNorm() / static_cast<double>(n));
  CircleFit fit;
  if (scale == 0.0) {
    fit.straight = true;
    return fit;
  }
  X /= scale;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(X);
  if (svd.singularValues()[1] <= kCollinear * svd.singularValues()[0]) {
    fit.straight = true;
    return fit;
  }

  // x^2 + y^2 + D x + E y + F = 0
  Eigen::MatrixXd A(n, 3);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    A(i, 0) = X(i, 0);
    A(i, 1) = X(i, 1);
    A(i, 2) = 1.0;
    b[i] = -(X(i, 0) * X(i, 0) + X(i, 1) * X(i, 1));
  }
  const Eigen::Vector3d s = A.colPivHouseholderQr().solve(b);
  const Eigen::Vector2d c(-s[0] / 2.0, -s[1] / 2.0);
  const double r2 = c.squaredNorm() - s[2];
  if (!(r2 > 0.0) || !std::isfinite(r2)) {
    fit.straight = true;
    return fit;
  }
  fit.centre = mean + scale * c;
  fit.radius = scale * std::sqrt(r2);
  double acc = 0.0;
  for (const auto& q : points) {
    const double d = (q - fit.centre).norm() - fit.radius;
    acc += d * d;
  }
  fit.rms = std::sqrt(acc / static_cast<double>(n));
  fit.centre_3d = Vec3(fit.centre.x(), fit.centre.y(), 0.0);
  return fit;
}

CircleFit circle_fit(const std::vector<Vec3>& points) {
  require_three(points.size());
  const auto n = static_cast<Eigen::Index>(points.size());
  Vec3 mean = Vec3::Zero();
  for (const auto& q : points) mean += q;
  mean /= static_cast<double>(n);
  Eigen::MatrixXd X(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) X.row(i) = (points[i] - mean).transpose();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  CircleFit fit;
  if (sv[0] == 0.0 || sv[1] <= kCollinear * sv[0]) {
    fit.straight = true;
    return fit;
  }
  const Vec3 u = svd.matrixV().col(0);
  const Vec3 v = svd.matrixV().col(1);
  std::vector<Eigen::Vector2d> flat;
  flat.reserve(points.size());
  for (const auto& q : points) flat.emplace_back((q - mean).dot(u), (q - mean).dot(v));
  fit = circle_fit(flat);
  fit.normal = u.cross(v);
  if (!fit.straight) fit.centre_3d = mean + fit.centre.x() * u + fit.centre.y() * v;
  // Out-of-plane scatter counts toward the residual.
  double acc = 0.0;
  for (const auto& q : points) {
    if (fit.straight) break;
    const Vec3 d = q - fit.centre_3d;
    const double h = d.dot(fit.normal);
    const double e = (d - h * fit.normal).norm() - fit.radius;
    acc += e * e + h * h;
  }
  if (!fit.straight) fit.rms = std::sqrt(acc / static_cast<double>(n));
  return fit;
}

}  // namespace tendonstat
