#include <gtest/gtest.h>

#include "tendonstat/pose.hpp"
#include "tendonstat/units.hpp"

using namespace tendonstat;

TEST(Pose, ElementaryRotationsAreRightHanded) {
  const double a = units::deg(90);
  EXPECT_LT((rot_x(a) * Vec3::UnitY() - Vec3::UnitZ()).norm(), 1e-15);
  EXPECT_LT((rot_y(a) * Vec3::UnitZ() - Vec3::UnitX()).norm(), 1e-15);
  EXPECT_LT((rot_z(a) * Vec3::UnitX() - Vec3::UnitY()).norm(), 1e-15);
}

TEST(Pose, MountRotationComposesXThenYThenZ) {
  const Vec3 rpy(0.3, -0.7, 1.1);
  EXPECT_LT((mount_rotation(rpy) - rot_x(0.3) * rot_y(-0.7) * rot_z(1.1)).norm(), 1e-15);
}

TEST(Pose, InverseUndoesCompose) {
  const Pose a{rot_x(0.4) * rot_z(-1.2), Vec3(0.01, -0.02, 0.3)};
  const Pose b{rot_y(2.0), Vec3(-0.5, 0.1, 0.0)};
  const Pose c = a * b;
  const Pose back = a.inverse() * c;
  EXPECT_LT((back.R - b.R).norm(), 1e-14);
  EXPECT_LT((back.p - b.p).norm(), 1e-15);
  EXPECT_LT((c.apply(Vec3(1, 2, 3)) - a.apply(b.apply(Vec3(1, 2, 3)))).norm(), 1e-14);
}

TEST(Pose, QuaternionHasNonNegativeScalarPart) {
  for (double a = -3.0; a <= 3.0; a += 0.25) {
    const Pose P{rot_x(a) * rot_y(0.5 * a), Vec3::Zero()};
    const auto q = P.quaternion();
    EXPECT_GE(q.w(), 0.0);
    EXPECT_NEAR(q.norm(), 1.0, 1e-15);
    EXPECT_LT((q.toRotationMatrix() - P.R).norm(), 1e-14);
  }
}

TEST(Pose, MatrixLayout) {
  const Pose P{rot_z(0.2), Vec3(1, 2, 3)};
  const auto M = P.matrix();
  EXPECT_EQ(M(3, 3), 1.0);
  EXPECT_EQ(M(0, 3), 1.0);
  EXPECT_EQ(M(2, 3), 3.0);
  EXPECT_EQ(M(3, 0), 0.0);
  EXPECT_LT(P.orthonormality_error(), 1e-15);
}
