#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "tendonstat/errors.hpp"
#include "tendonstat/statics.hpp"
#include "tendonstat/units.hpp"

using namespace tstest;
using units::deg;

namespace {

RobotDescription horizontal(RobotDescription d) {
  d.world_mount.rpy = Vec3(units::kPi / 2, units::kPi / 2, 0.0);
  return d;
}

Eigen::VectorXd tensions_on(const RobotDescription& d, std::initializer_list<std::pair<int, double>> set) {
  Eigen::VectorXd t = Eigen::VectorXd::Zero(static_cast<int>(d.cables.size()));
  for (auto [id, v] : set) t[cable_index(d, id)] = v;
  return t;
}

}  // namespace

TEST(Statics, RestoringMomentAtFullBevel) {
  const auto s = SectionSpec::body_default();
  const double M = restoring_moment(s.backbone.youngs_modulus, s.backbone.second_moment(), deg(11.25), s.delta_ell);
  EXPECT_NEAR(M, 2.221e-2, 5e-6);
  EXPECT_NEAR(s.joint_stiffness(), 0.113097, 5e-7);
  EXPECT_NEAR(SectionSpec::tip_default().joint_stiffness(), 0.0694, 5e-5);
}

TEST(Statics, MountRotationSendsLocalAxesWhereExpected) {
  const auto d = horizontal(robot());
  const auto R = d.world_mount.pose().R;
  EXPECT_LT((R * Vec3::UnitZ() - Vec3::UnitX()).norm(), 1e-15);
  EXPECT_LT((R * Vec3::UnitY() - Vec3::UnitZ()).norm(), 1e-15);
}

TEST(Statics, MasslessDisksWeighNothing) {
  auto d = horizontal(robot());
  for (auto& s : d.sections) s.disk_mass = 0.0;
  const auto P = chain_pose(d, Configuration::zero(d));
  for (int k = 1; k <= 110; k += 9) {
    const auto w = gravity_wrench(d, P, k);
    EXPECT_EQ(w.force.norm(), 0.0);
    EXPECT_EQ(w.moment.norm(), 0.0);
  }
}

TEST(Statics, VerticalArmCarriesNoGravityMoment) {
  auto d = robot();
  d.world_mount.rpy = Vec3::Zero();
  const auto r = audit_moment_balance(d, Configuration::zero(d), {}, {}, true);
  EXPECT_LT(r.cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Statics, HorizontalCantileverRootMoment) {
  const auto d = horizontal(robot());
  const auto c = Configuration::zero(d);
  const auto P = chain_pose(d, c);
  const auto L = make_layout(d);
  double expected = 0.0;
  for (int k = 1; k < static_cast<int>(P.disks.size()); ++k)
    expected += L.disks[k].mass * d.gravity * (P.disks[k].p.x() - P.disks[0].p.x());
  const auto r = audit_moment_balance(d, c, {}, {}, true);
  // Gravity droops the arm toward negative angles.
  EXPECT_NEAR(r[0], -expected, 1e-12);
  EXPECT_EQ(audit_moment_balance(d, c, {}, {}, false).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Statics, PayloadMomentAtTheRoot) {
  const auto d = horizontal(robot());
  const auto c = Configuration::zero(d);
  LoadSet loads;
  loads.payload_mass = 0.0908;
  const auto without = audit_moment_balance(d, c, {}, {}, true);
  const auto with = audit_moment_balance(d, c, {}, loads, true);
  EXPECT_NEAR(with[0] - without[0], -0.0908 * d.gravity * 0.705, 1e-12);
  EXPECT_NEAR(with[109] - without[109], -0.0908 * d.gravity * 0.0055, 1e-12);
  // Without gravity the payload has no weight.
  EXPECT_EQ(audit_moment_balance(d, c, {}, loads, false).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Statics, TipForceAndFreeMoment) {
  const auto d = horizontal(robot());
  const auto c = Configuration::zero(d);
  LoadSet loads;
  loads.force = Vec3(0, 0, 1.0);
  auto r = audit_moment_balance(d, c, {}, loads, false);
  EXPECT_NEAR(r[0], 0.705, 1e-12);
  loads = {};
  loads.moment = Vec3(0, -0.01, 0);  // about world -Y, which is local +x here
  r = audit_moment_balance(d, c, {}, loads, false);
  for (int g = 0; g < 80; ++g) EXPECT_NEAR(std::abs(r[g]), 0.01, 1e-15);
}

TEST(Statics, AntipodalPairCancelsWhenStraight) {
  const auto d = robot();
  const StaticsModel model(d);
  const auto c = Configuration::zero(d);
  const auto P = chain_pose(d, c);
  const auto ladders = model.ladders(P, tensions_on(d, {{1, 5.0}, {2, 5.0}}), FrictionModel::frictionless(),
                                     CableDirection::Pulling);
  const auto r = audit_moment_balance(d, c, ladders, {}, false);
  EXPECT_LT(r.cwiseAbs().maxCoeff(), 1e-15);
  // One side alone bends section 1 toward that cable.
  const auto one = model.ladders(P, tensions_on(d, {{1, 5.0}}), FrictionModel::frictionless(), CableDirection::Pulling);
  const auto r1 = audit_moment_balance(d, c, one, {}, false);
  EXPECT_GT(r1[0], 0.0);
  EXPECT_NEAR(r1[7], 5.0 * 5.5e-3, 1e-12);
  EXPECT_EQ(r1[8], 0.0);
}

TEST(Statics, FrictionlessLadderIsConstant) {
  const auto d = robot();
  const auto c = uniform_body(d, 0, deg(60));
  const auto lad = propagate_tensions(d, c, 1, 7.5, FrictionModel::frictionless(), CableDirection::Pulling);
  for (double t : lad.bore) EXPECT_EQ(t, 7.5);
  for (double t : lad.gap) EXPECT_EQ(t, 7.5);
}

TEST(Statics, PullingLadderDecaysWithinCapstanBound) {
  const auto d = robot();
  const auto fr = FrictionModel::default_calibration();
  auto c = uniform_body(d, 0, deg(60));
  c.sections[1] = uniform_body(d, 1, deg(45)).sections[1];
  const double T = 10.0;
  const auto lad = propagate_tensions(d, c, 3, T, fr, CableDirection::Pulling);
  EXPECT_EQ(lad.proximal(), T);
  for (std::size_t k = 1; k < lad.bore.size(); ++k) EXPECT_LT(lad.bore[k], lad.bore[k - 1]);
  EXPECT_GT(lad.total_turn(), 0.0);
  EXPECT_GE(lad.distal(), T * std::exp(-fr.max_over_domain() * lad.total_turn()));

  const auto rel = propagate_tensions(d, c, 3, T, fr, CableDirection::Releasing);
  for (std::size_t k = 1; k < rel.bore.size(); ++k) EXPECT_GT(rel.bore[k], rel.bore[k - 1]);
}

TEST(Statics, LadderRejectsNegativeTension) {
  const auto d = robot();
  EXPECT_THROW(propagate_tensions(d, Configuration::zero(d), 1, -1.0, FrictionModel::frictionless(),
                                  CableDirection::Pulling),
               DomainError);
}

TEST(Statics, ResidualAgreesWithIndependentAudit) {
  const auto d = horizontal(robot());
  const StaticsModel model(d);
  const auto fr = FrictionModel::default_calibration();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 8.0);
  for (int k = 0; k < 5; ++k) {
    const auto c = random_config(d, rng);
    const auto th = c.flatten();
    Eigen::VectorXd t(29);
    for (int i = 0; i < 29; ++i) t[i] = u(rng);
    const auto P = chain_pose(d, model.layout(), th);
    const auto lad = model.ladders(P, t, fr, CableDirection::Pulling);
    LoadSet loads;
    loads.payload_mass = 0.0454 * k;
    loads.force = Vec3(0.1, -0.2, 0.3);
    const auto a = audit_moment_balance(d, c, lad, loads, true);
    const auto r = model.residual(th, lad, loads, 1.0);
    EXPECT_LT((a - r).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Statics, WrenchFrames) {
  const auto d = horizontal(robot());
  const auto P = chain_pose(d, uniform_body(d, 0, deg(40)));
  Wrench w{Vec3(1, 2, 3), Vec3(-0.1, 0.2, 0.05), kWorldFrame};
  const auto local = to_disk_frame(w, P, 5);
  EXPECT_EQ(local.frame, 5);
  const auto back = to_world_frame(local, P);
  EXPECT_LT((back.force - w.force).norm(), 1e-14);
  EXPECT_LT((back.moment - w.moment).norm(), 1e-14);
  EXPECT_THROW(w + local, DomainError);
  const auto sum = w + w;
  EXPECT_LT((sum.force - 2 * w.force).norm(), 1e-15);
}

TEST(Statics, BendAxisDrivesPositiveAngle) {
  const auto d = horizontal(robot());
  const auto L = make_layout(d);
  const auto P = chain_pose(d, Configuration::zero(d));
  // +y maps to world up, so an x joint lifting the arm turns about world -Y.
  EXPECT_LT((bend_axis(L, P, 0) - Vec3(0, -1, 0)).norm(), 1e-15);
  for (int g : {80, 81}) EXPECT_NEAR(bend_axis(L, P, g).norm(), 1.0, 1e-15);
}
