#include <gtest/gtest.h>

#include <cmath>

#include "tendonstat/errors.hpp"
#include "tendonstat/experiments.hpp"
#include "tendonstat/friction.hpp"
#include "tendonstat/units.hpp"

using namespace tendonstat;
using units::deg;

namespace {

// mu = 0.001 t^2 + 0.01 t + 0.1 with t in degrees, rewritten for radians.
FrictionModel planted() {
  const double k = 180.0 / units::kPi;
  return {0.001 * k * k, 0.01 * k, 0.1, 0.0, deg(20)};
}

}  // namespace

TEST(Friction, QuadraticEvaluation) {
  const FrictionModel m{0.5, 0.1, 0.1, 0.0, 1.0};
  EXPECT_NEAR(m(0.2), 0.14, 1e-15);
  EXPECT_NEAR(friction_coefficient(m, 0.2), 0.14, 1e-15);
  EXPECT_THROW(m(1.1), DomainError);
  EXPECT_THROW(m(-0.1), DomainError);
  const FrictionModel flat{0.0, 0.0, 0.3, 0.0, 1.0};
  for (double t : {0.0, 0.4, 1.0}) EXPECT_EQ(flat(t), 0.3);
  EXPECT_TRUE(FrictionModel::frictionless().is_frictionless());
}

TEST(Friction, MaxOverDomain) {
  EXPECT_NEAR((FrictionModel{1.0, 0.0, 0.1, 0.0, 0.5}).max_over_domain(), 0.35, 1e-15);
  // Concave with the vertex inside the domain.
  EXPECT_NEAR((FrictionModel{-1.0, 1.0, 0.0, 0.0, 1.0}).max_over_domain(), 0.25, 1e-15);
}

TEST(Friction, LiftingTensionMatchesPulleyBalance) {
  const double W = 9.81, th = deg(10), mu = 0.3;
  const double T = lifting_tension(W, th, mu);
  EXPECT_NEAR(T - W, mu * normal_force(T, W, th), 1e-13);
  EXPECT_EQ(lifting_tension(W, th, 0.0), W);
  EXPECT_THROW(lifting_tension(W, units::kPi, 1.5), DomainError);
}

TEST(Friction, RecoversPlantedQuadratic) {
  const auto m = planted();
  const auto fit = fit_friction_model(synthetic_trials(m));
  ASSERT_EQ(fit.angles.size(), 4u);
  EXPECT_NEAR(fit.model.a / m.a, 1.0, 1e-9);
  EXPECT_NEAR(fit.model.b / m.b, 1.0, 1e-9);
  EXPECT_NEAR(fit.model.c / m.c, 1.0, 1e-9);
  EXPECT_NEAR(fit.model.theta_max, deg(20), 1e-15);
  for (const auto& a : fit.angles) {
    EXPECT_NEAR(a.mu, m(a.theta), 1e-12);
    EXPECT_NEAR(a.intercept, 0.0, 1e-12);
    EXPECT_EQ(a.normal_force.size(), 5u);
  }
}

TEST(Friction, TwoAnglesGiveALine) {
  std::vector<FrictionTrial> t;
  for (double th : {deg(5), deg(15)})
    for (double w : {1.0, 2.0, 3.0}) t.push_back({th, w, lifting_tension(w, th, 0.2 + th)});
  const auto fit = fit_friction_model(t);
  EXPECT_EQ(fit.model.a, 0.0);
  EXPECT_NEAR(fit.model.b, 1.0, 1e-12);
  EXPECT_NEAR(fit.model.c, 0.2, 1e-12);
}

TEST(Friction, InsufficientData) {
  EXPECT_THROW(fit_friction_model({}), DomainError);
  std::vector<FrictionTrial> one_angle{{deg(5), 1.0, 1.1}, {deg(5), 2.0, 2.2}};
  EXPECT_THROW(fit_friction_model(one_angle), DomainError);
  std::vector<FrictionTrial> one_weight{{deg(5), 1.0, 1.1}, {deg(10), 1.0, 1.2}};
  EXPECT_THROW(fit_friction_model(one_weight), DomainError);
}

TEST(Friction, DuplicatedTrialsDoNotMoveTheFit) {
  auto t = synthetic_trials(planted());
  const auto once = fit_friction_model(t);
  const auto copy = t;
  t.insert(t.end(), copy.begin(), copy.end());
  const auto twice = fit_friction_model(t);
  EXPECT_NEAR(twice.model.a, once.model.a, 1e-10 * std::abs(once.model.a));
  EXPECT_NEAR(twice.model.b, once.model.b, 1e-10 * std::abs(once.model.b));
  EXPECT_NEAR(twice.model.c, once.model.c, 1e-12);
}
