#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"
#include "tendonstat/errors.hpp"
#include "tendonstat/units.hpp"

using namespace tstest;

namespace {

const char* kMinimal = R"({
  "units": {"length": "mm", "angle": "deg"},
  "sections": [{"kind": "body", "disk_count": 2, "bevels": {"s1": 1.25, "s2": 11.25}}],
  "cables": [
    {"id": 1, "pitch_radius": 5.5, "phase_deg": 90, "terminates_at_section": 1},
    {"id": 2, "pitch_radius": 5.5, "phase_deg": 270, "terminates_at_section": 1}
  ]
})";

bool mentions(const ValidationReport& r, const std::string& needle) {
  for (const auto& i : r)
    if (i.path.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST(RobotModel, BundledRobotCounts) {
  const auto& d = robot();
  EXPECT_EQ(d.sections.size(), 13u);
  EXPECT_EQ(d.disk_count(), 110);
  EXPECT_EQ(d.cables.size(), 29u);
  int body = 0;
  for (const auto& s : d.sections) body += s.kind == SectionKind::Body ? s.disk_count : 0;
  EXPECT_EQ(body, 80);
  EXPECT_TRUE(validate_description(d).empty());
}

TEST(RobotModel, MinimalDocumentIsValid) {
  const auto d = load_description(kMinimal);
  EXPECT_EQ(d.disk_count(), 2);
  EXPECT_TRUE(validate_description(d).empty());
}

TEST(RobotModel, SingleDiskSectionIsRejected) {
  std::string doc = kMinimal;
  doc.replace(doc.find("\"disk_count\": 2"), 15, "\"disk_count\": 1");
  EXPECT_THROW(load_description(doc), SchemaError);
}

TEST(RobotModel, MalformedDocuments) {
  EXPECT_THROW(load_description("{ not json"), ParseError);
  EXPECT_THROW(load_description("[]"), SchemaError);
  std::string doc = kMinimal;
  doc.replace(doc.find("\"terminates_at_section\": 1"), 26, "\"terminates_at_section\": 4");
  EXPECT_THROW(load_description(doc), SchemaError);
  doc = kMinimal;
  doc.replace(doc.find("\"body\""), 6, "\"neck\"");
  EXPECT_THROW(load_description(doc), SchemaError);
}

TEST(RobotModel, SchemaErrorCarriesPath) {
  std::string doc = kMinimal;
  doc.replace(doc.find("\"pitch_radius\": 5.5"), 19, "\"pitch_radius\": \"x\"");
  try {
    load_description(doc);
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.path(), "/cables/0/pitch_radius");
  }
}

TEST(RobotModel, OversizedPitchRadiusIsOneViolation) {
  auto d = robot();
  d.cables[0].pitch_radius = 6.2e-3;
  const auto r = validate_description(d);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].path, "/cables/0/pitch_radius");
}

TEST(RobotModel, SwappedBevelsBreakDeclaredLimits) {
  auto d = robot();
  std::swap(d.sections[0].bevel_s1, d.sections[0].bevel_s2);
  const auto r = validate_description(d);
  EXPECT_FALSE(r.empty());
  EXPECT_TRUE(mentions(r, "/sections/0/bend_limits"));
}

TEST(RobotModel, DeclaredBodyLimitsFollowBevels) {
  for (const auto& s : robot().sections) {
    if (s.kind != SectionKind::Body) continue;
    EXPECT_NEAR(s.disk_count * s.joint_upper(), units::deg(90), 1e-12);
    EXPECT_NEAR(s.disk_count * s.joint_lower(), units::deg(-10), 1e-12);
  }
}

TEST(RobotModel, TipAxesAlternateStartingWithY) {
  const auto& s = robot().sections.back();
  ASSERT_EQ(s.kind, SectionKind::Tip);
  for (int j = 0; j < s.disk_count; ++j) EXPECT_EQ(s.joint_axes[j], j % 2 == 0 ? JointAxis::Y : JointAxis::X);
  EXPECT_EQ(s.joints_on(JointAxis::X), 5);
}

TEST(RobotModel, LayoutIndexing) {
  const auto L = make_layout(robot());
  EXPECT_EQ(L.joint_count(), 110);
  EXPECT_EQ(L.disks.size(), 111u);
  EXPECT_EQ(L.disks[0].section, -1);
  EXPECT_EQ(L.end_disk(0), 8);
  EXPECT_EQ(L.end_disk(9), 80);
  EXPECT_EQ(L.end_disk(12), 110);
  EXPECT_EQ(L.joints[80].kind, SectionKind::Tip);
  EXPECT_EQ(L.disks[110].index, 10);
}

TEST(RobotModel, HoleOnNeutralAxis) {
  auto d = robot();
  d.cables[0].phase = 0.0;
  d.cables[1].phase = units::kPi;
  const auto h = disk_hole_frame(d, 1, 3, 1);
  EXPECT_NEAR(bending_projection(JointAxis::X, h.proximal.x(), h.proximal.y()), 0.0, 1e-18);
  EXPECT_NEAR(h.proximal.x(), 5.5e-3, 1e-15);
  // No bevel recess on the neutral axis.
  EXPECT_NEAR(h.distal.z() - h.proximal.z(), d.sections[0].disk_thickness, 1e-15);
}

TEST(RobotModel, HoleProjectionAndBevelRecess) {
  const auto& d = robot();
  const auto h = disk_hole_frame(d, 1, 3, 1);  // phase 90 deg, rides on bevel s1
  EXPECT_NEAR(h.proximal.y(), 5.5e-3, 1e-15);
  const double s = 5.5e-3;
  const double recess = s * std::tan(units::deg(1.25));
  EXPECT_NEAR(h.distal.z(), 1.25e-3 - recess, 1e-15);
  EXPECT_NEAR(h.proximal.z(), -(1.25e-3 - recess), 1e-15);
  // Base disk proximal face is flat, last body disk distal face is bevelled for the next joint.
  const auto base = disk_hole_frame(d, 1, 0, 1);
  EXPECT_NEAR(base.proximal.z(), -1.25e-3, 1e-15);
}

TEST(RobotModel, QuarterPhaseProjection) {
  auto d = robot();
  d.cables[0].phase = units::kPi / 4.0;
  const auto h = disk_hole_frame(d, 1, 2, 1);
  EXPECT_NEAR(units::to_mm(bending_projection(JointAxis::X, h.distal.x(), h.distal.y())), 3.889, 5e-4);
}

TEST(RobotModel, SerializeRoundTrip) {
  const auto& d = robot();
  const auto text = serialize_description(d);
  EXPECT_EQ(load_description(text), d);
  EXPECT_EQ(serialize_description(load_description(text)), text);
}

TEST(RobotModel, PitchDiametersAreHalved) {
  std::string doc = kMinimal;
  doc.insert(doc.find("\"sections\""), "\"pcd_is_diameter\": true, ");
  doc.replace(doc.find("\"pitch_radius\": 5.5"), 19, "\"pitch_radius\": 11.0");
  const auto d = load_description(doc);
  EXPECT_NEAR(d.cables[0].pitch_radius, 5.5e-3, 1e-15);
}

TEST(RobotModel, SchemaIsJson) {
  const auto s = description_schema();
  EXPECT_NE(s.find("\"sections\""), std::string::npos);
  EXPECT_NE(s.find("\"cables\""), std::string::npos);
}

TEST(RobotModel, UnknownCableIdThrows) { EXPECT_THROW(cable_index(robot(), 99), DomainError); }
