#include "tendonstat/robot_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "tendonstat/errors.hpp"
#include "tendonstat/units.hpp"

namespace tendonstat {

using json = nlohmann::json;

double Backbone::second_moment() const {
  const double d2 = rod_diameter * rod_diameter;
  return rods_in_parallel * units::kPi * d2 * d2 / 64.0;
}

int SectionSpec::joints_on(JointAxis axis) const {
  return static_cast<int>(std::count(joint_axes.begin(), joint_axes.end(), axis));
}

SectionSpec SectionSpec::body_default() {
  SectionSpec s;
  s.kind = SectionKind::Body;
  s.disk_count = 8;
  s.delta_ell = units::mm(54.0 / 8.0);
  s.disk_thickness = units::mm(2.5);
  s.bevel_s1 = units::deg(1.25);
  s.bevel_s2 = units::deg(11.25);
  s.disk_mass = units::grams(141.17) / 80.0;
  s.backbone = {60e9, units::mm(0.6), 2};
  s.joint_axes.assign(8, JointAxis::X);
  return s;
}

SectionSpec SectionSpec::tip_default() {
  SectionSpec s;
  s.kind = SectionKind::Tip;
  s.disk_count = 10;
  s.delta_ell = units::mm(165.0 / 3.0 / 10.0);
  s.disk_thickness = units::mm(3.5);
  s.bevel_s1 = units::deg(20.0);
  s.bevel_s2 = units::deg(20.0);
  s.disk_mass = units::grams(51.99) / 30.0;
  s.backbone = {60e9, units::mm(0.6), 1};
  s.joint_axes.clear();
  for (int j = 0; j < 10; ++j) s.joint_axes.push_back(j % 2 == 0 ? JointAxis::Y : JointAxis::X);
  return s;
}

int RobotDescription::disk_count() const {
  int n = 0;
  for (const auto& s : sections) n += s.disk_count;
  return n;
}

ChainLayout make_layout(const RobotDescription& desc) {
  ChainLayout layout;
  const int n = desc.disk_count();
  layout.disks.reserve(n + 1);
  layout.joints.reserve(n);
  layout.section_first_joint.push_back(0);

  DiskInfo base;
  if (!desc.sections.empty()) {
    base.kind = desc.sections.front().kind;
    base.thickness = desc.sections.front().disk_thickness;
  }
  layout.disks.push_back(base);

  for (int i = 0; i < static_cast<int>(desc.sections.size()); ++i) {
    const auto& sec = desc.sections[i];
    for (int j = 1; j <= sec.disk_count; ++j) {
      JointInfo joint;
      joint.section = i;
      joint.index = j;
      joint.kind = sec.kind;
      joint.axis = j - 1 < static_cast<int>(sec.joint_axes.size()) ? sec.joint_axes[j - 1] : JointAxis::X;
      joint.delta_ell = sec.delta_ell;
      joint.stiffness = sec.joint_stiffness();
      joint.lower = sec.joint_lower();
      joint.upper = sec.joint_upper();
      joint.bevel_s1 = sec.bevel_s1;
      joint.bevel_s2 = sec.bevel_s2;
      layout.joints.push_back(joint);
      layout.disks.push_back({i, j, sec.kind, sec.disk_thickness, sec.disk_mass});
    }
    layout.section_first_joint.push_back(layout.section_first_joint.back() + sec.disk_count);
  }
  return layout;
}

int termination_disk(const ChainLayout& layout, const CableRoute& cable) {
  return layout.end_disk(cable.terminates_at_section);
}

int cable_index(const RobotDescription& desc, int cable_id) {
  for (int c = 0; c < static_cast<int>(desc.cables.size()); ++c)
    if (desc.cables[c].id == cable_id) return c;
  throw DomainError("unknown cable id " + std::to_string(cable_id));
}

namespace {

// Axial offset of the face point of a hole whose bending-plane projection is s.
// The face drops away from the centre ridge with the bevel slope of the hole's side.
double face_offset(double half_thickness, double s, const JointInfo& joint) {
  const double bevel = s >= 0.0 ? joint.bevel_s1 : joint.bevel_s2;
  return half_thickness - std::abs(s) * std::tan(bevel);
}

}  // namespace

HolePoints hole_points(const RobotDescription& desc, const ChainLayout& layout, int cable, int global_disk) {
  const auto& route = desc.cables.at(cable);
  const int term = termination_disk(layout, route);
  if (global_disk < 0 || global_disk > term)
    throw DomainError("cable " + std::to_string(route.id) + " does not route through disk " +
                      std::to_string(global_disk));
  const auto& disk = layout.disks.at(global_disk);
  const double rho = route.radius_on(disk.kind);
  const double x = rho * std::cos(route.phase);
  const double y = rho * std::sin(route.phase);
  const double half = 0.5 * disk.thickness;

  HolePoints h;
  double z_prox = -half;
  if (global_disk > 0) {
    const auto& joint = layout.joints[global_disk - 1];
    z_prox = -face_offset(half, bending_projection(joint.axis, x, y), joint);
  }
  double z_dist = half;
  if (global_disk < layout.joint_count()) {
    const auto& joint = layout.joints[global_disk];
    z_dist = face_offset(half, bending_projection(joint.axis, x, y), joint);
  }
  h.proximal = Vec3(x, y, z_prox);
  h.distal = Vec3(x, y, z_dist);
  return h;
}

HolePoints disk_hole_frame(const RobotDescription& desc, int section, int disk, int cable_id) {
  const auto layout = make_layout(desc);
  if (section < 1 || section > static_cast<int>(desc.sections.size()))
    throw DomainError("section index out of range: " + std::to_string(section));
  int global = 0;
  if (disk == 0) {
    if (section != 1) throw DomainError("disk 0 exists only as the base of section 1");
  } else {
    if (disk < 1 || disk > desc.sections[section - 1].disk_count)
      throw DomainError("disk index out of range: " + std::to_string(disk));
    global = layout.section_first_joint[section - 1] + disk;
  }
  return hole_points(desc, layout, cable_index(desc, cable_id), global);
}

// ---------------------------------------------------------------------------
// Validation

ValidationReport validate_description(const RobotDescription& desc) {
  ValidationReport report;
  auto add = [&](std::string path, std::string msg) { report.push_back({std::move(path), std::move(msg)}); };

  if (desc.sections.empty()) add("/sections", "at least one section is required");
  bool seen_tip = false;
  for (std::size_t i = 0; i < desc.sections.size(); ++i) {
    const auto& s = desc.sections[i];
    const std::string p = "/sections/" + std::to_string(i);
    if (s.kind == SectionKind::Tip) seen_tip = true;
    if (s.kind == SectionKind::Body && seen_tip) add(p + "/kind", "body sections must precede tip sections");
    if (s.disk_count < 2) add(p + "/disk_count", "disk_count must be >= 2");
    if (!(s.delta_ell > 0.0)) add(p + "/delta_ell", "delta_ell must be positive");
    if (!(s.disk_thickness > 0.0)) add(p + "/disk_thickness", "disk_thickness must be positive");
    if (!(s.disk_mass >= 0.0)) add(p + "/disk_mass", "disk_mass must be non-negative");
    if (!(s.backbone.youngs_modulus > 0.0)) add(p + "/backbone/E", "Young's modulus must be positive");
    if (!(s.backbone.second_moment() > 0.0)) add(p + "/backbone", "second moment of area must be positive");
    const double right = units::kPi / 2.0;
    if (!(s.bevel_s1 > 0.0 && s.bevel_s1 < right)) add(p + "/bevels/s1", "bevel angle must lie in (0, 90) deg");
    if (!(s.bevel_s2 > 0.0 && s.bevel_s2 < right)) add(p + "/bevels/s2", "bevel angle must lie in (0, 90) deg");
    if (static_cast<int>(s.joint_axes.size()) != s.disk_count)
      add(p + "/joint_axes", "one joint axis per disk is required");
    if (s.kind == SectionKind::Body &&
        std::any_of(s.joint_axes.begin(), s.joint_axes.end(), [](JointAxis a) { return a != JointAxis::X; }))
      add(p + "/joint_axes", "body sections bend about x only");

    if (s.declared_limits) {
      const auto [lo, hi] = *s.declared_limits;
      if (s.kind == SectionKind::Body) {
        const double derived_hi = s.disk_count * s.bevel_s2;
        const double derived_lo = -s.disk_count * s.bevel_s1;
        const double tol = 1e-9;
        if (std::abs(derived_hi - hi) > tol)
          add(p + "/bend_limits", "upper limit " + std::to_string(units::to_deg(hi)) +
                                      " deg differs from disk_count x bevel s2 = " +
                                      std::to_string(units::to_deg(derived_hi)) + " deg");
        if (std::abs(derived_lo - lo) > tol)
          add(p + "/bend_limits", "lower limit " + std::to_string(units::to_deg(lo)) +
                                      " deg differs from -disk_count x bevel s1 = " +
                                      std::to_string(units::to_deg(derived_lo)) + " deg");
      } else {
        for (JointAxis axis : {JointAxis::Y, JointAxis::X}) {
          const int n = s.joints_on(axis);
          const double reach_hi = n * s.bevel_s2;
          const double reach_lo = -n * s.bevel_s1;
          const char* name = axis == JointAxis::X ? "x" : "y";
          if (reach_hi < hi - 1e-12 || reach_lo > lo + 1e-12)
            add(p + "/bend_limits", std::string("per-axis reach about ") + name + " (" +
                                        std::to_string(n) + " joints) does not cover the declared limits");
        }
      }
    }
  }

  std::map<int, int> ids;
  for (std::size_t c = 0; c < desc.cables.size(); ++c) {
    const auto& r = desc.cables[c];
    const std::string p = "/cables/" + std::to_string(c);
    if (++ids[r.id] > 1) add(p + "/id", "duplicate cable id " + std::to_string(r.id));
    if (r.terminates_at_section < 0 || r.terminates_at_section >= static_cast<int>(desc.sections.size())) {
      add(p + "/terminates_at_section", "termination section does not exist");
      continue;
    }
    bool reaches_tip = false;
    for (int i = 0; i <= r.terminates_at_section; ++i) reaches_tip |= desc.sections[i].kind == SectionKind::Tip;
    std::vector<double> radii{r.pitch_radius};
    if (reaches_tip) radii.push_back(r.pitch_radius_tip);
    for (double rho : radii) {
      if (!(rho > 0.0)) add(p + "/pitch_radius", "pitch radius must be positive");
      if (2.0 * rho + r.diameter >= desc.outer_diameter)
        add(p + "/pitch_radius", "hole at pitch radius " + std::to_string(units::to_mm(rho)) +
                                     " mm does not fit inside the arm outer diameter");
    }
  }

  // Per-disk hole checks: distinct holes and a positive bore length under the bevel recess.
  if (report.empty()) {
    const auto layout = make_layout(desc);
    for (int d = 0; d <= layout.joint_count(); ++d) {
      std::vector<std::pair<int, HolePoints>> holes;
      for (int c = 0; c < static_cast<int>(desc.cables.size()); ++c) {
        if (termination_disk(layout, desc.cables[c]) < d) continue;
        holes.emplace_back(c, hole_points(desc, layout, c, d));
      }
      for (std::size_t a = 0; a < holes.size(); ++a) {
        const auto& h = holes[a].second;
        if (h.distal.z() - h.proximal.z() <= 0.0 && d < layout.joint_count())
          add("/cables/" + std::to_string(holes[a].first),
              "bevel recess exceeds disk thickness at disk " + std::to_string(d));
        for (std::size_t b = a + 1; b < holes.size(); ++b) {
          const double sep = (h.distal.head<2>() - holes[b].second.distal.head<2>()).norm();
          if (sep < 1e-9)
            add("/cables/" + std::to_string(holes[b].first),
                "hole coincides with cable " + std::to_string(desc.cables[holes[a].first].id) + " at disk " +
                    std::to_string(d));
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Loading

namespace {

struct UnitScale {
  double length = 1e-3;
  double angle = units::kPi / 180.0;
};

class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

  bool has(const char* key) const { return node_.contains(key); }
  std::string child_path(const std::string& key) const { return path_ + "/" + key; }

  const json& require(const char* key) const {
    if (!node_.contains(key)) throw SchemaError(child_path(key), "missing required field");
    return node_.at(key);
  }

  double number(const char* key, std::optional<double> fallback = std::nullopt) const {
    if (!node_.contains(key)) {
      if (fallback) return *fallback;
      throw SchemaError(child_path(key), "missing required field");
    }
    const auto& v = node_.at(key);
    if (!v.is_number()) throw SchemaError(child_path(key), "expected a number");
    return v.get<double>();
  }

  int integer(const char* key, std::optional<int> fallback = std::nullopt) const {
    if (!node_.contains(key)) {
      if (fallback) return *fallback;
      throw SchemaError(child_path(key), "missing required field");
    }
    const auto& v = node_.at(key);
    if (!v.is_number_integer()) throw SchemaError(child_path(key), "expected an integer");
    return v.get<int>();
  }

  std::string string(const char* key, std::optional<std::string> fallback = std::nullopt) const {
    if (!node_.contains(key)) {
      if (fallback) return *fallback;
      throw SchemaError(child_path(key), "missing required field");
    }
    const auto& v = node_.at(key);
    if (!v.is_string()) throw SchemaError(child_path(key), "expected a string");
    return v.get<std::string>();
  }

  Vec3 vec3(const char* key, double scale) const {
    if (!node_.contains(key)) return Vec3::Zero();
    const auto& v = node_.at(key);
    if (!v.is_array() || v.size() != 3) throw SchemaError(child_path(key), "expected an array of 3 numbers");
    Vec3 out;
    for (int i = 0; i < 3; ++i) {
      if (!v[i].is_number()) throw SchemaError(child_path(key) + "/" + std::to_string(i), "expected a number");
      out[i] = v[i].get<double>() * scale;
    }
    return out;
  }

  const json& node() const { return node_; }
  const std::string& path() const { return path_; }

 private:
  const json& node_;
  std::string path_;
};

Mount read_mount(const Reader& parent, const char* key, const UnitScale& u) {
  Mount m;
  if (!parent.has(key)) return m;
  const auto& node = parent.require(key);
  if (!node.is_object()) throw SchemaError(parent.child_path(key), "expected an object");
  Reader r(node, parent.child_path(key));
  if (r.has("rpy_deg"))
    m.rpy = r.vec3("rpy_deg", units::kPi / 180.0);
  else
    m.rpy = r.vec3("rpy", u.angle);
  m.xyz = r.vec3("xyz", u.length);
  return m;
}

std::vector<JointAxis> read_axes(const Reader& r, const SectionSpec& s) {
  if (!r.has("joint_axes")) {
    if (s.kind == SectionKind::Body) return std::vector<JointAxis>(s.disk_count, JointAxis::X);
    std::vector<JointAxis> axes;
    for (int j = 0; j < s.disk_count; ++j) axes.push_back(j % 2 == 0 ? JointAxis::Y : JointAxis::X);
    return axes;
  }
  const auto& v = r.require("joint_axes");
  const std::string path = r.child_path("joint_axes");
  if (!v.is_array() || v.empty()) throw SchemaError(path, "expected a non-empty array of \"x\"/\"y\"");
  std::vector<JointAxis> pattern;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) throw SchemaError(path + "/" + std::to_string(i), "expected \"x\" or \"y\"");
    const auto a = v[i].get<std::string>();
    if (a == "x")
      pattern.push_back(JointAxis::X);
    else if (a == "y")
      pattern.push_back(JointAxis::Y);
    else
      throw SchemaError(path + "/" + std::to_string(i), "expected \"x\" or \"y\"");
  }
  // A shorter list is a repeating pattern.
  std::vector<JointAxis> axes;
  for (int j = 0; j < s.disk_count; ++j) axes.push_back(pattern[j % pattern.size()]);
  return axes;
}

SectionSpec read_section(const Reader& r, const UnitScale& u) {
  const auto kind = r.string("kind");
  SectionSpec s;
  if (kind == "body")
    s = SectionSpec::body_default();
  else if (kind == "tip")
    s = SectionSpec::tip_default();
  else
    throw SchemaError(r.child_path("kind"), "expected \"body\" or \"tip\"");

  s.disk_count = r.integer("disk_count", s.disk_count);
  if (s.disk_count < 2) throw SchemaError(r.child_path("disk_count"), "disk_count must be >= 2");
  if (r.has("delta_ell")) s.delta_ell = r.number("delta_ell") * u.length;
  if (r.has("disk_thickness")) s.disk_thickness = r.number("disk_thickness") * u.length;
  if (r.has("disk_mass")) s.disk_mass = r.number("disk_mass");

  if (r.has("bevels")) {
    const auto& b = r.require("bevels");
    if (!b.is_object()) throw SchemaError(r.child_path("bevels"), "expected an object");
    Reader br(b, r.child_path("bevels"));
    if (br.has("s3")) {
      s.bevel_s1 = s.bevel_s2 = br.number("s3") * u.angle;
    } else {
      s.bevel_s1 = br.number("s1") * u.angle;
      s.bevel_s2 = br.number("s2") * u.angle;
    }
  }
  if (r.has("backbone")) {
    const auto& b = r.require("backbone");
    if (!b.is_object()) throw SchemaError(r.child_path("backbone"), "expected an object");
    Reader br(b, r.child_path("backbone"));
    s.backbone.youngs_modulus = br.number("E", s.backbone.youngs_modulus);
    if (br.has("rod_diameter_mm"))
      s.backbone.rod_diameter = br.number("rod_diameter_mm") * 1e-3;
    else if (br.has("rod_diameter"))
      s.backbone.rod_diameter = br.number("rod_diameter") * u.length;
    s.backbone.rods_in_parallel = br.integer("rods_in_parallel", s.backbone.rods_in_parallel);
  }
  s.joint_axes = read_axes(r, s);
  if (r.has("bend_limits")) {
    const auto& v = r.require("bend_limits");
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw SchemaError(r.child_path("bend_limits"), "expected [lower, upper]");
    s.declared_limits = std::array<double, 2>{v[0].get<double>() * u.angle, v[1].get<double>() * u.angle};
  } else {
    s.declared_limits.reset();
  }
  return s;
}

CableRoute read_cable(const Reader& r, const UnitScale& u, bool pcd_is_diameter, int section_count) {
  CableRoute c;
  c.id = r.integer("id");
  const double pitch_scale = u.length * (pcd_is_diameter ? 0.5 : 1.0);
  c.pitch_radius = r.number("pitch_radius") * pitch_scale;
  c.pitch_radius_tip = r.has("pitch_radius_tip") ? r.number("pitch_radius_tip") * pitch_scale : c.pitch_radius;
  if (r.has("phase_deg"))
    c.phase = r.number("phase_deg") * units::kPi / 180.0;
  else
    c.phase = r.number("phase") * u.angle;
  const int term = r.integer("terminates_at_section");
  if (term < 1 || term > section_count)
    throw SchemaError(r.child_path("terminates_at_section"), "section " + std::to_string(term) + " does not exist");
  c.terminates_at_section = term - 1;
  if (r.has("diameter")) c.diameter = r.number("diameter") * u.length;
  return c;
}

}  // namespace

RobotDescription load_description(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("", std::string("malformed description document: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("", "description document must be a JSON object");
  Reader root(doc, "");

  UnitScale u;
  if (root.has("units")) {
    Reader ur(root.require("units"), "/units");
    const auto len = ur.string("length", "mm");
    const auto ang = ur.string("angle", "deg");
    if (len == "mm")
      u.length = 1e-3;
    else if (len == "m")
      u.length = 1.0;
    else
      throw SchemaError("/units/length", "expected \"mm\" or \"m\"");
    if (ang == "deg")
      u.angle = units::kPi / 180.0;
    else if (ang == "rad")
      u.angle = 1.0;
    else
      throw SchemaError("/units/angle", "expected \"deg\" or \"rad\"");
  }

  RobotDescription d;
  d.name = root.string("name", "");
  d.gravity = root.number("gravity_mps2", units::kStandardGravity);
  if (root.has("gravity_direction")) d.gravity_direction = root.vec3("gravity_direction", 1.0);
  if (root.has("outer_diameter")) d.outer_diameter = root.number("outer_diameter") * u.length;
  if (root.has("pcd_is_diameter")) {
    const auto& v = root.require("pcd_is_diameter");
    if (!v.is_boolean()) throw SchemaError("/pcd_is_diameter", "expected a boolean");
    d.pcd_is_diameter = v.get<bool>();
  }
  d.world_mount = read_mount(root, "world_mount", u);
  d.effector_mount = read_mount(root, "effector_mount", u);

  const auto& sections = root.require("sections");
  if (!sections.is_array() || sections.empty()) throw SchemaError("/sections", "expected a non-empty array");
  for (std::size_t i = 0; i < sections.size(); ++i) {
    const std::string p = "/sections/" + std::to_string(i);
    if (!sections[i].is_object()) throw SchemaError(p, "expected an object");
    d.sections.push_back(read_section(Reader(sections[i], p), u));
  }

  const auto& cables = root.require("cables");
  if (!cables.is_array()) throw SchemaError("/cables", "expected an array");
  for (std::size_t i = 0; i < cables.size(); ++i) {
    const std::string p = "/cables/" + std::to_string(i);
    if (!cables[i].is_object()) throw SchemaError(p, "expected an object");
    d.cables.push_back(read_cable(Reader(cables[i], p), u, d.pcd_is_diameter, static_cast<int>(d.sections.size())));
  }
  return d;
}

RobotDescription load_description_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open description file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return load_description(ss.str());
  } catch (const SchemaError& e) {
    throw SchemaError(e.path(), std::string(e.what()) + " (in " + path + ")");
  } catch (const ParseError& e) {
    throw ParseError(e.path(), std::string(e.what()) + " (in " + path + ")");
  }
}

std::string serialize_description(const RobotDescription& d) {
  auto vec = [](const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); };
  json doc;
  doc["name"] = d.name;
  doc["units"] = {{"length", "m"}, {"angle", "rad"}};
  doc["gravity_mps2"] = d.gravity;
  doc["gravity_direction"] = vec(d.gravity_direction);
  doc["outer_diameter"] = d.outer_diameter;
  doc["pcd_is_diameter"] = d.pcd_is_diameter;
  doc["world_mount"] = {{"rpy", vec(d.world_mount.rpy)}, {"xyz", vec(d.world_mount.xyz)}};
  doc["effector_mount"] = {{"rpy", vec(d.effector_mount.rpy)}, {"xyz", vec(d.effector_mount.xyz)}};

  json sections = json::array();
  for (const auto& s : d.sections) {
    json js;
    js["kind"] = s.kind == SectionKind::Body ? "body" : "tip";
    js["disk_count"] = s.disk_count;
    js["delta_ell"] = s.delta_ell;
    js["disk_thickness"] = s.disk_thickness;
    js["bevels"] = {{"s1", s.bevel_s1}, {"s2", s.bevel_s2}};
    js["disk_mass"] = s.disk_mass;
    js["backbone"] = {{"E", s.backbone.youngs_modulus},
                      {"rod_diameter", s.backbone.rod_diameter},
                      {"rods_in_parallel", s.backbone.rods_in_parallel}};
    json axes = json::array();
    for (auto a : s.joint_axes) axes.push_back(a == JointAxis::X ? "x" : "y");
    js["joint_axes"] = axes;
    if (s.declared_limits) js["bend_limits"] = {(*s.declared_limits)[0], (*s.declared_limits)[1]};
    sections.push_back(js);
  }
  doc["sections"] = sections;

  const double pitch_scale = d.pcd_is_diameter ? 2.0 : 1.0;
  json cables = json::array();
  for (const auto& c : d.cables) {
    cables.push_back({{"id", c.id},
                      {"pitch_radius", c.pitch_radius * pitch_scale},
                      {"pitch_radius_tip", c.pitch_radius_tip * pitch_scale},
                      {"phase", c.phase},
                      {"terminates_at_section", c.terminates_at_section + 1},
                      {"diameter", c.diameter}});
  }
  doc["cables"] = cables;
  return doc.dump(2) + "\n";
}

std::string description_schema() {
  static const char* schema = R"schema({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "tendonstat robot description",
  "type": "object",
  "required": ["sections", "cables"],
  "properties": {
    "name": {"type": "string"},
    "units": {
      "type": "object",
      "properties": {
        "length": {"enum": ["mm", "m"], "default": "mm"},
        "angle": {"enum": ["deg", "rad"], "default": "deg"}
      }
    },
    "gravity_mps2": {"type": "number", "default": 9.80665},
    "gravity_direction": {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3,
                          "default": [0, 0, -1]},
    "outer_diameter": {"type": "number", "description": "arm outer diameter, length units", "default": 12.7},
    "pcd_is_diameter": {"type": "boolean", "default": false,
                        "description": "pitch_radius values are pitch circle diameters"},
    "world_mount": {"$ref": "#/$defs/mount"},
    "effector_mount": {"$ref": "#/$defs/mount"},
    "sections": {
      "type": "array", "minItems": 1,
      "description": "body sections first, then tip sections; a section with n disks owns n joints (the gap to the previous disk plus n-1 internal gaps)",
      "items": {
        "type": "object",
        "required": ["kind"],
        "properties": {
          "kind": {"enum": ["body", "tip"]},
          "disk_count": {"type": "integer", "minimum": 2},
          "delta_ell": {"type": "number", "exclusiveMinimum": 0, "description": "disk-centre to disk-centre arc length"},
          "disk_thickness": {"type": "number", "exclusiveMinimum": 0},
          "bevels": {
            "type": "object",
            "description": "{s1, s2} for body sections, {s3} for tip sections; angle units",
            "properties": {"s1": {"type": "number"}, "s2": {"type": "number"}, "s3": {"type": "number"}}
          },
          "disk_mass": {"type": "number", "minimum": 0, "description": "kg per disk"},
          "backbone": {
            "type": "object",
            "properties": {
              "E": {"type": "number", "description": "Young's modulus, Pa"},
              "rod_diameter_mm": {"type": "number"},
              "rod_diameter": {"type": "number", "description": "length units"},
              "rods_in_parallel": {"type": "integer", "minimum": 1}
            }
          },
          "joint_axes": {"type": "array", "items": {"enum": ["x", "y"]},
                         "description": "per-joint bend axes; a shorter list repeats"},
          "bend_limits": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
        }
      }
    },
    "cables": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["id", "pitch_radius", "terminates_at_section"],
        "properties": {
          "id": {"type": "integer", "minimum": 1},
          "pitch_radius": {"type": "number", "description": "on body disks, length units"},
          "pitch_radius_tip": {"type": "number", "description": "on tip disks, defaults to pitch_radius"},
          "phase_deg": {"type": "number"},
          "phase": {"type": "number", "description": "angle units; used when phase_deg is absent"},
          "terminates_at_section": {"type": "integer", "minimum": 1},
          "diameter": {"type": "number"}
        }
      }
    }
  },
  "$defs": {
    "mount": {
      "type": "object",
      "properties": {
        "rpy_deg": {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3},
        "rpy": {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3},
        "xyz": {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3}
      }
    }
  }
}
)schema";
  return schema;
}

const RobotDescription& reference_robot() {
  static const RobotDescription robot = load_description(bundled_reference_robot_json());
  return robot;
}

}  // namespace tendonstat
