#include "tendonstat/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tendonstat/errors.hpp"
#include "tendonstat/units.hpp"

namespace tendonstat::io {

using ojson = nlohmann::ordered_json;

std::string fmt(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(path + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(path + ": cannot open for writing");
  out << content;
  if (!out) throw Error(path + ": write failed");
}

std::string shape_csv(const RobotDescription& desc, const ChainPoses& poses) {
  const auto layout = make_layout(desc);
  std::string out = "section,disk,x_mm,y_mm,z_mm,qw,qx,qy,qz\n";
  for (std::size_t d = 0; d < poses.disks.size(); ++d) {
    const auto& info = layout.disks[d];
    const auto& P = poses.disks[d];
    const auto q = P.quaternion();
    out += std::to_string(info.section + 1) + "," + std::to_string(info.index) + "," + fmt(units::to_mm(P.p.x())) +
           "," + fmt(units::to_mm(P.p.y())) + "," + fmt(units::to_mm(P.p.z())) + "," + fmt(q.w()) + "," +
           fmt(q.x()) + "," + fmt(q.y()) + "," + fmt(q.z()) + "\n";
  }
  return out;
}

namespace {

ojson parse_json(const std::string& text, const char* what) {
  try {
    return ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(what, e.what());
  }
}

double number(const ojson& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "expected a number");
  return v.get<double>();
}

std::vector<std::vector<double>> nested_degrees(const ojson& doc, const char* what) {
  if (!doc.is_array()) throw SchemaError(what, "expected an array of per-section arrays");
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string p = std::string(what) + "/" + std::to_string(i);
    if (!doc[i].is_array()) throw SchemaError(p, "expected an array");
    std::vector<double> row;
    for (std::size_t j = 0; j < doc[i].size(); ++j)
      row.push_back(units::deg(number(doc[i][j], p + "/" + std::to_string(j))));
    out.push_back(std::move(row));
  }
  return out;
}

Vec3 vec3(const ojson& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) throw SchemaError(path, "expected three numbers");
  return {number(v[0], path + "/0"), number(v[1], path + "/1"), number(v[2], path + "/2")};
}

ojson degrees(const Configuration& config) {
  ojson a = ojson::array();
  for (const auto& s : config.sections) {
    ojson row = ojson::array();
    for (double v : s) row.push_back(units::to_deg(v));
    a.push_back(row);
  }
  return a;
}

ojson vector_json(const Eigen::VectorXd& v, double scale = 1.0) {
  ojson a = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i] * scale);
  return a;
}

ojson pose_json(const Pose& P) {
  const auto q = P.quaternion();
  return ojson{{"position_mm", {units::to_mm(P.p.x()), units::to_mm(P.p.y()), units::to_mm(P.p.z())}},
               {"quaternion", {q.w(), q.x(), q.y(), q.z()}}};
}

const char* mode_name(CableDirection d) { return d == CableDirection::Pulling ? "pulling" : "releasing"; }

ojson result_object(const EquilibriumResult& r) {
  ojson doc;
  doc["converged"] = r.converged;
  doc["message"] = r.message;
  doc["iterations"] = r.iterations;
  doc["ladder_passes"] = r.ladder_passes;
  doc["used_fallback"] = r.used_fallback;
  doc["multistable"] = r.multistable;
  doc["max_residual_Nm"] = r.max_residual;
  doc["configuration_deg"] = degrees(r.config);
  doc["proximal_tensions_N"] = vector_json(r.proximal_tensions);
  doc["residual_Nm"] = vector_json(r.residual);
  doc["contact"] = r.contact;
  doc["effector"] = pose_json(r.poses.effector);
  ojson disks = ojson::array();
  for (const auto& P : r.poses.disks) disks.push_back(pose_json(P));
  doc["disks"] = disks;
  ojson ladders = ojson::array();
  for (const auto& l : r.ladders) {
    ojson lj;
    lj["cable"] = l.cable_id;
    lj["direction"] = mode_name(l.direction);
    lj["gap_N"] = l.gap;
    lj["bore_N"] = l.bore;
    ojson entry = ojson::array(), exit = ojson::array();
    for (double v : l.entry_turn) entry.push_back(units::to_deg(v));
    for (double v : l.exit_turn) exit.push_back(units::to_deg(v));
    lj["entry_turn_deg"] = entry;
    lj["exit_turn_deg"] = exit;
    ladders.push_back(lj);
  }
  doc["ladders"] = ladders;
  if (r.releasing_bound) doc["releasing_bound_deg"] = degrees(*r.releasing_bound);
  return doc;
}

}  // namespace

Configuration parse_configuration(const RobotDescription& desc, const std::string& json_text) {
  Configuration c;
  c.sections = nested_degrees(parse_json(json_text, "configuration"), "configuration");
  check_configuration(desc, c);
  return c;
}

std::string configuration_json(const Configuration& config) { return degrees(config).dump(2) + "\n"; }

SectionTargets parse_targets(const RobotDescription& desc, const std::string& json_text) {
  auto t = nested_degrees(parse_json(json_text, "targets"), "targets");
  if (t.size() != desc.sections.size())
    throw SchemaError("targets", "expected " + std::to_string(desc.sections.size()) + " sections, got " +
                                     std::to_string(t.size()));
  return t;
}

Eigen::VectorXd parse_tensions(const RobotDescription& desc, const std::string& json_text) {
  ojson doc = parse_json(json_text, "tensions");
  if (doc.is_object()) {
    if (!doc.contains("tensions_N")) throw SchemaError("tensions", "missing key tensions_N");
    doc = doc["tensions_N"];
  }
  if (!doc.is_array() || doc.size() != desc.cables.size())
    throw SchemaError("tensions", "expected " + std::to_string(desc.cables.size()) + " tensions");
  Eigen::VectorXd t(static_cast<Eigen::Index>(doc.size()));
  for (std::size_t i = 0; i < doc.size(); ++i) {
    t[static_cast<Eigen::Index>(i)] = number(doc[i], "tensions/" + std::to_string(i));
    if (t[static_cast<Eigen::Index>(i)] < 0.0) throw SchemaError("tensions/" + std::to_string(i), "negative tension");
  }
  return t;
}

LoadSet parse_loads(const std::string& json_text) {
  const ojson doc = parse_json(json_text, "loads");
  if (!doc.is_object()) throw SchemaError("loads", "expected an object");
  LoadSet l;
  if (doc.contains("force_N")) l.force = vec3(doc["force_N"], "loads/force_N");
  if (doc.contains("moment_Nm")) l.moment = vec3(doc["moment_Nm"], "loads/moment_Nm");
  if (doc.contains("payload_g")) {
    l.payload_mass = units::grams(number(doc["payload_g"], "loads/payload_g"));
    if (l.payload_mass < 0.0) throw SchemaError("loads/payload_g", "negative payload");
  }
  return l;
}

FrictionModel parse_friction(const std::string& json_text) {
  const ojson doc = parse_json(json_text, "friction");
  if (!doc.is_object()) throw SchemaError("friction", "expected an object");
  FrictionModel m;
  auto get = [&](const char* k) {
    if (!doc.contains(k)) throw SchemaError(std::string("friction/") + k, "missing");
    return number(doc[k], std::string("friction/") + k);
  };
  m.a = get("a");
  m.b = get("b");
  m.c = get("c");
  m.theta_min = units::deg(get("theta_min_deg"));
  m.theta_max = units::deg(get("theta_max_deg"));
  if (!(m.theta_max > m.theta_min)) throw SchemaError("friction", "theta_max_deg must exceed theta_min_deg");
  return m;
}

std::string friction_json(const FrictionModel& m) {
  ojson doc;
  doc["a"] = m.a;
  doc["b"] = m.b;
  doc["c"] = m.c;
  doc["theta_min_deg"] = units::to_deg(m.theta_min);
  doc["theta_max_deg"] = units::to_deg(m.theta_max);
  return doc.dump(2) + "\n";
}

std::vector<FrictionTrial> parse_trials_csv(const std::string& text, double gravity) {
  std::istringstream in(text);
  std::string line;
  std::vector<FrictionTrial> out;
  int lineno = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line != "theta_deg,weight_kg,measured_N")
        throw SchemaError("trials:1", "expected header theta_deg,weight_kg,measured_N");
      continue;
    }
    double v[3];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int k = 0; k < 3; ++k) {
      const auto r = std::from_chars(p, end, v[k]);
      if (r.ec != std::errc()) throw SchemaError("trials:" + std::to_string(lineno), "bad number");
      p = r.ptr;
      if (k < 2) {
        if (p == end || *p != ',') throw SchemaError("trials:" + std::to_string(lineno), "expected 3 columns");
        ++p;
      }
    }
    if (p != end) throw SchemaError("trials:" + std::to_string(lineno), "expected 3 columns");
    out.push_back({units::deg(v[0]), v[1] * gravity, v[2]});
  }
  if (out.empty()) throw DomainError("no friction trials: insufficient data");
  return out;
}

std::string result_json(const RobotDescription&, const EquilibriumResult& result) {
  return result_object(result).dump(2) + "\n";
}

std::string plan_json(const RobotDescription&, const PlanResult& plan) {
  ojson doc;
  doc["converged"] = plan.converged;
  doc["iterations"] = plan.iterations;
  doc["max_error_deg"] = units::to_deg(plan.max_error);
  doc["parameters_N"] = vector_json(plan.parameters);
  ojson achieved = ojson::array();
  for (const auto& row : plan.achieved) {
    ojson r = ojson::array();
    for (double v : row) r.push_back(units::to_deg(v));
    achieved.push_back(r);
  }
  doc["achieved_deg"] = achieved;
  doc["cable_lengths_mm"] = vector_json(plan.cables.lengths, 1e3);
  if (plan.cables.tensions) doc["tensions_N"] = vector_json(*plan.cables.tensions);
  doc["equilibrium"] = result_object(plan.equilibrium);
  return doc.dump(2) + "\n";
}

}  // namespace tendonstat::io
