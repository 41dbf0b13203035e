#include "tendonstat/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "json.hpp"
#include "tendonstat/errors.hpp"
#include "tendonstat/io.hpp"
#include "tendonstat/units.hpp"

namespace tendonstat {

namespace {

using ojson = nlohmann::ordered_json;
using io::fmt;

constexpr const char* kVersion = "0.1.0";

// Payloads of the stiffness campaign and the single-section payload.
const std::vector<double> kSweepPayloads = {0.0, 45.4, 90.8, 136.2};
const std::vector<double> kBendPayloads = {0.0, 90.8};

// Protocol grid of the pulley trials.
const std::vector<double> kTrialWeights = {0.8908, 1.0908, 2.0908, 3.0908, 4.0908};
const std::vector<double> kTrialAngles = {1.25, 5.0, 10.25, 20.0};

// Reference values reported next to the simulated ones.
constexpr double kRefRadiusMeasured = 558.37;   // mm
constexpr double kRefRadiusDeviation = 1.02;    // %
constexpr double kRefStraightAvg = 3.54;        // mm
constexpr double kRefStraightMax = 5.88;        // mm
constexpr double kRefBendAvg = 0.43;            // mm
constexpr double kRefBendMax = 0.79;            // mm
constexpr double kRefSmallDeflection = 8.0;     // mm, payloads up to 90.8 g
constexpr double kRefStraightHeavy = 20.0;      // mm at 136.2 g
constexpr double kRefCcHeavy = 32.0;            // mm at 136.2 g
constexpr double kRequirementPayload = 125.0;   // g

std::string pad2(std::size_t i) {
  return (i < 10 ? "0" : "") + std::to_string(i);
}

RobotDescription mounted(const RobotDescription& desc, const ExperimentSpec& spec) {
  RobotDescription d = desc;
  d.world_mount.rpy = spec.mount_rpy;
  return d;
}

FrictionModel friction_of(const ExperimentSpec& spec) {
  return spec.friction_on ? spec.friction : FrictionModel::frictionless();
}

SolverOptions solver_of(const ExperimentSpec& spec) {
  SolverOptions o;
  o.gravity = spec.gravity;
  o.strict = spec.strict;
  o.seed = spec.seed;
  return o;
}

double total_length(const RobotDescription& desc) {
  double L = 0.0;
  for (const auto& s : desc.sections) L += s.length();
  return L;
}

ojson describe(const RobotDescription& desc) {
  ojson d;
  d["name"] = desc.name;
  d["sections"] = desc.sections.size();
  d["disks"] = desc.disk_count();
  d["cables"] = desc.cables.size();
  d["length_mm"] = units::to_mm(total_length(desc));
  d["mount_rpy_deg"] = {units::to_deg(desc.world_mount.rpy.x()), units::to_deg(desc.world_mount.rpy.y()),
                        units::to_deg(desc.world_mount.rpy.z())};
  return d;
}

ojson friction_object(const FrictionModel& m) {
  return ojson{{"a", m.a}, {"b", m.b}, {"c", m.c}, {"theta_min_deg", units::to_deg(m.theta_min)},
               {"theta_max_deg", units::to_deg(m.theta_max)}};
}

ojson manifest_head(const RobotDescription& desc, const ExperimentSpec& spec) {
  ojson m;
  m["tool"] = "tendonstat";
  m["version"] = kVersion;
  m["scenario"] = scenario_name(spec.scenario);
  m["description"] = describe(desc);
  ojson p;
  p["gravity"] = spec.gravity;
  p["friction"] = spec.friction_on;
  p["friction_model"] = friction_object(friction_of(spec));
  p["friction_mode"] = "pulling";
  p["strict"] = spec.strict;
  p["seed"] = spec.seed;
  m["parameters"] = p;
  return m;
}

ojson solve_summary(const std::string& label, const EquilibriumResult& r) {
  int pinned = 0;
  for (int c : r.contact) pinned += c != 0;
  return ojson{{"label", label},
               {"converged", r.converged},
               {"iterations", r.iterations},
               {"ladder_passes", r.ladder_passes},
               {"used_fallback", r.used_fallback},
               {"multistable", r.multistable},
               {"max_residual_Nm", r.max_residual},
               {"pinned_joints", pinned},
               {"message", r.message}};
}

ojson failed_summary(const std::string& label, const std::string& what) {
  return ojson{{"label", label}, {"converged", false}, {"message", what}};
}

// Solve that reports a thrown slack or domain error as a failed result.
EquilibriumResult solve_or_fail(const RobotDescription& desc, const Eigen::VectorXd& t, const LoadSet& loads,
                                const FrictionModel& friction, const SolverOptions& options) {
  try {
    return solve_equilibrium(desc, t, loads, friction, options);
  } catch (const SlackCableError& e) {
    EquilibriumResult r;
    r.converged = false;
    r.message = e.what();
    r.proximal_tensions = t;
    return r;
  }
}

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string out;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out += ",";
    out += c;
    first = false;
  }
  return out + "\n";
}

std::string metric_row(const std::string& name, double v) { return name + "," + fmt(v) + "\n"; }

// Mean and max distance between matching disk centres, disks first..last inclusive.
std::pair<double, double> centre_deviation(const ChainPoses& a, const ChainPoses& b, int first, int last) {
  double sum = 0.0, mx = 0.0;
  for (int d = first; d <= last; ++d) {
    const double e = (a.disks[d].p - b.disks[d].p).norm();
    sum += e;
    mx = std::max(mx, e);
  }
  return {sum / (last - first + 1), mx};
}

}  // namespace

double chord_oracle(const RobotDescription& desc, const Configuration& config, int cable_id) {
  const int ci = cable_index(desc, cable_id);
  const auto layout = make_layout(desc);
  const int end = termination_disk(layout, desc.cables[ci]);
  std::vector<HolePoints> holes;
  holes.reserve(end + 1);
  for (int d = 0; d <= end; ++d)
    holes.push_back(d == 0 ? disk_hole_frame(desc, 1, 0, cable_id)
                           : disk_hole_frame(desc, layout.disks[d].section + 1, layout.disks[d].index, cable_id));
  const auto bent = chain_pose(desc, config);
  const auto flat = chain_pose(desc, Configuration::zero(desc));
  auto route_length = [&](const ChainPoses& poses) {
    double L = 0.0;
    for (int d = 0; d < end; ++d)
      L += (poses.disks[d + 1].apply(holes[d + 1].proximal) - poses.disks[d].apply(holes[d].distal)).norm();
    return L;
  };
  return route_length(bent) - route_length(flat);
}

Scenario parse_scenario(const std::string& name) {
  if (name == "friction-calibration") return Scenario::FrictionCalibration;
  if (name == "single-section") return Scenario::SingleSectionBend;
  if (name == "cc-shape") return Scenario::CcShape;
  if (name == "stiffness-sweep") return Scenario::StiffnessSweep;
  throw DomainError("unknown scenario '" + name +
                    "' (expected friction-calibration, single-section, cc-shape or stiffness-sweep)");
}

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::FrictionCalibration: return "friction-calibration";
    case Scenario::SingleSectionBend: return "single-section";
    case Scenario::CcShape: return "cc-shape";
    case Scenario::StiffnessSweep: return "stiffness-sweep";
  }
  return "";
}

void ExperimentSpec::check() const {
  for (std::size_t i = 0; i < payloads_g.size(); ++i) {
    if (!(payloads_g[i] >= 0.0)) throw DomainError("payloads must be non-negative");
    if (i > 0 && !(payloads_g[i] > payloads_g[i - 1])) throw DomainError("payloads must be strictly increasing");
  }
  if (!(cc_radius > 0.0)) throw DomainError("C radius must be positive");
}

void write_dataset(const Dataset& data, const std::string& outdir) {
  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec) throw Error(outdir + ": cannot create directory: " + ec.message());
  for (const auto& [name, content] : data.files) io::write_file((std::filesystem::path(outdir) / name).string(), content);
}

RobotDescription single_section_description(const RobotDescription& desc) {
  if (desc.sections.empty()) throw DomainError("description has no sections");
  RobotDescription d = desc;
  d.name = desc.name + " (first section)";
  d.sections.assign(desc.sections.begin(), desc.sections.begin() + 1);
  d.cables.clear();
  for (const auto& c : desc.cables)
    if (c.terminates_at_section == 0) d.cables.push_back(c);
  return d;
}

SectionTargets cc_targets(const RobotDescription& desc, double radius) {
  if (!(radius > 0.0)) throw DomainError("C radius must be positive");
  SectionTargets t;
  for (std::size_t i = 0; i < desc.sections.size(); ++i) {
    const auto& s = desc.sections[i];
    const double arc = -s.length() / radius;
    if (i == 0)
      t.push_back({s.disk_count * s.joint_upper()});
    else if (s.kind == SectionKind::Body)
      t.push_back({arc});
    else
      t.push_back({0.0, arc});
  }
  return t;
}

PlanResult ideal_plan(const RobotDescription& desc, const SectionTargets& targets) {
  PlanOptions po;
  po.solver.gravity = false;
  auto plan = actuation_plan(desc, targets, LoadSet{}, FrictionModel::frictionless(), po);
  if (!plan.converged)
    throw Error("ideal plan did not converge (max section error " + fmt(units::to_deg(plan.max_error)) + " deg)");
  return plan;
}

SingleSectionResult run_single_section_bend(const RobotDescription& desc, const ExperimentSpec& spec) {
  spec.check();
  const RobotDescription d = single_section_description(mounted(desc, spec));
  const auto& sec = d.sections[0];
  const double hi = sec.disk_count * sec.joint_upper();
  std::vector<double> angles = spec.angles_deg;
  if (angles.empty())
    for (int a = 0; a <= 90; a += 10) angles.push_back(a);
  const std::vector<double>& payloads = spec.payloads_g.empty() ? kBendPayloads : spec.payloads_g;
  const auto friction = friction_of(spec);
  const auto layout = make_layout(d);
  const int last = layout.end_disk(0);

  SingleSectionResult out;
  ojson manifest = manifest_head(d, spec);
  manifest["parameters"]["angles_deg"] = angles;
  manifest["parameters"]["payloads_g"] = payloads;
  ojson solves = ojson::array();
  std::string metrics =
      "angle_deg,payload_g,converged,avg_dev_mm,max_dev_mm,avg_dev_pct,max_dev_pct,cable_change_pos_mm,"
      "cable_change_neg_mm,tension_pos_N,tension_neg_N\n";

  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double command = units::deg(angles[i]);
    // At the interlock the section is planned as a free bend just short of the bevels.
    const double target = std::min(command, hi - 1e-8);
    const auto plan = ideal_plan(d, SectionTargets{{target}});
    const Eigen::VectorXd t = *plan.cables.tensions;
    const Eigen::VectorXd th = plan.equilibrium.config.flatten();
    Configuration arc = Configuration::zero(d);
    for (auto& v : arc.sections[0]) v = command / sec.disk_count;
    const auto ideal = chain_pose(d, arc);
    for (std::size_t j = 0; j < payloads.size(); ++j) {
      auto opts = solver_of(spec);
      opts.initial_guess = th;
      LoadSet loads;
      loads.payload_mass = units::grams(payloads[j]);
      const auto r = solve_or_fail(d, t, loads, friction, opts);
      BendPose p;
      p.command = command;
      p.payload = loads.payload_mass;
      p.converged = r.converged;
      p.section_length = sec.length();
      p.tensions = t;
      p.message = r.message;
      const std::string label = "a" + pad2(i) + "_p" + pad2(j);
      if (r.converged) {
        p.poses = r.poses;
        std::tie(p.avg_deviation, p.max_deviation) = centre_deviation(r.poses, ideal, 1, last);
        p.cable_change = cable_lengths(d, r.config).lengths;
        out.data.files["shape_single_" + label + ".csv"] = io::shape_csv(d, r.poses);
        solves.push_back(solve_summary(label, r));
      } else {
        p.cable_change = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d.cables.size()));
        solves.push_back(failed_summary(label, r.message));
      }
      // Cables in description order: the one on the +y side first.
      const bool first_pos = std::sin(d.cables[0].phase) >= std::sin(d.cables[1].phase);
      const int ip = first_pos ? 0 : 1, in = first_pos ? 1 : 0;
      metrics += csv_row({fmt(angles[i]), fmt(payloads[j]), p.converged ? "1" : "0", fmt(units::to_mm(p.avg_deviation)),
                          fmt(units::to_mm(p.max_deviation)), fmt(100.0 * p.avg_deviation / p.section_length),
                          fmt(100.0 * p.max_deviation / p.section_length), fmt(units::to_mm(p.cable_change[ip])),
                          fmt(units::to_mm(p.cable_change[in])), fmt(t[ip]), fmt(t[in])});
      out.poses.push_back(std::move(p));
    }
  }
  manifest["solves"] = solves;
  manifest["reference"] = {{"avg_dev_mm", kRefBendAvg}, {"max_dev_mm", kRefBendMax}};
  out.data.files["metrics.csv"] = metrics;
  out.data.files["manifest.json"] = manifest.dump(2) + "\n";
  return out;
}

CcShapeResult run_cc_shape(const RobotDescription& desc, const ExperimentSpec& spec) {
  spec.check();
  const RobotDescription d = mounted(desc, spec);
  const auto layout = make_layout(d);
  const auto friction = friction_of(spec);
  CcShapeResult out;
  out.commanded_radius = spec.cc_radius;
  out.total_length = total_length(d);

  int last_body = 0;
  for (int i = 0; i < static_cast<int>(d.sections.size()); ++i)
    if (d.sections[i].kind == SectionKind::Body) last_body = i;

  ojson manifest = manifest_head(d, spec);
  manifest["parameters"]["commanded_radius_mm"] = units::to_mm(spec.cc_radius);
  ojson solves = ojson::array();

  // C-c pose.
  const auto cc_plan = ideal_plan(d, cc_targets(d, spec.cc_radius));
  auto opts = solver_of(spec);
  opts.initial_guess = cc_plan.equilibrium.config.flatten();
  out.cc = solve_or_fail(d, *cc_plan.cables.tensions, LoadSet{}, friction, opts);
  out.cc_converged = out.cc.converged;
  solves.push_back(out.cc.converged ? solve_summary("cc", out.cc) : failed_summary("cc", out.cc.message));
  if (out.cc.converged) {
    std::vector<Vec3> pts;
    for (int g = layout.end_disk(0); g <= layout.end_disk(last_body); ++g) pts.push_back(out.cc.poses.disks[g].p);
    out.fit = circle_fit(pts);
    out.radius_deviation = out.fit.straight ? INFINITY : (out.fit.radius - spec.cc_radius) / spec.cc_radius;
    out.data.files["shape_cc.csv"] = io::shape_csv(d, out.cc.poses);
  }
  out.data.files["shape_cc_ideal.csv"] = io::shape_csv(d, cc_plan.equilibrium.poses);

  // Straight pose.
  SectionTargets zero;
  for (const auto& s : d.sections) zero.push_back(s.kind == SectionKind::Body ? std::vector<double>{0.0} : std::vector<double>{0.0, 0.0});
  const auto st_plan = ideal_plan(d, zero);
  opts.initial_guess.reset();
  out.straight = solve_or_fail(d, *st_plan.cables.tensions, LoadSet{}, friction, opts);
  out.straight_converged = out.straight.converged;
  solves.push_back(out.straight.converged ? solve_summary("straight", out.straight)
                                          : failed_summary("straight", out.straight.message));
  double tip_dev = 0.0;
  if (out.straight.converged) {
    const auto ideal = chain_pose(d, Configuration::zero(d));
    std::tie(out.straight_avg_deviation, out.straight_max_deviation) =
        centre_deviation(out.straight.poses, ideal, 1, static_cast<int>(ideal.disks.size()) - 1);
    tip_dev = (out.straight.poses.effector.p - ideal.effector.p).norm();
    out.data.files["shape_straight.csv"] = io::shape_csv(d, out.straight.poses);
  }

  std::string metrics = "metric,value\n";
  metrics += metric_row("commanded_radius_mm", units::to_mm(spec.cc_radius));
  metrics += metric_row("cc_converged", out.cc_converged ? 1 : 0);
  metrics += metric_row("fitted_radius_mm", units::to_mm(out.fit.radius));
  metrics += metric_row("radius_deviation_pct", 100.0 * out.radius_deviation);
  metrics += metric_row("fit_rms_mm", units::to_mm(out.fit.rms));
  metrics += metric_row("straight_converged", out.straight_converged ? 1 : 0);
  metrics += metric_row("straight_avg_dev_mm", units::to_mm(out.straight_avg_deviation));
  metrics += metric_row("straight_max_dev_mm", units::to_mm(out.straight_max_deviation));
  metrics += metric_row("straight_tip_dev_mm", units::to_mm(tip_dev));
  metrics += metric_row("straight_avg_dev_pct", 100.0 * out.straight_avg_deviation / out.total_length);
  metrics += metric_row("straight_max_dev_pct", 100.0 * out.straight_max_deviation / out.total_length);
  metrics += metric_row("total_length_mm", units::to_mm(out.total_length));
  metrics += metric_row("reference_radius_mm", kRefRadiusMeasured);
  metrics += metric_row("reference_radius_deviation_pct", kRefRadiusDeviation);
  metrics += metric_row("reference_straight_avg_mm", kRefStraightAvg);
  metrics += metric_row("reference_straight_max_mm", kRefStraightMax);
  out.data.files["metrics.csv"] = metrics;

  manifest["solves"] = solves;
  manifest["plan_tensions_N"] = {{"cc", std::vector<double>(cc_plan.cables.tensions->data(),
                                                            cc_plan.cables.tensions->data() + cc_plan.cables.tensions->size())},
                                 {"straight", std::vector<double>(st_plan.cables.tensions->data(),
                                                                  st_plan.cables.tensions->data() +
                                                                      st_plan.cables.tensions->size())}};
  manifest["within_reference_envelope"] = out.cc_converged && std::abs(100.0 * out.radius_deviation) <= kRefRadiusDeviation;
  out.data.files["manifest.json"] = manifest.dump(2) + "\n";
  return out;
}

StiffnessResult run_stiffness_sweep(const RobotDescription& desc, const ExperimentSpec& spec) {
  spec.check();
  const RobotDescription d = mounted(desc, spec);
  const auto friction = friction_of(spec);
  const std::vector<double>& payloads = spec.payloads_g.empty() ? kSweepPayloads : spec.payloads_g;
  StiffnessResult out;
  out.total_length = total_length(d);

  SectionTargets zero;
  for (const auto& s : d.sections) zero.push_back(s.kind == SectionKind::Body ? std::vector<double>{0.0} : std::vector<double>{0.0, 0.0});
  const std::vector<std::pair<std::string, SectionTargets>> shapes = {{"straight", zero},
                                                                      {"cc", cc_targets(d, spec.cc_radius)}};

  ojson manifest = manifest_head(d, spec);
  manifest["parameters"]["payloads_g"] = payloads;
  ojson solves = ojson::array();
  ojson requirement = ojson::object();
  std::string metrics = "shape,payload_g,converged,tip_x_mm,tip_y_mm,tip_z_mm,deflection_mm,deflection_pct\n";

  for (const auto& [name, targets] : shapes) {
    const auto plan = ideal_plan(d, targets);
    const Eigen::VectorXd t = *plan.cables.tensions;
    auto opts = solver_of(spec);
    opts.initial_guess = plan.equilibrium.config.flatten();
    // Unloaded baseline.
    const auto base = solve_or_fail(d, t, LoadSet{}, friction, opts);
    solves.push_back(base.converged ? solve_summary(name + "_baseline", base) : failed_summary(name + "_baseline", base.message));
    if (base.converged) opts.initial_guess = base.config.flatten();
    std::vector<double> defl;
    for (std::size_t j = 0; j < payloads.size(); ++j) {
      StiffnessCase c;
      c.shape = name;
      c.payload = units::grams(payloads[j]);
      LoadSet loads;
      loads.payload_mass = c.payload;
      c.result = payloads[j] == 0.0 ? base : solve_or_fail(d, t, loads, friction, opts);
      c.converged = c.result.converged && base.converged;
      const std::string label = name + "_p" + pad2(j);
      solves.push_back(c.result.converged ? solve_summary(label, c.result) : failed_summary(label, c.result.message));
      if (c.converged) {
        c.tip = c.result.poses.effector.p;
        c.deflection = (c.tip - base.poses.effector.p).norm();
        opts.initial_guess = c.result.config.flatten();
        out.data.files["shape_" + label + ".csv"] = io::shape_csv(d, c.result.poses);
      }
      defl.push_back(c.deflection);
      metrics += csv_row({name, fmt(payloads[j]), c.converged ? "1" : "0", fmt(units::to_mm(c.tip.x())),
                          fmt(units::to_mm(c.tip.y())), fmt(units::to_mm(c.tip.z())), fmt(units::to_mm(c.deflection)),
                          fmt(100.0 * c.deflection / out.total_length)});
      out.cases.push_back(std::move(c));
    }
    // Deflection at the requirement payload, interpolated along the ladder.
    for (std::size_t j = 1; j < payloads.size(); ++j)
      if (payloads[j - 1] <= kRequirementPayload && kRequirementPayload <= payloads[j]) {
        const double w = (kRequirementPayload - payloads[j - 1]) / (payloads[j] - payloads[j - 1]);
        const double at = units::to_mm((1.0 - w) * defl[j - 1] + w * defl[j]);
        const double env = name == "straight" ? kRefStraightHeavy : kRefCcHeavy;
        requirement[name] = {{"deflection_mm", at}, {"envelope_mm", env}, {"within_envelope", at <= env}};
      }
  }
  manifest["solves"] = solves;
  manifest["requirement_125g"] = requirement;
  manifest["reference"] = {{"small_payload_deflection_mm", kRefSmallDeflection},
                           {"straight_136g_mm", kRefStraightHeavy},
                           {"cc_136g_mm", kRefCcHeavy}};
  out.data.files["metrics.csv"] = metrics;
  out.data.files["manifest.json"] = manifest.dump(2) + "\n";
  return out;
}

std::vector<FrictionTrial> synthetic_trials(const FrictionModel& planted, double gravity) {
  std::vector<FrictionTrial> out;
  for (double a : kTrialAngles) {
    const double theta = units::deg(a);
    const double mu = planted(theta);
    for (double w : kTrialWeights) {
      const double W = w * gravity;
      out.push_back({theta, W, lifting_tension(W, theta, mu)});
    }
  }
  return out;
}

FrictionCalibrationResult run_friction_calibration(const ExperimentSpec& spec) {
  FrictionCalibrationResult out;
  const bool synthetic = !spec.trials_csv.has_value();
  out.trials = synthetic ? synthetic_trials(spec.planted) : io::parse_trials_csv(io::read_file(*spec.trials_csv));
  out.fit = fit_friction_model(out.trials);

  std::string scatter = "theta_deg,weight_kg,normal_N,friction_N,fit_friction_N\n";
  std::string metrics = "theta_deg,mu,intercept_N,r_squared,rms_N\n";
  for (const auto& a : out.fit.angles)
    metrics += csv_row({fmt(units::to_deg(a.theta)), fmt(a.mu), fmt(a.intercept), fmt(a.r_squared), fmt(a.rms_residual)});
  // Scatter rows in trial order so the weight column stays attached to its trial.
  for (const auto& a : out.fit.angles) {
    std::size_t i = 0;
    for (const auto& t : out.trials) {
      if (t.theta != a.theta) continue;
      scatter += csv_row({fmt(units::to_deg(t.theta)), fmt(t.weight_force / units::kStandardGravity),
                          fmt(a.normal_force[i]), fmt(a.friction_force[i]),
                          fmt(a.mu * a.normal_force[i] + a.intercept)});
      ++i;
    }
  }
  std::string curve = "theta_deg,mu_fit\n";
  const auto& m = out.fit.model;
  for (int i = 0; i <= 40; ++i) {
    const double th = m.theta_min + (m.theta_max - m.theta_min) * i / 40.0;
    curve += csv_row({fmt(units::to_deg(th)), fmt(m(std::clamp(th, m.theta_min, m.theta_max)))});
  }

  ojson manifest;
  manifest["tool"] = "tendonstat";
  manifest["version"] = kVersion;
  manifest["scenario"] = scenario_name(Scenario::FrictionCalibration);
  manifest["source"] = synthetic ? "synthetic" : *spec.trials_csv;
  if (synthetic) manifest["planted"] = friction_object(spec.planted);
  manifest["fitted"] = friction_object(m);
  manifest["r_squared"] = out.fit.r_squared;
  manifest["rms_residual"] = out.fit.rms_residual;
  manifest["trials"] = out.trials.size();
  out.data.files["friction_fit.csv"] = scatter;
  out.data.files["friction_curve.csv"] = curve;
  out.data.files["metrics.csv"] = metrics;
  out.data.files["manifest.json"] = manifest.dump(2) + "\n";
  return out;
}

Dataset run_experiment(const RobotDescription& desc, const ExperimentSpec& spec) {
  switch (spec.scenario) {
    case Scenario::FrictionCalibration: return run_friction_calibration(spec).data;
    case Scenario::SingleSectionBend: return run_single_section_bend(desc, spec).data;
    case Scenario::CcShape: return run_cc_shape(desc, spec).data;
    case Scenario::StiffnessSweep: return run_stiffness_sweep(desc, spec).data;
  }
  throw DomainError("unknown scenario");
}

}  // namespace tendonstat
