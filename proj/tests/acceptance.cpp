// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "tendonstat/errors.hpp"
#include "tendonstat/io.hpp"
#include "tendonstat/statics.hpp"
#include "tendonstat/units.hpp"

namespace fs = std::filesystem;
using namespace tstest;
using units::deg;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int n, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = dt < budget_s;
  const bool ok = o.pass && in_time;
  if (!ok) ++failures;
  std::printf("%s  %d %-22s %s [%.3f s / %.0f s%s]\n", ok ? "PASS" : "FAIL", n, name, o.detail.c_str(), dt, budget_s,
              in_time ? "" : ", over budget");
  std::fflush(stdout);
}

std::string num(double v, const char* f = "%.3g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

RobotDescription horizontal(RobotDescription d) {
  d.world_mount.rpy = Vec3(units::kPi / 2, units::kPi / 2, 0.0);
  return d;
}

Eigen::VectorXd single(const RobotDescription& d, int id, double t) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<int>(d.cables.size()));
  v[cable_index(d, id)] = t;
  return v;
}

// 1 ------------------------------------------------------------------------------------
Outcome cc_recovery() {
  SolverOptions o;
  o.gravity = false;
  o.residual_tolerance = 1e-12;
  const auto& full = robot();
  double worst_spread = 0.0, worst_pose = 0.0;
  int solves = 0;
  // Every body section on its own, pulled on either side.
  for (int s = 0; s < 10; ++s) {
    RobotDescription d = full;
    d.sections.assign(full.sections.begin() + s, full.sections.begin() + s + 1);
    d.cables.clear();
    for (const auto& c : full.cables)
      if (c.terminates_at_section == s) {
        d.cables.push_back(c);
        d.cables.back().terminates_at_section = 0;
      }
    for (const auto& c : d.cables) {
      for (double T : {0.3, 1.5}) {
        const auto r = solve_equilibrium(d, single(d, c.id, T), {}, FrictionModel::frictionless(), o);
        if (!r.converged) return {false, "section " + std::to_string(s + 1) + " did not converge"};
        const auto& a = r.config.sections[0];
        const auto [lo, hi] = std::minmax_element(a.begin(), a.end());
        worst_spread = std::max(worst_spread, *hi - *lo);
        const Pose local = d.world_mount.pose().inverse() * r.poses.disks.back();
        const Pose arc = single_arc_transform(r.config.section_sum(0), d.sections[0].length());
        worst_pose = std::max(worst_pose, (local.p - arc.p).norm());
        ++solves;
      }
    }
  }
  return {worst_spread < 1e-9 && worst_pose < 1e-9,
          std::to_string(solves) + " solves, spread " + num(worst_spread) + " rad, pose " + num(worst_pose) + " m"};
}

// 2 ------------------------------------------------------------------------------------
Outcome chord_equivalence() {
  const auto& d = robot();
  const auto L = make_layout(d);
  const int nc = static_cast<int>(d.cables.size());
  const int nj = L.joint_count();
  std::vector<int> end(nc);
  std::vector<std::vector<HolePoints>> holes(nc);
  for (int c = 0; c < nc; ++c) {
    end[c] = termination_disk(L, d.cables[c]);
    for (int k = 0; k <= end[c]; ++k)
      holes[c].push_back(k == 0 ? disk_hole_frame(d, 1, 0, d.cables[c].id)
                                : disk_hole_frame(d, L.disks[k].section + 1, L.disks[k].index, d.cables[c].id));
  }
  auto span = [&](const ChainPoses& P, int c, int g) {
    return (P.disks[g + 1].apply(holes[c][g + 1].proximal) - P.disks[g].apply(holes[c][g].distal)).norm();
  };
  const auto flat = chain_pose(d, Configuration::zero(d));

  std::mt19937_64 rng(2024);
  double worst_gap = 0.0, worst_total = 0.0, worst_split = 0.0;
  int worst_gap_joint = -1, worst_gap_cable = -1;
  std::vector<double> tip_err, tip_theta;
  std::ofstream csv("chord_residuals.csv");
  csv << "sample,joint,kind,theta_deg,cable,model_mm,oracle_mm,residual_mm,chord_mm\n";
  for (int n = 0; n < 500; ++n) {
    const auto cfg = random_config(d, rng);
    const auto th = cfg.flatten();
    const auto P = chain_pose(d, cfg);
    const auto total = cable_lengths(d, cfg);
    std::vector<double> chord_sum(nc, 0.0);
    std::vector<double> oracle_sum(nc, 0.0);
    for (int g = 0; g < nj; ++g) {
      Eigen::VectorXd one = Eigen::VectorXd::Zero(nj);
      one[g] = th[g];
      const auto model = cable_lengths(d, Configuration::from_flat(d, one)).lengths;
      const double chord = (P.disks[g + 1].p - P.disks[g].p).norm();
      for (int c = 0; c < nc; ++c) {
        if (g >= end[c]) continue;
        const double oracle = span(P, c, g) - span(flat, c, g);
        const double r = std::abs(model[c] - oracle) / chord;
        if (r > worst_gap) {
          worst_gap = r;
          worst_gap_joint = g;
          worst_gap_cable = d.cables[c].id;
        }
        chord_sum[c] += chord;
        oracle_sum[c] += oracle;
        if (n < 20)
          csv << n << ',' << g << ',' << (L.joints[g].kind == SectionKind::Body ? "body" : "tip") << ','
              << io::fmt(units::to_deg(th[g])) << ',' << d.cables[c].id << ',' << io::fmt(units::to_mm(model[c]))
              << ',' << io::fmt(units::to_mm(oracle)) << ',' << io::fmt(units::to_mm(model[c] - oracle)) << ','
              << io::fmt(units::to_mm(chord)) << '\n';
      }
    }
    for (int c = 0; c < nc; ++c) {
      const double o = chord_oracle(d, cfg, d.cables[c].id);
      worst_split = std::max(worst_split, std::abs(o - oracle_sum[c]));
      worst_total = std::max(worst_total, std::abs(total.lengths[c] - o) / chord_sum[c]);
    }
  }
  const bool ok = worst_gap <= 0.01 && worst_total <= 0.01 && worst_split < 1e-12;
  return {ok, "worst per-gap " + num(100 * worst_gap) + "% of chord (joint " + std::to_string(worst_gap_joint) +
                  ", cable " + std::to_string(worst_gap_cable) + "), worst per-cable " + num(100 * worst_total) +
                  "%, residuals in chord_residuals.csv"};
}

// 3 ------------------------------------------------------------------------------------
Outcome equilibrium_audit() {
  const auto d = horizontal(robot());
  const StaticsModel model(d);
  const auto fr = FrictionModel::default_calibration();
  const auto cc = ideal_plan(d, cc_targets(d, 0.56414));
  const Eigen::VectorXd cc_t = *cc.cables.tensions;

  struct Case {
    std::string shape;
    Eigen::VectorXd tensions;
    double payload;
  };
  std::vector<Case> cases;
  for (double p : {0.0, 45.4, 90.8, 136.2}) {
    for (double T : {0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0})
      cases.push_back({"straight", Eigen::VectorXd::Constant(29, T), units::grams(p)});
    for (double f : {0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3}) cases.push_back({"cc", f * cc_t, units::grams(p)});
  }

  int ok = 0, failed = 0, skipped = 0;
  double worst = 0.0;
  std::optional<Eigen::VectorXd> warm_straight, warm_cc;
  for (const auto& c : cases) {
    SolverOptions o;
    auto& warm = c.shape == "cc" ? warm_cc : warm_straight;
    o.initial_guess = warm ? warm : (c.shape == "cc" ? std::optional(cc.equilibrium.config.flatten()) : std::nullopt);
    LoadSet loads;
    loads.payload_mass = c.payload;
    EquilibriumResult r;
    try {
      r = solve_equilibrium(model, c.tensions, loads, fr, o);
    } catch (const SlackCableError&) {
      ++skipped;
      continue;
    }
    if (!r.converged) {
      ++skipped;
      continue;
    }
    warm = r.config.flatten();
    const auto a = audit_moment_balance(d, r.config, r.ladders, loads, true);
    double m = 0.0;
    bool sign_ok = true;
    for (int g = 0; g < a.size(); ++g) {
      if (r.contact[g] == 0)
        m = std::max(m, std::abs(a[g]));
      else
        sign_ok = sign_ok && a[g] * r.contact[g] >= -1e-8;
    }
    worst = std::max(worst, m);
    (m < 1e-8 && sign_ok) ? ++ok : ++failed;
  }
  const bool pass = cases.size() >= 50 && failed == 0 && ok > 0;
  return {pass, std::to_string(cases.size()) + " cases, " + std::to_string(ok) + " audited, " +
                    std::to_string(skipped) + " without a solver success, worst free-joint residual " + num(worst) +
                    " N m"};
}

// 4 ------------------------------------------------------------------------------------
Outcome friction_round_trip() {
  const double k = 180.0 / units::kPi;
  const FrictionModel planted{0.001 * k * k, 0.01 * k, 0.1, 0.0, deg(20)};
  const auto fit = fit_friction_model(synthetic_trials(planted));
  const double ea = std::abs(fit.model.a / planted.a - 1.0);
  const double eb = std::abs(fit.model.b / planted.b - 1.0);
  const double ec = std::abs(fit.model.c / planted.c - 1.0);
  const double e = std::max({ea, eb, ec});
  return {e < 1e-9, "max relative coefficient error " + num(e)};
}

// 5 ------------------------------------------------------------------------------------
Outcome elasticity() {
  double worst_fd = 0.0, worst_odd = 0.0;
  bool zero = true;
  for (const auto& s : {SectionSpec::body_default(), SectionSpec::tip_default()}) {
    const double E = s.backbone.youngs_modulus, I = s.backbone.second_moment(), dl = s.delta_ell;
    const double K = E * I / dl;
    zero = zero && restoring_moment(E, I, 0.0, dl) == 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double th = -0.5 + i / 999.0;  // rad, beyond every bevel limit
      const double h = 1e-6;
      const double fd = (restoring_moment(E, I, th + h, dl) - restoring_moment(E, I, th - h, dl)) / (2 * h);
      worst_fd = std::max(worst_fd, std::abs(fd - K) / K);
      worst_odd = std::max(worst_odd, std::abs(restoring_moment(E, I, -th, dl) + restoring_moment(E, I, th, dl)));
    }
  }
  return {worst_fd < 1e-6 && worst_odd == 0.0 && zero,
          "FD relative error " + num(worst_fd) + ", odd residual " + num(worst_odd) + ", M(0) " +
              (zero ? "0" : "nonzero")};
}

// 6 ------------------------------------------------------------------------------------
Outcome ladders() {
  const auto& d = robot();
  const auto fr = FrictionModel::default_calibration();
  const double mu_max = fr.max_over_domain();
  std::mt19937_64 rng(6);
  bool constant = true, decreasing = true, bounded = true;
  double margin = 1e300;
  int count = 0;
  for (int n = 0; n < 20; ++n) {
    const auto cfg = random_config(d, rng);
    for (const auto& c : d.cables) {
      const double T = 5.0;
      const auto z = propagate_tensions(d, cfg, c.id, T, FrictionModel::frictionless(), CableDirection::Pulling);
      for (double t : z.bore) constant = constant && t == T;
      for (double t : z.gap) constant = constant && t == T;
      const auto p = propagate_tensions(d, cfg, c.id, T, fr, CableDirection::Pulling);
      for (std::size_t k = 1; k < p.bore.size(); ++k) decreasing = decreasing && p.bore[k] < p.bore[k - 1];
      for (std::size_t k = 1; k < p.gap.size(); ++k) decreasing = decreasing && p.gap[k] < p.gap[k - 1];
      const double bound = T * std::exp(-mu_max * p.total_turn());
      bounded = bounded && p.distal() >= bound;
      margin = std::min(margin, p.distal() - bound);
      ++count;
    }
  }
  return {constant && decreasing && bounded,
          std::to_string(count) + " ladders, constant " + (constant ? "yes" : "no") + ", strictly decreasing " +
              (decreasing ? "yes" : "no") + ", min capstan margin " + num(margin) + " N"};
}

// 7 ------------------------------------------------------------------------------------
Outcome cc_fit() {
  ExperimentSpec ideal;
  ideal.gravity = false;
  ideal.friction_on = false;
  const auto a = run_cc_shape(robot(), ideal);
  ExperimentSpec real;
  const auto b = run_cc_shape(robot(), real);
  const double dev = std::abs(a.radius_deviation);
  return {a.cc_converged && dev < 1e-3,
          "ideal radius " + num(units::to_mm(a.fit.radius), "%.3f") + " mm (" + num(100 * dev) +
              "%); with gravity and friction " + num(units::to_mm(b.fit.radius), "%.1f") + " mm (" +
              num(100 * b.radius_deviation, "%+.2f") + "%, reference envelope 1.02%)"};
}

// 8 ------------------------------------------------------------------------------------
Outcome monotonicity() {
  ExperimentSpec sweep;
  sweep.scenario = Scenario::StiffnessSweep;
  const auto s = run_stiffness_sweep(robot(), sweep);
  bool mono = true, conv = true;
  std::string shapes;
  for (std::size_t i = 0; i < s.cases.size(); ++i) {
    conv = conv && s.cases[i].converged;
    if (i > 0 && s.cases[i].shape == s.cases[i - 1].shape)
      mono = mono && s.cases[i].deflection >= s.cases[i - 1].deflection;
  }
  ExperimentSpec bend;
  bend.scenario = Scenario::SingleSectionBend;
  bend.payloads_g = {0.0, 90.8};
  const auto b = run_single_section_bend(robot(), bend);
  bool larger = true;
  int angles = 0;
  for (std::size_t i = 0; i + 1 < b.poses.size(); i += 2) {
    conv = conv && b.poses[i].converged && b.poses[i + 1].converged;
    larger = larger && b.poses[i + 1].avg_deviation > b.poses[i].avg_deviation;
    ++angles;
  }
  return {mono && larger && conv, std::to_string(s.cases.size()) + " sweep cases monotone " + (mono ? "yes" : "no") +
                                      ", payload raises deviation at " + (larger ? "all " : "not all ") +
                                      std::to_string(angles) + " angles, all converged " + (conv ? "yes" : "no")};
}

// 9 ------------------------------------------------------------------------------------
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome reproducibility() {
  const fs::path root = fs::temp_directory_path() / "tendonstat_acceptance";
  fs::remove_all(root);
  int files = 0;
  for (const char* sc : {"friction-calibration", "single-section", "cc-shape", "stiffness-sweep"}) {
    for (const char* run : {"a", "b"}) {
      const std::string cmd = std::string("\"") + TENDONSTAT_CLI + "\" experiment " + sc + " --out \"" +
                              (root / run / sc).string() + "\" > /dev/null";
      if (std::system(cmd.c_str()) != 0) return {false, std::string("experiment ") + sc + " failed"};
    }
    for (const auto& e : fs::directory_iterator(root / "a" / sc)) {
      const auto other = root / "b" / sc / e.path().filename();
      if (!fs::exists(other) || slurp(e.path()) != slurp(other))
        return {false, std::string(sc) + "/" + e.path().filename().string() + " differs between runs"};
      ++files;
    }
  }
  fs::remove_all(root);
  const auto& d = robot();
  const auto text = serialize_description(d);
  const auto back = load_description(text);
  const bool round = back == d && serialize_description(back) == text && load_description(serialize_description(one_body())) == one_body();
  return {round, std::to_string(files) + " files byte-identical across reruns, description round-trip " +
                     (round ? "exact" : "broken")};
}

}  // namespace

int main() {
  criterion(1, "cc-recovery", 1, cc_recovery);
  criterion(2, "cable-length-oracle", 10, chord_equivalence);
  criterion(3, "equilibrium-audit", 60, equilibrium_audit);
  criterion(4, "friction-round-trip", 1, friction_round_trip);
  criterion(5, "elasticity", 1, elasticity);
  criterion(6, "tension-ladders", 1, ladders);
  criterion(7, "cc-circle-fit", 5, cc_fit);
  criterion(8, "monotonicity", 30, monotonicity);
  criterion(9, "reproducibility", 60, reproducibility);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
