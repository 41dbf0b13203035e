#include "tendonstat/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tendonstat/equilibrium.hpp"
#include "tendonstat/errors.hpp"
#include "tendonstat/experiments.hpp"
#include "tendonstat/io.hpp"
#include "tendonstat/units.hpp"

namespace tendonstat::cli {

namespace {

struct Common {
  bool no_gravity = false;
  bool no_friction = false;
  bool strict = false;
  bool verbose = false;
  std::uint64_t seed = 0;
  std::string friction_file;
  std::string output;
};

void add_common(CLI::App* cmd, Common& c, bool physics) {
  cmd->add_flag("-v,--verbose", c.verbose, "Print solver diagnostics to stderr");
  cmd->add_option("-o,--output", c.output, "Write the result here instead of stdout");
  if (!physics) return;
  cmd->add_flag("--no-gravity", c.no_gravity, "Switch gravity off");
  cmd->add_flag("--no-friction", c.no_friction, "Switch cable friction off");
  cmd->add_flag("--strict", c.strict, "Probe for other equilibria from perturbed starts");
  cmd->add_option("--seed", c.seed, "Seed of the perturbed starts");
  cmd->add_option("--friction", c.friction_file, "Friction model JSON {a,b,c,theta_min_deg,theta_max_deg}");
}

FrictionModel friction_from(const Common& c) {
  if (c.no_friction) return FrictionModel::frictionless();
  if (!c.friction_file.empty()) return io::parse_friction(io::read_file(c.friction_file));
  return FrictionModel::default_calibration();
}

SolverOptions solver_from(const Common& c) {
  SolverOptions o;
  o.gravity = !c.no_gravity;
  o.strict = c.strict;
  o.seed = c.seed;
  return o;
}

void emit(const Common& c, const std::string& text, std::ostream& out) {
  if (c.output.empty())
    out << text;
  else
    io::write_file(c.output, text);
}

FrictionMode mode_from(const std::string& s) {
  if (s == "pulling") return FrictionMode::Pulling;
  if (s == "releasing") return FrictionMode::Releasing;
  if (s == "holding") return FrictionMode::Holding;
  throw CLI::ValidationError("--mode", "expected pulling, releasing or holding");
}

std::vector<double> number_list(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError(what, "expected a comma-separated list of numbers");
    }
  }
  return out;
}

std::string default_outdir(const std::string& scenario) {
  if (const char* env = std::getenv("TENDONSTAT_OUT"); env && *env) return env;
  return "tendonstat_out/" + scenario;
}

void report(std::ostream& err, const EquilibriumResult& r) {
  err << "converged " << (r.converged ? "yes" : "no") << ", iterations " << r.iterations << ", ladder passes "
      << r.ladder_passes << ", max residual " << io::fmt(r.max_residual) << " N m";
  if (r.used_fallback) err << ", fallback used";
  if (r.multistable) err << ", multistable";
  err << "\n";
  if (!r.message.empty()) err << r.message << "\n";
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Segment-scale statics of a multi-section tendon-driven continuum robot", "tendonstat"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "tendonstat 0.1.0");

  Common common;
  std::string desc_path, config_path, tensions_path, loads_path, targets_path, trials_path, shape_path;
  std::string mode = "pulling";
  double uniform = -1.0;

  auto* validate = app.add_subcommand("validate", "Check a robot description");
  validate->add_option("description", desc_path, "Robot description JSON")->required();
  add_common(validate, common, false);

  auto* fk = app.add_subcommand("fk", "Disk frames and end-effector pose of a configuration");
  fk->add_option("description", desc_path)->required();
  fk->add_option("config", config_path, "Configuration JSON, per-section arrays of degrees")->required();
  fk->add_option("--shape", shape_path, "Write the shape CSV here");
  add_common(fk, common, false);

  auto* cables = app.add_subcommand("cables", "Cable length changes of a configuration");
  cables->add_option("description", desc_path)->required();
  cables->add_option("config", config_path)->required();
  add_common(cables, common, false);

  auto* solve = app.add_subcommand("solve", "Static shape under given cable tensions and loads");
  solve->add_option("description", desc_path)->required();
  auto* topt = solve->add_option("--tensions", tensions_path, "Proximal tensions JSON, one value per cable in N");
  solve->add_option("--tension", uniform, "Same proximal tension on every cable, N")->excludes(topt);
  solve->add_option("--loads", loads_path, "Loads JSON {force_N, moment_Nm, payload_g}");
  solve->add_option("--mode", mode, "pulling, releasing or holding");
  solve->add_option("--shape", shape_path, "Write the shape CSV here");
  add_common(solve, common, true);

  auto* plan = app.add_subcommand("plan", "Cable tensions that reach per-section target angles");
  plan->add_option("description", desc_path)->required();
  plan->add_option("targets", targets_path, "Targets JSON, per-section arrays of degrees")->required();
  plan->add_option("--loads", loads_path);
  plan->add_option("--mode", mode, "pulling, releasing or holding");
  plan->add_option("--shape", shape_path, "Write the shape CSV here");
  add_common(plan, common, true);

  auto* fit = app.add_subcommand("fit-friction", "Fit the friction model to pulley trials");
  fit->add_option("trials", trials_path, "CSV theta_deg,weight_kg,measured_N")->required();
  add_common(fit, common, false);

  std::string scenario, outdir, payloads, angles;
  double radius_mm = 564.14;
  auto* exp = app.add_subcommand("experiment", "Run a validation campaign and write its dataset");
  exp->add_option("scenario", scenario, "friction-calibration, single-section, cc-shape or stiffness-sweep")->required();
  exp->add_option("description", desc_path, "Robot description JSON (bundled robot when omitted)");
  exp->add_option("--out", outdir, "Output directory (default $TENDONSTAT_OUT, else tendonstat_out/<scenario>)");
  exp->add_option("--payloads", payloads, "Comma-separated payloads in g");
  exp->add_option("--angles", angles, "Comma-separated commanded bends in deg (single-section)");
  exp->add_option("--radius", radius_mm, "Commanded C radius in mm (cc-shape)");
  exp->add_option("--trials", trials_path, "Trial CSV (friction-calibration; synthetic grid when omitted)");
  add_common(exp, common, true);

  auto* schema = app.add_subcommand("schema", "Print the description JSON schema");
  add_common(schema, common, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << "tendonstat 0.1.0\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (*schema) {
      emit(common, description_schema(), out);
      return kOk;
    }
    if (*fit) {
      const auto trials = io::parse_trials_csv(io::read_file(trials_path));
      const auto f = fit_friction_model(trials);
      if (common.verbose)
        for (const auto& a : f.angles)
          err << "theta " << io::fmt(units::to_deg(a.theta)) << " deg: mu " << io::fmt(a.mu) << ", R^2 "
              << io::fmt(a.r_squared) << "\n";
      emit(common, io::friction_json(f.model), out);
      return kOk;
    }
    if (*exp) {
      ExperimentSpec spec;
      spec.scenario = parse_scenario(scenario);
      if (!payloads.empty()) spec.payloads_g = number_list(payloads, "--payloads");
      if (!angles.empty()) spec.angles_deg = number_list(angles, "--angles");
      spec.cc_radius = units::mm(radius_mm);
      spec.gravity = !common.no_gravity;
      spec.friction_on = !common.no_friction;
      if (!common.friction_file.empty()) spec.friction = io::parse_friction(io::read_file(common.friction_file));
      if (!trials_path.empty()) spec.trials_csv = trials_path;
      spec.seed = common.seed;
      spec.strict = common.strict;
      const RobotDescription desc = desc_path.empty() ? reference_robot() : load_description_file(desc_path);
      if (!desc_path.empty()) {
        const auto issues = validate_description(desc);
        if (!issues.empty()) {
          for (const auto& i : issues) err << desc_path << ": " << i.path << ": " << i.message << "\n";
          return kInvalid;
        }
      }
      const auto data = run_experiment(desc, spec);
      const std::string dir = outdir.empty() ? default_outdir(scenario) : outdir;
      write_dataset(data, dir);
      bool all = true;
      if (spec.scenario != Scenario::FrictionCalibration) {
        const auto manifest = nlohmann::json::parse(data.files.at("manifest.json"));
        for (const auto& s : manifest["solves"]) all = all && s["converged"].get<bool>();
      }
      if (common.verbose) err << "wrote " << data.files.size() << " files to " << dir << "\n";
      out << dir << "\n";
      return all ? kOk : kNotConverged;
    }

    const RobotDescription desc = load_description_file(desc_path);
    const auto issues = validate_description(desc);
    if (*validate) {
      if (!issues.empty()) {
        for (const auto& i : issues) err << desc_path << ": " << i.path << ": " << i.message << "\n";
        return kInvalid;
      }
      emit(common, std::to_string(desc.disk_count()) + " disks, " + std::to_string(desc.cables.size()) + " cables\n",
           out);
      return kOk;
    }
    if (!issues.empty()) {
      for (const auto& i : issues) err << desc_path << ": " << i.path << ": " << i.message << "\n";
      return kInvalid;
    }

    if (*fk) {
      const auto config = io::parse_configuration(desc, io::read_file(config_path));
      const auto poses = chain_pose(desc, config);
      if (!shape_path.empty()) io::write_file(shape_path, io::shape_csv(desc, poses));
      const auto q = poses.effector.quaternion();
      nlohmann::ordered_json doc;
      doc["effector"] = {{"position_mm",
                          {units::to_mm(poses.effector.p.x()), units::to_mm(poses.effector.p.y()),
                           units::to_mm(poses.effector.p.z())}},
                         {"quaternion", {q.w(), q.x(), q.y(), q.z()}}};
      nlohmann::ordered_json rows = nlohmann::ordered_json::array();
      for (int r = 0; r < 4; ++r) {
        const auto m = poses.effector.matrix();
        rows.push_back({m(r, 0), m(r, 1), m(r, 2), r < 3 ? units::to_mm(m(r, 3)) : 1.0});
      }
      doc["effector_matrix_mm"] = rows;
      emit(common, doc.dump(2) + "\n", out);
      return kOk;
    }
    if (*cables) {
      const auto config = io::parse_configuration(desc, io::read_file(config_path));
      const auto state = cable_lengths(desc, config);
      std::string csv = "cable,delta_mm\n";
      for (int c = 0; c < state.size(); ++c)
        csv += std::to_string(desc.cables[c].id) + "," + io::fmt(units::to_mm(state.lengths[c])) + "\n";
      emit(common, csv, out);
      return kOk;
    }

    const LoadSet loads = loads_path.empty() ? LoadSet{} : io::parse_loads(io::read_file(loads_path));
    const auto friction = friction_from(common);
    auto options = solver_from(common);
    options.friction_mode = mode_from(mode);

    if (*solve) {
      Eigen::VectorXd t;
      if (!tensions_path.empty())
        t = io::parse_tensions(desc, io::read_file(tensions_path));
      else if (uniform >= 0.0)
        t = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(desc.cables.size()), uniform);
      else
        throw CLI::RequiredError("--tensions or --tension");
      const auto r = solve_equilibrium(desc, t, loads, friction, options);
      if (common.verbose) report(err, r);
      if (!shape_path.empty()) io::write_file(shape_path, io::shape_csv(desc, r.poses));
      emit(common, io::result_json(desc, r), out);
      if (!r.converged) {
        err << "solver did not converge: " << r.message << "\n";
        return kNotConverged;
      }
      return kOk;
    }
    if (*plan) {
      PlanOptions po;
      po.solver = options;
      const auto targets = io::parse_targets(desc, io::read_file(targets_path));
      const auto p = actuation_plan(desc, targets, loads, friction, po);
      if (common.verbose) report(err, p.equilibrium);
      if (!shape_path.empty()) io::write_file(shape_path, io::shape_csv(desc, p.equilibrium.poses));
      emit(common, io::plan_json(desc, p), out);
      if (!p.converged) {
        err << "plan did not converge: max section error " << io::fmt(units::to_deg(p.max_error)) << " deg\n";
        return kNotConverged;
      }
      return kOk;
    }
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InfeasiblePlanError& e) {
    err << "error: " << e.what() << "\n";
    return kNotConverged;
  } catch (const SlackCableError& e) {
    err << "error: " << e.what() << "\n";
    return kNotConverged;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kUsage;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace tendonstat::cli
