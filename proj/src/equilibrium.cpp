#include "tendonstat/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "tendonstat/errors.hpp"

namespace tendonstat {

namespace {

CableDirection direction_of(FrictionMode mode) {
  return mode == FrictionMode::Releasing ? CableDirection::Releasing : CableDirection::Pulling;
}

class Solver {
 public:
  Solver(const StaticsModel& model, const Eigen::VectorXd& tensions, const LoadSet& loads,
         const FrictionModel& friction, const SolverOptions& options, CableDirection direction)
      : m_(model), tensions_(tensions), loads_(loads), friction_(friction), opt_(options), dir_(direction) {
    const int n = m_.joint_count();
    k_.resize(n);
    lo_.resize(n);
    hi_.resize(n);
    for (int g = 0; g < n; ++g) {
      const auto& j = m_.layout().joints[g];
      k_[g] = j.stiffness;
      lo_[g] = j.lower;
      hi_[g] = j.upper;
    }
  }

  EquilibriumResult run(Eigen::VectorXd theta) {
    EquilibriumResult res;
    res.proximal_tensions = tensions_;
    theta = theta.cwiseMax(lo_).cwiseMin(hi_);
    const Eigen::VectorXd start = theta;

    res.converged = solve_at(theta, 1.0, res);
    if (!res.converged) {
      // Continuation in the load level from the unloaded straight shape.
      theta = Eigen::VectorXd::Zero(m_.joint_count());
      double level = 0.0, step = 0.25;
      while (level < 1.0 && step > 1e-3) {
        const double next = std::min(1.0, level + step);
        Eigen::VectorXd trial = theta;
        if (solve_at(trial, next, res)) {
          theta = trial;
          level = next;
          step *= 1.5;
        } else {
          step *= 0.5;
        }
      }
      res.converged = level == 1.0;
      if (!res.converged) theta = start;
    }

    const auto ladders = ladders_at(theta);
    const Eigen::VectorXd r = m_.residual(theta, ladders, loads_, gravity_scale(1.0));
    std::vector<int> contact = contacts(theta, r);
    res.config = Configuration::from_flat(m_.description(), theta);
    res.ladders = ladders;
    res.residual = r;
    res.contact = contact;
    res.max_residual = free_max(r, contact);
    res.converged = res.converged && res.max_residual < opt_.residual_tolerance;
    res.poses = chain_pose(m_.description(), m_.layout(), theta);
    if (!res.converged)
      res.message = "no equilibrium within the iteration budget; max residual " + std::to_string(res.max_residual) +
                    " N m";
    return res;
  }

 private:
  double gravity_scale(double level) const { return opt_.gravity ? level : 0.0; }

  std::vector<TensionLadder> ladders_at(const Eigen::VectorXd& theta) const {
    return m_.ladders(chain_pose(m_.description(), m_.layout(), theta), tensions_, friction_, dir_);
  }

  // +1 / -1 where the joint sits on a limit the load pushes against, else 0.
  std::vector<int> contacts(const Eigen::VectorXd& theta, const Eigen::VectorXd& r) const {
    std::vector<int> c(theta.size(), 0);
    for (int g = 0; g < theta.size(); ++g) {
      if (theta[g] >= hi_[g] && r[g] >= 0.0) c[g] = 1;
      if (theta[g] <= lo_[g] && r[g] <= 0.0) c[g] = -1;
    }
    return c;
  }

  static double free_max(const Eigen::VectorXd& r, const std::vector<int>& contact) {
    double worst = 0.0;
    for (int g = 0; g < r.size(); ++g)
      if (contact[g] == 0) worst = std::max(worst, std::abs(r[g]));
    return worst;
  }

  // Natural residual of the bound-constrained balance: zero exactly at a complementary equilibrium.
  Eigen::VectorXd natural(const Eigen::VectorXd& theta, const Eigen::VectorXd& r) const {
    return theta - (theta + r.cwiseQuotient(k_)).cwiseMax(lo_).cwiseMin(hi_);
  }

  // Ladder passes around a Newton solve with the ladders frozen.
  bool solve_at(Eigen::VectorXd& theta, double level, EquilibriumResult& res) const {
    const LoadSet loads{level * loads_.force, level * loads_.moment, loads_.payload_mass};
    for (int pass = 0; pass < opt_.max_iterations; ++pass) {
      ++res.ladder_passes;
      const auto ladders = ladders_at(theta);
      const Eigen::VectorXd before = theta;
      bool ok = newton(theta, ladders, loads, level, res.iterations);
      if (!ok) {
        theta = before;
        ok = fixed_point(theta, ladders, loads, level);
        if (ok) res.used_fallback = true;
      }
      if (!ok) return false;
      const auto fresh = ladders_at(theta);
      const Eigen::VectorXd r = m_.residual(theta, fresh, loads, gravity_scale(level), level);
      if (free_max(r, contacts(theta, r)) < opt_.residual_tolerance) return true;
    }
    return false;
  }

  // Semismooth Newton: joints whose projected update lands on a limit are moved onto it,
  // the rest solve the reduced linearised balance.
  bool newton(Eigen::VectorXd& theta, const std::vector<TensionLadder>& ladders, const LoadSet& loads, double level,
              int& iterations) const {
    const double gs = gravity_scale(level);
    auto eval = [&](const Eigen::VectorXd& th) { return m_.residual(th, ladders, loads, gs, level); };
    const int n = m_.joint_count();
    Eigen::VectorXd r = eval(theta);
    int budget = opt_.max_iterations;
    while (budget-- > 0) {
      const Eigen::VectorXd z = theta + r.cwiseQuotient(k_);
      std::vector<int> free, moving;
      Eigen::VectorXd target = theta;
      for (int g = 0; g < n; ++g) {
        if (z[g] >= hi_[g]) {
          target[g] = hi_[g];
        } else if (z[g] <= lo_[g]) {
          target[g] = lo_[g];
        } else {
          free.push_back(g);
          continue;
        }
        if (target[g] != theta[g]) moving.push_back(g);
      }
      double worst = 0.0;
      for (int g : free) worst = std::max(worst, std::abs(r[g]));
      if (worst < opt_.residual_tolerance && moving.empty()) return true;
      ++iterations;

      // Columns needed: free joints, and joints jumping onto a limit.
      std::vector<int> cols = free;
      cols.insert(cols.end(), moving.begin(), moving.end());
      const int nf = static_cast<int>(free.size());
      Eigen::MatrixXd J(nf, cols.size());
      for (std::size_t b = 0; b < cols.size(); ++b) {
        Eigen::VectorXd tp = theta, tm = theta;
        tp[cols[b]] += opt_.fd_step;
        tm[cols[b]] -= opt_.fd_step;
        const Eigen::VectorXd d = (eval(tp) - eval(tm)) / (2.0 * opt_.fd_step);
        for (int a = 0; a < nf; ++a) J(a, static_cast<Eigen::Index>(b)) = d[free[a]];
      }
      Eigen::VectorXd dx = Eigen::VectorXd::Zero(n);
      Eigen::VectorXd rhs(nf);
      for (int a = 0; a < nf; ++a) rhs[a] = -r[free[a]];
      for (std::size_t b = free.size(); b < cols.size(); ++b) {
        const int g = cols[b];
        dx[g] = target[g] - theta[g];
        rhs -= J.col(static_cast<Eigen::Index>(b)) * dx[g];
      }
      if (nf > 0) {
        const auto lu = J.leftCols(nf).partialPivLu();
        if (!(std::abs(lu.determinant()) > 0.0)) return false;
        const Eigen::VectorXd df = lu.solve(rhs);
        if (!df.allFinite()) return false;
        for (int a = 0; a < nf; ++a) dx[free[a]] = df[a];
      }

      const double m0 = natural(theta, r).norm();
      double alpha = 1.0;
      bool accepted = false;
      Eigen::VectorXd cand, rc;
      while (alpha > 1e-4) {
        cand = (theta + alpha * dx).cwiseMax(lo_).cwiseMin(hi_);
        rc = eval(cand);
        if (natural(cand, rc).norm() <= (1.0 - 1e-4 * alpha) * m0) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) return false;
      const double step = (cand - theta).cwiseAbs().maxCoeff();
      theta = cand;
      r = rc;
      if (step < opt_.step_tolerance) {
        const auto c = contacts(theta, r);
        return free_max(r, c) < opt_.residual_tolerance;
      }
    }
    return false;
  }

  bool fixed_point(Eigen::VectorXd& theta, const std::vector<TensionLadder>& ladders, const LoadSet& loads,
                   double level) const {
    const int cap = 50 * opt_.max_iterations;
    for (int it = 0; it < cap; ++it) {
      const Eigen::VectorXd r = m_.residual(theta, ladders, loads, gravity_scale(level), level);
      if (free_max(r, contacts(theta, r)) < opt_.residual_tolerance) return true;
      theta = (theta + opt_.relaxation * r.cwiseQuotient(k_)).cwiseMax(lo_).cwiseMin(hi_);
      if (!theta.allFinite()) return false;
    }
    return false;
  }

  const StaticsModel& m_;
  const Eigen::VectorXd& tensions_;
  const LoadSet& loads_;
  const FrictionModel& friction_;
  const SolverOptions& opt_;
  CableDirection dir_;
  Eigen::VectorXd k_, lo_, hi_;
};

}  // namespace

Eigen::VectorXd linear_guess(const StaticsModel& model, const Eigen::VectorXd& proximal_tensions) {
  const auto& desc = model.description();
  const auto& layout = model.layout();
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(model.joint_count());
  for (int c = 0; c < model.cable_count(); ++c) {
    const auto& route = desc.cables[c];
    for (int g = 0; g < model.termination(c); ++g) {
      const auto& j = layout.joints[g];
      const double rho = route.radius_on(j.kind);
      theta[g] += proximal_tensions[c] *
                  bending_projection(j.axis, rho * std::cos(route.phase), rho * std::sin(route.phase));
    }
  }
  for (int g = 0; g < model.joint_count(); ++g) {
    const auto& j = layout.joints[g];
    theta[g] = std::clamp(theta[g] / j.stiffness, j.lower, j.upper);
  }
  return theta;
}

EquilibriumResult solve_equilibrium(const StaticsModel& model, const Eigen::VectorXd& proximal_tensions,
                                    const LoadSet& loads, const FrictionModel& friction, const SolverOptions& options) {
  if (proximal_tensions.size() != model.cable_count())
    throw DomainError("expected " + std::to_string(model.cable_count()) + " cable tensions, got " +
                      std::to_string(proximal_tensions.size()));
  if ((proximal_tensions.array() < 0.0).any()) throw DomainError("cable tensions must be non-negative");
  if (loads.payload_mass < 0.0) throw DomainError("payload mass must be non-negative");

  Eigen::VectorXd guess = options.initial_guess ? *options.initial_guess : linear_guess(model, proximal_tensions);
  if (guess.size() != model.joint_count()) throw DomainError("initial guess has the wrong number of joint angles");

  Solver primary(model, proximal_tensions, loads, friction, options, direction_of(options.friction_mode));
  EquilibriumResult res = primary.run(guess);

  if (options.friction_mode == FrictionMode::Holding) {
    Solver other(model, proximal_tensions, loads, friction, options, CableDirection::Releasing);
    auto rel = other.run(res.config.flatten());
    if (rel.converged) res.releasing_bound = rel.config;
  }

  if (options.strict && res.converged) {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto theta = res.config.flatten();
    for (int start = 0; start < 3; ++start) {
      Eigen::VectorXd probe(model.joint_count());
      for (int g = 0; g < model.joint_count(); ++g) {
        const auto& j = model.layout().joints[g];
        probe[g] = j.lower + (j.upper - j.lower) * unit(rng);
      }
      Solver s(model, proximal_tensions, loads, friction, options, direction_of(options.friction_mode));
      const auto alt = s.run(probe);
      if (alt.converged && (alt.config.flatten() - theta).cwiseAbs().maxCoeff() > 1e-6) {
        res.multistable = true;
        res.message = "equilibrium is not unique: a perturbed start converged to a different shape";
      }
    }
  }
  return res;
}

EquilibriumResult solve_equilibrium(const RobotDescription& desc, const Eigen::VectorXd& proximal_tensions,
                                    const LoadSet& loads, const FrictionModel& friction, const SolverOptions& options) {
  const StaticsModel model(desc);
  return solve_equilibrium(model, proximal_tensions, loads, friction, options);
}

// ---------------------------------------------------------------------------
// Inverse problem

namespace {

struct Dof {
  int section;
  int axis_index;  // 0 for body; 0 = y, 1 = x for tip
  JointAxis axis;
};

std::vector<Dof> dofs_of(const RobotDescription& desc) {
  std::vector<Dof> out;
  for (int i = 0; i < static_cast<int>(desc.sections.size()); ++i) {
    if (desc.sections[i].kind == SectionKind::Body) {
      out.push_back({i, 0, JointAxis::X});
    } else {
      out.push_back({i, 0, JointAxis::Y});
      out.push_back({i, 1, JointAxis::X});
    }
  }
  return out;
}

std::vector<int> cables_ending_at(const RobotDescription& desc, int section) {
  std::vector<int> out;
  for (int c = 0; c < static_cast<int>(desc.cables.size()); ++c)
    if (desc.cables[c].terminates_at_section == section) out.push_back(c);
  return out;
}

// Section angle sums in dof order.
Eigen::VectorXd dof_sums(const RobotDescription& desc, const std::vector<Dof>& dofs, const Configuration& config) {
  Eigen::VectorXd s(static_cast<Eigen::Index>(dofs.size()));
  for (std::size_t k = 0; k < dofs.size(); ++k)
    s[k] = desc.sections[dofs[k].section].kind == SectionKind::Body
               ? config.section_sum(dofs[k].section)
               : config.section_sum(desc, dofs[k].section, dofs[k].axis);
  return s;
}

// Sum of the limits reachable by a dof, upper or lower.
double dof_limit(const RobotDescription& desc, const Dof& dof, bool upper) {
  const auto& s = desc.sections[dof.section];
  const int n = s.kind == SectionKind::Body ? s.disk_count : s.joints_on(dof.axis);
  return upper ? n * s.joint_upper() : n * s.joint_lower();
}

}  // namespace

Eigen::VectorXd plan_tensions(const RobotDescription& desc, const Eigen::VectorXd& parameters, double pretension) {
  const auto dofs = dofs_of(desc);
  if (parameters.size() != static_cast<Eigen::Index>(dofs.size()))
    throw DomainError("expected " + std::to_string(dofs.size()) + " plan parameters");
  Eigen::VectorXd t = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(desc.cables.size()), pretension);
  std::size_t k = 0;
  for (int i = 0; i < static_cast<int>(desc.sections.size()); ++i) {
    const auto cables = cables_ending_at(desc, i);
    if (desc.sections[i].kind == SectionKind::Body) {
      if (cables.size() != 2)
        throw DomainError("body section " + std::to_string(i + 1) + " needs exactly two cables to be planned");
      const double u = parameters[static_cast<Eigen::Index>(k++)];
      auto proj = [&](int c) { return std::sin(desc.cables[c].phase); };
      const int pos = proj(cables[0]) >= proj(cables[1]) ? cables[0] : cables[1];
      const int neg = pos == cables[0] ? cables[1] : cables[0];
      if (u >= 0.0)
        t[pos] += u;
      else
        t[neg] -= u;
    } else {
      if (cables.size() != 3)
        throw DomainError("tip section " + std::to_string(i + 1) + " needs exactly three cables to be planned");
      Eigen::Matrix<double, 2, 3> A;
      for (int c = 0; c < 3; ++c) {
        A(0, c) = std::cos(desc.cables[cables[c]].phase);
        A(1, c) = std::sin(desc.cables[cables[c]].phase);
      }
      const Eigen::Vector2d u(parameters[static_cast<Eigen::Index>(k)], parameters[static_cast<Eigen::Index>(k + 1)]);
      k += 2;
      const Eigen::Vector3d wp = A.transpose() * (A * A.transpose()).ldlt().solve(u);
      Eigen::Vector3d null = Eigen::Vector3d(A.row(0).transpose()).cross(Eigen::Vector3d(A.row(1).transpose()));
      if (null.sum() < 0.0) null = -null;
      if ((null.array() <= 0.0).any())
        throw DomainError("tip section " + std::to_string(i + 1) + " cables cannot share a common pretension");
      const double lambda = (-wp.array() / null.array()).maxCoeff();
      const Eigen::Vector3d w = wp + lambda * null;
      for (int c = 0; c < 3; ++c) t[cables[c]] += std::max(0.0, w[c]);
    }
  }
  return t;
}

SectionTargets section_angles(const RobotDescription& desc, const Configuration& config) {
  SectionTargets out;
  for (int i = 0; i < static_cast<int>(desc.sections.size()); ++i) {
    if (desc.sections[i].kind == SectionKind::Body)
      out.push_back({config.section_sum(i)});
    else
      out.push_back({config.section_sum(desc, i, JointAxis::Y), config.section_sum(desc, i, JointAxis::X)});
  }
  return out;
}

PlanResult actuation_plan(const RobotDescription& desc, const SectionTargets& targets, const LoadSet& loads,
                          const FrictionModel& friction, const PlanOptions& options) {
  const auto dofs = dofs_of(desc);
  const int nd = static_cast<int>(dofs.size());
  if (targets.size() != desc.sections.size())
    throw DomainError("expected targets for " + std::to_string(desc.sections.size()) + " sections");

  Eigen::VectorXd target(nd);
  std::vector<int> interlock(nd, 0);  // +1 / -1 when commanded onto a limit
  for (int k = 0; k < nd; ++k) {
    const auto& row = targets[dofs[k].section];
    const std::size_t want = desc.sections[dofs[k].section].kind == SectionKind::Body ? 1 : 2;
    if (row.size() != want)
      throw DomainError("section " + std::to_string(dofs[k].section + 1) + " expects " + std::to_string(want) +
                        " target angle(s)");
    target[k] = row[dofs[k].axis_index];
    const double hi = dof_limit(desc, dofs[k], true);
    const double lo = dof_limit(desc, dofs[k], false);
    if (target[k] > hi + 1e-9 || target[k] < lo - 1e-9)
      throw BendLimitError(target[k], lo, hi, "target of section " + std::to_string(dofs[k].section + 1));
    if (std::abs(target[k] - hi) <= 1e-9) interlock[k] = 1;
    if (std::abs(target[k] - lo) <= 1e-9) interlock[k] = -1;
  }

  const StaticsModel model(desc);
  const auto& layout = model.layout();

  // Uniform-curvature shape of the targets, used to estimate the gravity and tip-load moments.
  Eigen::VectorXd shape = Eigen::VectorXd::Zero(model.joint_count());
  for (int k = 0; k < nd; ++k) {
    const auto& s = desc.sections[dofs[k].section];
    const int first = layout.section_first_joint[dofs[k].section];
    const int n = s.kind == SectionKind::Body ? s.disk_count : s.joints_on(dofs[k].axis);
    for (int j = 0; j < s.disk_count; ++j)
      if (s.joint_axes[j] == dofs[k].axis) shape[first + j] = std::clamp(target[k] / n, s.joint_lower(), s.joint_upper());
  }
  Eigen::VectorXd load_moment = Eigen::VectorXd::Zero(model.joint_count());
  {
    std::vector<TensionLadder> none = model.ladders(chain_pose(desc, layout, shape),
                                                    Eigen::VectorXd::Zero(model.cable_count()),
                                                    FrictionModel::frictionless(), CableDirection::Pulling);
    load_moment = model.residual(shape, none, loads, options.solver.gravity ? 1.0 : 0.0);
    for (int g = 0; g < model.joint_count(); ++g) load_moment[g] += layout.joints[g].stiffness * shape[g];
  }

  // Small-angle response of the section sums with the loads frozen at the target shape:
  // piecewise linear in the parameters.
  auto linear_sums = [&](const Eigen::VectorXd& p) {
    const Eigen::VectorXd t = plan_tensions(desc, p, options.pretension);
    Eigen::VectorXd theta = load_moment;
    for (int c = 0; c < model.cable_count(); ++c) {
      const auto& route = desc.cables[c];
      for (int g = 0; g < model.termination(c); ++g) {
        const auto& j = layout.joints[g];
        const double rho = route.radius_on(j.kind);
        theta[g] += t[c] * bending_projection(j.axis, rho * std::cos(route.phase), rho * std::sin(route.phase));
      }
    }
    for (int g = 0; g < model.joint_count(); ++g) theta[g] /= layout.joints[g].stiffness;
    return dof_sums(desc, dofs, Configuration::from_flat(desc, theta));
  };
  auto linear_jacobian = [&](const Eigen::VectorXd& p) {
    Eigen::MatrixXd J(nd, nd);
    const Eigen::VectorXd s0 = linear_sums(p);
    for (int k = 0; k < nd; ++k) {
      const double h = 1e-3;
      Eigen::VectorXd pp = p;
      pp[k] += p[k] >= 0.0 ? h : -h;
      J.col(k) = (linear_sums(pp) - s0) / (pp[k] - p[k]);
    }
    return J;
  };

  Eigen::VectorXd p = Eigen::VectorXd::Zero(nd);
  for (int it = 0; it < 20; ++it) {
    const Eigen::VectorXd e = linear_sums(p) - target;
    if (e.cwiseAbs().maxCoeff() < 1e-14) break;
    p -= linear_jacobian(p).fullPivLu().solve(e);
  }
  for (int k = 0; k < nd; ++k)
    if (interlock[k] != 0) p[k] *= options.overdrive;

  SolverOptions solver = options.solver;
  // Section sums are only as accurate as the inner equilibria.
  solver.residual_tolerance = std::min(solver.residual_tolerance, 1e-12);
  const bool strict = solver.strict;
  solver.strict = false;

  auto check_limit = [&](const Eigen::VectorXd& t) {
    for (int c = 0; c < t.size(); ++c)
      if (t[c] > options.cable_limit)
        throw InfeasiblePlanError("cable " + std::to_string(desc.cables[c].id) + " would need " +
                                  std::to_string(t[c]) + " N, above the " + std::to_string(options.cable_limit) +
                                  " N limit");
  };

  auto interlock_held = [&](const EquilibriumResult& eq, int k) {
    const auto& s = desc.sections[dofs[k].section];
    const int first = layout.section_first_joint[dofs[k].section];
    for (int j = 0; j < s.disk_count; ++j)
      if (s.joint_axes[j] == dofs[k].axis && eq.contact[first + j] != interlock[k]) return false;
    return true;
  };

  auto error_of = [&](const EquilibriumResult& eq) {
    Eigen::VectorXd e = dof_sums(desc, dofs, eq.config) - target;
    for (int k = 0; k < nd; ++k)
      if (interlock[k] != 0 && interlock_held(eq, k)) e[k] = 0.0;
    return e;
  };

  PlanResult plan;
  Eigen::VectorXd t = plan_tensions(desc, p, options.pretension);
  check_limit(t);
  // Track the equilibrium branch through the target shape.
  if (!solver.initial_guess) solver.initial_guess = shape;
  EquilibriumResult eq = solve_equilibrium(model, t, loads, friction, solver);
  Eigen::VectorXd err = error_of(eq);

  for (int it = 0; it < options.max_iterations; ++it) {
    if (!eq.converged) break;
    // A section commanded into interlock that is not fully seated gets more tension.
    bool bumped = false;
    for (int k = 0; k < nd; ++k)
      if (interlock[k] != 0 && !interlock_held(eq, k)) {
        p[k] = p[k] == 0.0 ? interlock[k] : p[k] * options.overdrive;
        bumped = true;
      }
    if (!bumped && err.cwiseAbs().maxCoeff() < options.tolerance) {
      plan.converged = true;
      break;
    }
    plan.iterations = it + 1;
    if (bumped) {
      t = plan_tensions(desc, p, options.pretension);
      check_limit(t);
      solver.initial_guess = eq.config.flatten();
      eq = solve_equilibrium(model, t, loads, friction, solver);
      err = error_of(eq);
      continue;
    }

    // Sensitivity of the section sums through the equilibrium, ladders held fixed.
    const Eigen::VectorXd theta = eq.config.flatten();
    std::vector<int> free;
    for (int g = 0; g < model.joint_count(); ++g)
      if (eq.contact[g] == 0) free.push_back(g);
    const int nf = static_cast<int>(free.size());
    auto eval = [&](const Eigen::VectorXd& th) {
      return model.residual(th, eq.ladders, loads, solver.gravity ? 1.0 : 0.0);
    };
    Eigen::MatrixXd Jtt(nf, nf);
    for (int b = 0; b < nf; ++b) {
      Eigen::VectorXd tp = theta, tm = theta;
      tp[free[b]] += solver.fd_step;
      tm[free[b]] -= solver.fd_step;
      const Eigen::VectorXd d = (eval(tp) - eval(tm)) / (2.0 * solver.fd_step);
      for (int a = 0; a < nf; ++a) Jtt(a, b) = d[free[a]];
    }
    const auto poses = chain_pose(desc, layout, theta);
    std::vector<TensionLadder> none = eq.ladders;
    for (auto& l : none) {
      std::fill(l.gap.begin(), l.gap.end(), 0.0);
      std::fill(l.bore.begin(), l.bore.end(), 0.0);
    }
    const Eigen::VectorXd base = model.residual(theta, none, LoadSet{}, 0.0);
    Eigen::MatrixXd dRdT(model.joint_count(), model.cable_count());
    for (int c = 0; c < model.cable_count(); ++c) {
      auto unit = none;
      unit[c] = propagate_tensions(model.route(poses, c), desc.cables[c].id, 1.0, friction,
                                   direction_of(solver.friction_mode));
      dRdT.col(c) = model.residual(theta, unit, LoadSet{}, 0.0) - base;
    }
    Eigen::MatrixXd dTdp(model.cable_count(), nd);
    for (int k = 0; k < nd; ++k) {
      const double h = 1e-3;
      Eigen::VectorXd pp = p;
      pp[k] += p[k] >= 0.0 ? h : -h;
      dTdp.col(k) = (plan_tensions(desc, pp, options.pretension) - t) / (pp[k] - p[k]);
    }
    const Eigen::MatrixXd dRdp = dRdT * dTdp;
    Eigen::MatrixXd dRfdp(nf, nd);
    for (int a = 0; a < nf; ++a) dRfdp.row(a) = dRdp.row(free[a]);
    const Eigen::MatrixXd dthf = -Jtt.partialPivLu().solve(dRfdp);
    Eigen::MatrixXd dth = Eigen::MatrixXd::Zero(model.joint_count(), nd);
    for (int a = 0; a < nf; ++a) dth.row(free[a]) = dthf.row(a);

    Eigen::MatrixXd S(nd, nd);
    for (int k = 0; k < nd; ++k) {
      const auto& s = desc.sections[dofs[k].section];
      const int first = layout.section_first_joint[dofs[k].section];
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(nd);
      for (int j = 0; j < s.disk_count; ++j)
        if (s.joint_axes[j] == dofs[k].axis) row += dth.row(first + j);
      S.row(k) = row;
    }
    // A section seated on its bevels has no local sensitivity; steer it with the small-angle model.
    const Eigen::MatrixXd L = linear_jacobian(p);
    // The same holds when part of the section rests on the bevel the error has to move away from.
    for (int k = 0; k < nd; ++k) {
      const auto& s = desc.sections[dofs[k].section];
      const int first = layout.section_first_joint[dofs[k].section];
      const int away = err[k] < 0.0 ? -1 : 1;
      bool seated = false;
      for (int j = 0; j < s.disk_count; ++j)
        if (s.joint_axes[j] == dofs[k].axis && eq.contact[first + j] == away) seated = true;
      if (seated || S.row(k).norm() < 1e-3 * L.row(k).norm()) S.row(k) = L.row(k);
    }
    // Interlocked dofs keep their overdriven tension.
    for (int k = 0; k < nd; ++k)
      if (interlock[k] != 0) {
        S.row(k).setZero();
        S.col(k).setZero();
        S(k, k) = 1.0;
      }
    const double lm = 1e-12 * std::max(1.0, S.squaredNorm());
    const Eigen::MatrixXd N = S.transpose() * S + lm * Eigen::MatrixXd::Identity(nd, nd);
    const Eigen::VectorXd dp = -N.ldlt().solve(S.transpose() * err);

    const double e0 = err.norm();
    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 10; ++ls, alpha *= 0.5) {
      const Eigen::VectorXd pc = p + alpha * dp;
      const Eigen::VectorXd tc = plan_tensions(desc, pc, options.pretension);
      check_limit(tc);
      solver.initial_guess = theta;
      auto eqc = solve_equilibrium(model, tc, loads, friction, solver);
      if (!eqc.converged) continue;
      const Eigen::VectorXd ec = error_of(eqc);
      if (ec.norm() < e0) {
        p = pc;
        t = tc;
        eq = std::move(eqc);
        err = ec;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }

  if (strict && eq.converged) {
    solver.strict = true;
    solver.initial_guess = eq.config.flatten();
    eq = solve_equilibrium(model, t, loads, friction, solver);
  }

  plan.parameters = p;
  plan.achieved = section_angles(desc, eq.config);
  plan.max_error = (dof_sums(desc, dofs, eq.config) - target).cwiseAbs().maxCoeff();
  plan.cables = cable_lengths(desc, eq.config);
  plan.cables.tensions = t;
  plan.equilibrium = std::move(eq);
  if (!plan.equilibrium.converged) plan.converged = false;
  return plan;
}

}  // namespace tendonstat
