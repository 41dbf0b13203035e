#include "tendonstat/friction.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Dense>

#include "tendonstat/errors.hpp"
#include "tendonstat/units.hpp"

namespace tendonstat {

namespace {

constexpr double kDomainSlack = 1e-12;

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
  double rms = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("friction fit needs at least two distinct weights per angle");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    ss += r * r;
  }
  f.rms = std::sqrt(ss / n);
  f.r_squared = syy > 0.0 ? 1.0 - ss / syy : 1.0;
  return f;
}

}  // namespace

double FrictionModel::operator()(double theta) const {
  if (theta < theta_min - kDomainSlack || theta > theta_max + kDomainSlack)
    throw DomainError("friction model evaluated at " + std::to_string(units::to_deg(theta)) +
                      " deg, outside its fitted domain [" + std::to_string(units::to_deg(theta_min)) + ", " +
                      std::to_string(units::to_deg(theta_max)) + "] deg");
  return (a * theta + b) * theta + c;
}

double FrictionModel::max_over_domain() const {
  double best = std::max((*this)(theta_min), (*this)(theta_max));
  if (a < 0.0) {
    const double vertex = -b / (2.0 * a);
    if (vertex > theta_min && vertex < theta_max) best = std::max(best, (*this)(vertex));
  }
  return best;
}

FrictionModel FrictionModel::frictionless() { return {0.0, 0.0, 0.0, 0.0, units::kPi}; }

FrictionModel FrictionModel::default_calibration() { return {0.4, 0.25, 0.12, 0.0, units::deg(30.0)}; }

double friction_coefficient(const FrictionModel& model, double theta) { return model(theta); }

double normal_force(double t_in, double t_out, double theta) { return (t_in + t_out) * std::sin(0.5 * theta); }

double lifting_tension(double weight_force, double theta, double mu) {
  const double ms = mu * std::sin(0.5 * theta);
  if (ms >= 1.0) throw DomainError("friction locks the cable at this turn angle");
  return weight_force * (1.0 + ms) / (1.0 - ms);
}

FrictionFit fit_friction_model(const std::vector<FrictionTrial>& trials) {
  if (trials.empty()) throw DomainError("friction fit needs trial data");
  std::map<double, std::vector<const FrictionTrial*>> by_angle;
  for (const auto& t : trials) by_angle[t.theta].push_back(&t);
  if (by_angle.size() < 2) throw DomainError("friction fit needs at least two distinct angles");

  FrictionFit fit;
  for (const auto& [theta, group] : by_angle) {
    AngleFit af;
    af.theta = theta;
    for (const auto* t : group) {
      af.friction_force.push_back(t->measured_tension - t->weight_force);
      af.normal_force.push_back(normal_force(t->measured_tension, t->weight_force, theta));
    }
    const auto line = fit_line(af.normal_force, af.friction_force);
    af.mu = line.slope;
    af.intercept = line.intercept;
    af.r_squared = line.r_squared;
    af.rms_residual = line.rms;
    fit.angles.push_back(std::move(af));
  }

  // mu against theta on a scaled abscissa for conditioning; a straight line when only two angles exist.
  const int m = static_cast<int>(fit.angles.size());
  const int degree = m >= 3 ? 2 : 1;
  const double scale = std::max(std::abs(fit.angles.front().theta), std::abs(fit.angles.back().theta));
  Eigen::MatrixXd A(m, degree + 1);
  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) {
    const double u = fit.angles[i].theta / scale;
    for (int p = 0; p <= degree; ++p) A(i, p) = std::pow(u, degree - p);
    y[i] = fit.angles[i].mu;
  }
  const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(y);
  if (degree == 2) {
    fit.model.a = coef[0] / (scale * scale);
    fit.model.b = coef[1] / scale;
    fit.model.c = coef[2];
  } else {
    fit.model.b = coef[0] / scale;
    fit.model.c = coef[1];
  }
  fit.model.theta_min = 0.0;
  fit.model.theta_max = fit.angles.back().theta;

  const Eigen::VectorXd r = y - A * coef;
  const double mean = y.mean();
  const double ss_tot = (y.array() - mean).square().sum();
  fit.rms_residual = std::sqrt(r.squaredNorm() / m);
  fit.r_squared = ss_tot > 0.0 ? 1.0 - r.squaredNorm() / ss_tot : 1.0;
  return fit;
}

}  // namespace tendonstat
