#pragma once

#include <vector>

namespace tendonstat {

/// Cable-to-hole friction coefficient mu(theta) = a theta^2 + b theta + c, theta in rad.
struct FrictionModel {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double theta_min = 0.0;  // rad
  double theta_max = 0.0;  // rad

  /// Throws DomainError outside [theta_min, theta_max].
  double operator()(double theta) const;
  /// Largest coefficient over the validity domain.
  double max_over_domain() const;
  bool is_frictionless() const { return a == 0.0 && b == 0.0 && c == 0.0; }

  static FrictionModel frictionless();
  /// Default calibration shipped with the bundled robot.
  static FrictionModel default_calibration();

  bool operator==(const FrictionModel&) const = default;
};

double friction_coefficient(const FrictionModel& model, double theta);

/// One pulley trial: cable deflected by `theta` over a hole, weight on the far end,
/// tension measured on the pulled end.
struct FrictionTrial {
  double theta = 0.0;             // rad
  double weight_force = 0.0;      // N
  double measured_tension = 0.0;  // N
};

struct AngleFit {
  double theta = 0.0;
  double mu = 0.0;          // slope of F_f against F_N
  double intercept = 0.0;   // N
  double r_squared = 1.0;
  double rms_residual = 0.0;  // N
  std::vector<double> normal_force;    // N, one per trial
  std::vector<double> friction_force;  // N, one per trial
};

struct FrictionFit {
  FrictionModel model;
  std::vector<AngleFit> angles;  // ascending theta
  double r_squared = 1.0;        // of the mu(theta) fit
  double rms_residual = 0.0;
};

/// Normal force at a hole of turn angle theta carrying tensions t_in and t_out.
double normal_force(double t_in, double t_out, double theta);

/// Tension on the pulled end that just lifts `weight_force` over a hole of turn angle theta.
double lifting_tension(double weight_force, double theta, double mu);

/// Two-stage least-squares fit: F_f against F_N per angle, then mu against theta.
/// Throws DomainError when fewer than two distinct angles or two weights per angle are given.
FrictionFit fit_friction_model(const std::vector<FrictionTrial>& trials);

}  // namespace tendonstat
