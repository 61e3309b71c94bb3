#pragma once

#include <Eigen/Core>

#include <vector>

#include "forceflow/geometry.hpp"

namespace forceflow {

// Force-scheduled compliance gain: d_up below f_down, linear descent to
// d_down at f_up, d_down above. Force units match whatever magnitude is fed
// in (normalized force in this pipeline).
struct ComplianceSchedule {
  double d_up = 4.0;
  double d_down = 0.2;
  double f_down = 0.1;
  double f_up = 0.6;
};

double compliance_gain_schedule(double force_mag, const ComplianceSchedule& sched);

// u_hat = (d n_hat + t_hat) / ||d n_hat + t_hat|| with both inputs normalized
// first. Near-cancellation falls back to the tangent direction; two zero
// inputs are an error.
Eigen::Vector3d blend_direction(const Eigen::Vector3d& t_raw, const Eigen::Vector3d& n_raw,
                                double d);

inline Eigen::Vector3d desired_velocity(const Eigen::Vector3d& u_hat, double k) {
  return k * u_hat;
}

// D = V diag(lambda) V^T with v1 = primary; the basis is completed by
// Gram-Schmidt against the least-aligned coordinate axis.
struct DampingSpec {
  Eigen::Vector3d eigenvalues = Eigen::Vector3d(40.0, 40.0, 40.0);
  Eigen::Vector3d primary = Eigen::Vector3d(1.0, 0.0, 0.0);
};

Eigen::Matrix3d damping_matrix(const DampingSpec& spec);

// Full passive law F = -D (xdot - f_x).
ForceVec passive_command(const Eigen::Vector3d& xdot, const Eigen::Vector3d& f_x,
                         const Eigen::Matrix3d& damping);

// Velocity-component-only variant F = D f_x.
ForceVec simple_passive_command(const Eigen::Vector3d& f_x, const Eigen::Matrix3d& damping);

struct TraceStep {
  double t = 0.0;
  ForceVec f_cmd = ForceVec::Zero();
  Eigen::Vector3d ee_vel = Eigen::Vector3d::Zero();
  ForceVec f_meas = ForceVec::Zero();  // measured applied force
  Eigen::Vector3d u_hat = Eigen::Vector3d::Zero();
  double d = 0.0;
  double power = 0.0;  // f_cmd . ee_vel
  bool in_contact = false;
};

struct RolloutTrace {
  std::vector<TraceStep> steps;
  double dt = 0.01;

  // First/last in-contact step indices, or (-1,-1) when never in contact.
  std::pair<int, int> contact_window() const;
};

// Trapezoidal integral of max(0, power) (or raw power when signed_power)
// over steps [lo, hi].
double energy_injected(const RolloutTrace& trace, int lo, int hi, bool signed_power = false);

}  // namespace forceflow
