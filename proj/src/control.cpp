#include "forceflow/control.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>

#include "forceflow/errors.hpp"

namespace forceflow {

double compliance_gain_schedule(double force_mag, const ComplianceSchedule& sched) {
  if (force_mag < 0.0) throw ValidationError("force magnitude must be >= 0");
  if (!(sched.d_up >= sched.d_down && sched.d_down > 0.0))
    throw ValidationError("schedule requires d_up >= d_down > 0");
  if (!(sched.f_up > sched.f_down && sched.f_down >= 0.0))
    throw ValidationError("schedule requires f_up > f_down >= 0");
  if (force_mag < sched.f_down) return sched.d_up;
  if (force_mag > sched.f_up) return sched.d_down;
  const double a = (force_mag - sched.f_down) / (sched.f_up - sched.f_down);
  return sched.d_up - (sched.d_up - sched.d_down) * a;
}

Eigen::Vector3d blend_direction(const Eigen::Vector3d& t_raw, const Eigen::Vector3d& n_raw,
                                double d) {
  const double tn = t_raw.norm();
  const double nn = n_raw.norm();
  if (tn < 1e-9 && nn < 1e-9) throw ValidationError("blend has no usable direction");
  const Eigen::Vector3d t_hat = tn < 1e-9 ? Eigen::Vector3d::Zero().eval() : (t_raw / tn).eval();
  const Eigen::Vector3d n_hat = nn < 1e-9 ? Eigen::Vector3d::Zero().eval() : (n_raw / nn).eval();
  const Eigen::Vector3d blend = d * n_hat + t_hat;
  const double bn = blend.norm();
  if (bn < 1e-9) {
    return tn >= 1e-9 ? t_hat : n_hat;
  }
  return blend / bn;
}

Eigen::Matrix3d damping_matrix(const DampingSpec& spec) {
  if ((spec.eigenvalues.array() <= 0.0).any())
    throw ValidationError("damping eigenvalues must be positive");
  const double pn = spec.primary.norm();
  if (pn < 1e-12) throw ValidationError("primary damping direction must be nonzero");
  const Eigen::Vector3d v1 = spec.primary / pn;
  int least = 0;
  double least_dot = std::abs(v1[0]);
  for (int i = 1; i < 3; ++i) {
    const double a = std::abs(v1[i]);
    if (a < least_dot) {
      least_dot = a;
      least = i;
    }
  }
  Eigen::Vector3d axis = Eigen::Vector3d::Zero();
  axis[least] = 1.0;
  const Eigen::Vector3d v2 = (axis - axis.dot(v1) * v1).normalized();
  const Eigen::Vector3d v3 = v1.cross(v2);
  Eigen::Matrix3d v;
  v.col(0) = v1;
  v.col(1) = v2;
  v.col(2) = v3;
  return v * spec.eigenvalues.asDiagonal() * v.transpose();
}

ForceVec passive_command(const Eigen::Vector3d& xdot, const Eigen::Vector3d& f_x,
                         const Eigen::Matrix3d& damping) {
  return -damping * (xdot - f_x);
}

ForceVec simple_passive_command(const Eigen::Vector3d& f_x, const Eigen::Matrix3d& damping) {
  return damping * f_x;
}

std::pair<int, int> RolloutTrace::contact_window() const {
  int lo = -1, hi = -1;
  for (int i = 0; i < static_cast<int>(steps.size()); ++i) {
    if (steps[i].in_contact) {
      if (lo < 0) lo = i;
      hi = i;
    }
  }
  return {lo, hi};
}

double energy_injected(const RolloutTrace& trace, int lo, int hi, bool signed_power) {
  const int n = static_cast<int>(trace.steps.size());
  if (lo < 0 || hi >= n || lo >= hi) throw ValidationError("empty or invalid energy window");
  auto value = [&](int i) {
    const double p = trace.steps[i].power;
    return signed_power ? p : std::max(0.0, p);
  };
  double total = 0.0;
  for (int i = lo; i < hi; ++i) {
    total += 0.5 * (value(i) + value(i + 1)) * trace.dt;
  }
  return total;
}

}  // namespace forceflow
