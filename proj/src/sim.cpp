#include "forceflow/sim.hpp"

#include <algorithm>
#include <cmath>

#include "forceflow/errors.hpp"

namespace forceflow {

namespace {

inline Eigen::Vector2d rot(double theta, const Eigen::Vector2d& v) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

// Regularized Coulomb friction solved implicitly against the tangential
// velocity the contact point is predicted to have after the step's other
// forces. The implicit viscous branch anchors sticking contacts without the
// reversal chatter an explicit 1 kHz step would produce.
inline double friction_force(double vt_pred, double mu, double fn, double stick_velocity,
                             double m_eff, double dt) {
  const double cap = mu * fn;
  if (cap <= 0.0) return 0.0;
  const double slope = cap / stick_velocity;
  const double f = -slope * vt_pred / (1.0 + dt * slope / m_eff);
  return std::clamp(f, -cap, cap);
}

}  // namespace

Pose BlockState::pose() const {
  Pose out;
  out.p = {x, 0.0, z};
  out.q = UnitQuaternion::rot_y(-theta);  // R_y(-theta) matches CCW rotation in the x-z plane
  return out;
}

Pose EEState::pose() const {
  Pose out;
  out.p = {x, 0.0, z};
  return out;
}

PlanarWorld::PlanarWorld(const SimConfig& cfg, const BlockState& block, const EEState& ee)
    : cfg_(cfg), block_(block), ee_(ee) {
  if (cfg.dt <= 0.0 || cfg.dt > 2e-3) throw ValidationError("dt_physics outside (0, 2 ms]");
  if (cfg.k_contact <= 0.0) throw ValidationError("contact stiffness must be positive");
  if (block.mass <= 0.0 || block.half_w <= 0.0 || block.half_h <= 0.0)
    throw ValidationError("block mass and half-extents must be positive");
  if (block.friction < 0.0 || block.friction > 2.0)
    throw ValidationError("block friction outside [0, 2]");
  if (ee.radius <= 0.0 || ee.mass <= 0.0)
    throw ValidationError("ee radius and mass must be positive");
}

ContactInfo PlanarWorld::step(const ForceVec& ee_command_force) {
  const double dt = cfg_.dt;
  const double inertia = block_.inertia();
  ContactInfo info;

  // Accumulated non-friction forces; friction is resolved afterwards against
  // the velocity each contact point would otherwise reach.
  double block_fx = 0.0, block_fz = -block_.mass * cfg_.gravity, block_tau = 0.0;
  double ee_fx = ee_command_force.x(), ee_fz = ee_command_force.z();
  double ee_cfx = 0.0, ee_cfz = 0.0;  // contact share on the ee, for sensing

  struct CornerContact {
    Eigen::Vector2d r;       // from block CoM, world
    Eigen::Vector2d corner;  // world position
    double fn = 0.0;
  };
  CornerContact corners[4];
  int n_corners = 0;

  const double mu_table = block_.friction;
  for (int sx = -1; sx <= 1; sx += 2) {
    for (int sz = -1; sz <= 1; sz += 2) {
      const Eigen::Vector2d local(sx * block_.half_w, sz * block_.half_h);
      const Eigen::Vector2d r = rot(block_.theta, local);
      const Eigen::Vector2d corner(block_.x + r.x(), block_.z + r.y());
      const double pen = cfg_.table_z - corner.y();
      if (pen <= 0.0) continue;
      const double vpz = block_.vz + block_.omega * r.x();
      double fn = cfg_.k_contact * pen + cfg_.c_contact * (-vpz);
      fn = std::max(fn, 0.0);
      block_fz += fn;
      block_tau += r.x() * fn;
      corners[n_corners++] = {r, corner, fn};
    }
  }

  // EE disc against the block: normal force now, friction below.
  bool ee_block_contact = false;
  Eigen::Vector2d eb_n = Eigen::Vector2d::Zero(), eb_t = Eigen::Vector2d::Zero();
  Eigen::Vector2d eb_r = Eigen::Vector2d::Zero();
  double eb_fn = 0.0, eb_mu = 0.0;
  {
    const Eigen::Vector2d d_world(ee_.x - block_.x, ee_.z - block_.z);
    const Eigen::Vector2d d = rot(-block_.theta, d_world);
    Eigen::Vector2d closest(std::clamp(d.x(), -block_.half_w, block_.half_w),
                            std::clamp(d.y(), -block_.half_h, block_.half_h));
    Eigen::Vector2d n_local;
    double pen;
    if ((d - closest).squaredNorm() > 1e-18) {
      const Eigen::Vector2d delta = d - closest;
      const double dist = delta.norm();
      pen = ee_.radius - dist;
      n_local = delta / dist;
    } else {
      const double dx = block_.half_w - std::abs(d.x());
      const double dz = block_.half_h - std::abs(d.y());
      if (dx < dz) {
        n_local = {d.x() >= 0.0 ? 1.0 : -1.0, 0.0};
        pen = ee_.radius + dx;
        closest = {n_local.x() * block_.half_w, d.y()};
      } else {
        n_local = {0.0, d.y() >= 0.0 ? 1.0 : -1.0};
        pen = ee_.radius + dz;
        closest = {d.x(), n_local.y() * block_.half_h};
      }
    }
    if (pen > 0.0) {
      ee_block_contact = true;
      eb_n = rot(block_.theta, n_local);
      eb_t = {-eb_n.y(), eb_n.x()};
      eb_r = rot(block_.theta, closest);
      const double vbx = block_.vx - block_.omega * eb_r.y();
      const double vbz = block_.vz + block_.omega * eb_r.x();
      const double sep_rate = (ee_.vx - vbx) * eb_n.x() + (ee_.vz - vbz) * eb_n.y();
      eb_fn = cfg_.k_contact * pen + cfg_.c_contact * (-sep_rate);
      eb_fn = std::max(eb_fn, 0.0);
      eb_mu = std::sqrt(cfg_.mu_ee * block_.friction);
      ee_cfx += eb_fn * eb_n.x();
      ee_cfz += eb_fn * eb_n.y();
      block_fx -= eb_fn * eb_n.x();
      block_fz -= eb_fn * eb_n.y();
      block_tau -= eb_r.x() * eb_fn * eb_n.y() - eb_r.y() * eb_fn * eb_n.x();
    }
  }

  // EE disc against the table (normal part).
  double et_fn = 0.0;
  {
    const double pen = cfg_.table_z - (ee_.z - ee_.radius);
    if (pen > 0.0) {
      et_fn = cfg_.k_contact * pen + cfg_.c_contact * (-ee_.vz);
      et_fn = std::max(et_fn, 0.0);
      ee_cfz += et_fn;
    }
  }

  // Friction pass. Predicted accelerations from everything accumulated so
  // far (command, gravity, normal forces).
  {
    const double ee_ax = (ee_fx + ee_cfx) / ee_.mass;
    const double ee_az = (ee_fz + ee_cfz) / ee_.mass;
    const double b_ax = block_fx / block_.mass;
    const double b_az = block_fz / block_.mass;
    const double b_alpha = block_tau / inertia;

    if (ee_block_contact) {
      const double vbx = block_.vx - block_.omega * eb_r.y();
      const double vbz = block_.vz + block_.omega * eb_r.x();
      const double vt = (ee_.vx - vbx) * eb_t.x() + (ee_.vz - vbz) * eb_t.y();
      const double abx = b_ax - b_alpha * eb_r.y();
      const double abz = b_az + b_alpha * eb_r.x();
      const double at = (ee_ax - abx) * eb_t.x() + (ee_az - abz) * eb_t.y();
      const double arm = eb_r.x() * eb_t.y() - eb_r.y() * eb_t.x();
      const double m_eff =
          1.0 / (1.0 / ee_.mass + 1.0 / block_.mass + arm * arm / inertia);
      const double ft =
          friction_force(vt + dt * at, eb_mu, eb_fn, cfg_.stick_velocity, m_eff, dt);
      ee_cfx += ft * eb_t.x();
      ee_cfz += ft * eb_t.y();
      block_fx -= ft * eb_t.x();
      block_fz -= ft * eb_t.y();
      block_tau -= eb_r.x() * ft * eb_t.y() - eb_r.y() * ft * eb_t.x();
    }

    for (int i = 0; i < n_corners; ++i) {
      const Eigen::Vector2d& r = corners[i].r;
      const double vpx = block_.vx - block_.omega * r.y();
      const double apx = b_ax - b_alpha * r.y();
      const double m_eff_corner =
          1.0 / (1.0 / block_.mass + r.y() * r.y() / inertia);
      const double m_eff = m_eff_corner / n_corners;
      const double ft = friction_force(vpx + dt * apx, mu_table, corners[i].fn,
                                       cfg_.stick_velocity, m_eff, dt);
      block_fx += ft;
      block_tau += -r.y() * ft;
      info.ground.push_back({corners[i].corner, corners[i].fn, ft});
    }

    if (et_fn > 0.0) {
      const double ft = friction_force(ee_.vx + dt * ee_ax, cfg_.mu_ee, et_fn,
                                       cfg_.stick_velocity, ee_.mass, dt);
      ee_cfx += ft;
    }
  }

  ee_fx += ee_cfx;
  ee_fz += ee_cfz;

  // Semi-implicit Euler.
  block_.vx += dt * block_fx / block_.mass;
  block_.vz += dt * block_fz / block_.mass;
  block_.omega += dt * block_tau / inertia;
  block_.x += dt * block_.vx;
  block_.z += dt * block_.vz;
  block_.theta += dt * block_.omega;

  ee_.vx += dt * ee_fx / ee_.mass;
  ee_.vz += dt * ee_fz / ee_.mass;
  ee_.x += dt * ee_.vx;
  ee_.z += dt * ee_.vz;

  time_ += dt;

  if (!std::isfinite(block_.x) || !std::isfinite(block_.z) || !std::isfinite(block_.theta) ||
      !std::isfinite(ee_.x) || !std::isfinite(ee_.z)) {
    throw PipelineError("simulation diverged to a non-finite state");
  }

  const double tilt = std::abs(block_.theta);
  if (tilt >= cfg_.success_angle && std::abs(block_.omega) < cfg_.success_rate_max) {
    hold_time_ += dt;
    if (hold_time_ >= cfg_.success_hold) succeeded_ = true;
  } else {
    hold_time_ = 0.0;
  }
  if (tilt > kRecoveryArmAngle) recovery_armed_ = true;
  if (recovery_armed_ && tilt < kRecoveryDropAngle) {
    ++recoveries_;
    recovery_armed_ = false;
  }

  info.ee_contact_force = ForceVec(ee_cfx, 0.0, ee_cfz);
  info.in_contact = info.ee_contact_force.norm() > 0.0;
  last_contact_ = info;
  return info;
}

ForceVec classical_impedance_command(const Pose& x_des, double stiffness, double damping,
                                     const EEState& state) {
  if (stiffness < 0.0 || damping < 0.0) throw ValidationError("impedance gains must be >= 0");
  ForceVec f;
  f.x() = stiffness * (x_des.p.x() - state.x) - damping * state.vx;
  f.y() = 0.0;
  f.z() = stiffness * (x_des.p.z() - state.z) - damping * state.vz;
  return f;
}

}  // namespace forceflow
