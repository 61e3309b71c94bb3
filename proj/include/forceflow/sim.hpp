#pragma once

#include <Eigen/Core>

#include <cmath>
#include <vector>

#include "forceflow/geometry.hpp"

namespace forceflow {

// Planar world: motion in the x-z plane, rotation about y. The block is a
// rectangle on a table at z = table_z; the end effector is a disc driven by
// a commanded task-space force (its gravity is compensated by the plant).

struct SimConfig {
  double dt = 1e-3;               // physics step, seconds
  double gravity = 9.81;          // m/s^2, acts along -z on the block
  double k_contact = 5000.0;      // penalty stiffness, N/m
  double c_contact = 50.0;        // penalty damping, N s/m
  double table_z = 0.0;           // table surface height, m
  double stick_velocity = 2e-3;   // friction regularization knee, m/s
  double mu_ee = 1.2;             // effector pad friction coefficient
  double success_angle = 85.0 * M_PI / 180.0;
  double success_hold = 1.0;      // seconds the tilt must persist
  double success_rate_max = 0.05; // rad/s cap while holding
};

struct BlockState {
  double x = 0.0, z = 0.0, theta = 0.0;
  double vx = 0.0, vz = 0.0, omega = 0.0;
  double half_w = 0.03;
  double half_h = 0.025;
  double mass = 0.16;
  double friction = 0.7;  // block material; pair values combine by sqrt(mu_a*mu_b)

  double inertia() const { return mass * (half_w * half_w + half_h * half_h) / 3.0; }
  Pose pose() const;
};

struct EEState {
  double x = 0.0, z = 0.0;
  double vx = 0.0, vz = 0.0;
  double radius = 0.01;
  double mass = 0.5;

  Pose pose() const;
  Eigen::Vector3d velocity3() const { return {vx, 0.0, vz}; }
};

struct GroundContact {
  Eigen::Vector2d point = Eigen::Vector2d::Zero();  // world (x,z)
  double fn = 0.0;
  double ft = 0.0;
};

struct ContactInfo {
  ForceVec ee_contact_force = ForceVec::Zero();  // net contact force acting on the ee disc
  bool in_contact = false;
  std::vector<GroundContact> ground;             // block corner contacts with the table
};

class PlanarWorld {
 public:
  PlanarWorld() = default;
  PlanarWorld(const SimConfig& cfg, const BlockState& block, const EEState& ee);

  // Advances one physics step under the commanded ee force (y ignored).
  // Throws PipelineError if the state stops being finite.
  ContactInfo step(const ForceVec& ee_command_force);

  // True once |theta| >= success_angle has held for success_hold seconds
  // with |omega| < success_rate_max throughout.
  bool task_success() const { return succeeded_; }

  // Self-recovery bookkeeping: |theta| dropped below drop_angle after having
  // exceeded arm_angle.
  int recovery_count() const { return recoveries_; }

  const SimConfig& config() const { return cfg_; }
  const BlockState& block() const { return block_; }
  const EEState& ee() const { return ee_; }
  BlockState& block() { return block_; }
  EEState& ee() { return ee_; }
  double time() const { return time_; }
  const ContactInfo& last_contact() const { return last_contact_; }

  // Force the ee applies to the scene (the sign convention recorded in
  // demonstrations and observations).
  ForceVec applied_force() const { return -last_contact_.ee_contact_force; }

 private:
  SimConfig cfg_;
  BlockState block_;
  EEState ee_;
  double time_ = 0.0;
  double hold_time_ = 0.0;
  bool succeeded_ = false;
  int recoveries_ = 0;
  bool recovery_armed_ = false;
  ContactInfo last_contact_;

  static constexpr double kRecoveryArmAngle = 45.0 * M_PI / 180.0;
  static constexpr double kRecoveryDropAngle = 10.0 * M_PI / 180.0;
};

// F = K (p_des - p) - D_lin * v, planar components.
ForceVec classical_impedance_command(const Pose& x_des, double stiffness, double damping,
                                     const EEState& state);

}  // namespace forceflow
