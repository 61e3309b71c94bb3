#pragma once

#include <cstdint>
#include <vector>

#include "forceflow/geometry.hpp"

namespace forceflow {

struct DemoStep {
  double t = 0.0;
  Pose ee;
  ForceVec force = ForceVec::Zero();  // force the ee applies to the scene
  Pose obj;
};

struct Demonstration {
  std::vector<DemoStep> steps;
  double dt = 0.01;

  bool empty() const { return steps.empty(); }
  int size() const { return static_cast<int>(steps.size()); }
};

struct SegmentedDemo {
  Demonstration free;     // length T_f, ||F|| <= eps
  Demonstration contact;  // length T_c, starts at the first ||F|| > eps
};

// Splits at the first step whose force magnitude exceeds eps_force. Steps
// after the last in-contact step (e.g. a retract tail) are dropped.
SegmentedDemo split_demo(const Demonstration& demo, double eps_force);

// Object-centric warp of an in-contact slice to a new initial object pose:
//   p_new(i) = p_new_obj + R(q_new_obj) R(Q_obj(i))^-1 (P_ee(i) - P_obj(i))
//   q_new(i) = q_new_obj * Q_obj(i)^-1 * Q_ee(i)
//   F_new(i) = R(q_new_obj) R(Q_obj(i))^-1 F(i)
struct WarpedContact {
  std::vector<Pose> poses;
  std::vector<ForceVec> forces;
};
WarpedContact warp_in_contact(const Demonstration& contact, const Pose& obj_new);

// Virtual targets: reference position offset along the recorded force by
// k_f meters per newton; orientation carried over unchanged.
std::vector<Pose> add_virtual_targets(const std::vector<Pose>& poses,
                                      const std::vector<ForceVec>& forces,
                                      double k_f);

// F / f_max with components clipped to [-1, 1].
Eigen::Vector3d normalize_force(const ForceVec& f, double f_max);

struct Scenario {
  Pose obj_pose0;
  Pose ee_pose0;
  double mass = 0.16;
  double friction = 0.7;
  std::uint64_t seed = 0;
};

struct RandomizationRanges {
  Pose ee_nominal;
  Pose obj_nominal;
  Eigen::Vector3d ee_delta = Eigen::Vector3d(0.15, 0.05, 0.03);   // +/- meters
  Eigen::Vector3d obj_delta = Eigen::Vector3d(0.15, 0.05, 0.0);   // +/- meters
  double obj_yaw = 0.0;                                           // +/- radians about z
  double mass_lo = 0.1, mass_hi = 0.8;                            // kg
  double friction_lo = 0.2, friction_hi = 1.0;
};

Scenario randomize_scenario(std::uint64_t rng_seed, const RandomizationRanges& ranges);

// Stable per-item seed derivation for parallel generation.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace forceflow
