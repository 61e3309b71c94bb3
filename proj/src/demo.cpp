#include "forceflow/demo.hpp"

#include <cmath>
#include <random>

#include "forceflow/errors.hpp"

namespace forceflow {

SegmentedDemo split_demo(const Demonstration& demo, double eps_force) {
  if (demo.empty()) throw ValidationError("cannot split an empty demonstration");
  const int n = demo.size();
  int boundary = -1;
  for (int i = 0; i < n; ++i) {
    if (demo.steps[i].force.norm() > eps_force) {
      boundary = i;
      break;
    }
  }
  if (boundary < 0) throw PipelineError("demonstration has no in-contact step");
  if (boundary < 2) throw PipelineError("degenerate demonstration: contact before step 2");
  int last = boundary;
  for (int i = n - 1; i >= boundary; --i) {
    if (demo.steps[i].force.norm() > eps_force) {
      last = i;
      break;
    }
  }
  SegmentedDemo out;
  out.free.dt = demo.dt;
  out.contact.dt = demo.dt;
  out.free.steps.assign(demo.steps.begin(), demo.steps.begin() + boundary);
  out.contact.steps.assign(demo.steps.begin() + boundary, demo.steps.begin() + last + 1);
  return out;
}

WarpedContact warp_in_contact(const Demonstration& contact, const Pose& obj_new) {
  if (contact.empty()) throw ValidationError("cannot warp an empty contact slice");
  WarpedContact out;
  const int n = contact.size();
  out.poses.resize(n);
  out.forces.resize(n);
  for (int i = 0; i < n; ++i) {
    const DemoStep& s = contact.steps[i];
    const UnitQuaternion rot = obj_new.q * s.obj.q.inverse();
    out.poses[i].p = obj_new.p + rot.rotate(s.ee.p - s.obj.p);
    out.poses[i].q = rot * s.ee.q;
    out.forces[i] = rot.rotate(s.force);
  }
  return out;
}

std::vector<Pose> add_virtual_targets(const std::vector<Pose>& poses,
                                      const std::vector<ForceVec>& forces,
                                      double k_f) {
  if (poses.size() != forces.size())
    throw ValidationError("pose and force trajectories differ in length");
  std::vector<Pose> out(poses.size());
  for (std::size_t i = 0; i < poses.size(); ++i) {
    out[i].p = poses[i].p + k_f * forces[i];
    out[i].q = poses[i].q;
  }
  return out;
}

Eigen::Vector3d normalize_force(const ForceVec& f, double f_max) {
  if (f_max <= 0.0) throw ValidationError("force normalization scale must be positive");
  Eigen::Vector3d out = f / f_max;
  for (int i = 0; i < 3; ++i) out[i] = std::clamp(out[i], -1.0, 1.0);
  return out;
}

namespace {

double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  if (lo > hi) throw ValidationError("inverted randomization range");
  if (lo == hi) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

Scenario randomize_scenario(std::uint64_t rng_seed, const RandomizationRanges& ranges) {
  std::mt19937_64 rng(rng_seed);
  Scenario s;
  s.seed = rng_seed;
  Eigen::Vector3d de, dobj;
  for (int i = 0; i < 3; ++i) de[i] = uniform_in(rng, -ranges.ee_delta[i], ranges.ee_delta[i]);
  for (int i = 0; i < 3; ++i) dobj[i] = uniform_in(rng, -ranges.obj_delta[i], ranges.obj_delta[i]);
  const double yaw = uniform_in(rng, -ranges.obj_yaw, ranges.obj_yaw);
  s.ee_pose0.p = ranges.ee_nominal.p + de;
  s.ee_pose0.q = ranges.ee_nominal.q;
  s.obj_pose0.p = ranges.obj_nominal.p + dobj;
  s.obj_pose0.q = UnitQuaternion::rot_z(yaw) * ranges.obj_nominal.q;
  s.mass = uniform_in(rng, ranges.mass_lo, ranges.mass_hi);
  s.friction = uniform_in(rng, ranges.friction_lo, ranges.friction_hi);
  return s;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 over the combined value
  std::uint64_t x = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

}  // namespace forceflow
