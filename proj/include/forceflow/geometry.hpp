#pragma once

#include <Eigen/Core>

#include <array>

namespace forceflow {

using ForceVec = Eigen::Vector3d;

// Unit quaternion in (w, x, y, z) storage order, canonicalized so that
// w >= 0 (q and -q are the same rotation; the canonical sign makes
// serialized poses byte-reproducible).
struct UnitQuaternion {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static UnitQuaternion identity() { return {}; }

  // Normalizes and canonicalizes arbitrary components.
  static UnitQuaternion from_components(double w, double x, double y, double z);

  // axis need not be normalized; angle in radians.
  static UnitQuaternion from_axis_angle(const Eigen::Vector3d& axis, double angle);

  static UnitQuaternion rot_x(double angle) { return from_axis_angle({1, 0, 0}, angle); }
  static UnitQuaternion rot_y(double angle) { return from_axis_angle({0, 1, 0}, angle); }
  static UnitQuaternion rot_z(double angle) { return from_axis_angle({0, 0, 1}, angle); }

  double norm() const;
  double dot(const UnitQuaternion& o) const { return w * o.w + x * o.x + y * o.y + z * o.z; }

  UnitQuaternion conjugate() const { return {w, -x, -y, -z}; }
  UnitQuaternion inverse() const { return conjugate(); }

  // Hamilton product, renormalized and canonicalized.
  UnitQuaternion operator*(const UnitQuaternion& o) const;

  Eigen::Vector3d rotate(const Eigen::Vector3d& v) const;
  Eigen::Matrix3d to_matrix() const;

  // Geodesic distance on SO(3) in radians, in [0, pi].
  double angle_to(const UnitQuaternion& o) const;

  bool approx_equal(const UnitQuaternion& o, double tol = 1e-9) const;
};

// Shortest-arc spherical linear interpolation, t in [0, 1]. Falls back to
// normalized linear interpolation when sin(omega) < 1e-8.
UnitQuaternion slerp(const UnitQuaternion& q0, const UnitQuaternion& q1, double t);

// Rigid pose: position in meters plus a unit quaternion.
struct Pose {
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  UnitQuaternion q;

  static Pose identity() { return {}; }

  // Serialization order used by every container: px,py,pz,qw,qx,qy,qz.
  std::array<double, 7> to_array() const;
  static Pose from_array(const std::array<double, 7>& a);
};

Pose compose(const Pose& a, const Pose& b);
Pose inverse(const Pose& a);

// compose(inverse(ref), a): a expressed in ref's frame.
Pose relative_to(const Pose& ref, const Pose& a);

}  // namespace forceflow
