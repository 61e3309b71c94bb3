#include "forceflow/geometry.hpp"

#include <Eigen/Geometry>

#include <cmath>

#include "forceflow/errors.hpp"

namespace forceflow {

namespace {

UnitQuaternion canonicalize(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw ValidationError("quaternion has zero or non-finite norm");
  }
  double s = 1.0 / n;
  if (w < 0.0) s = -s;
  return {w * s, x * s, y * s, z * s};
}

}  // namespace

UnitQuaternion UnitQuaternion::from_components(double w, double x, double y, double z) {
  return canonicalize(w, x, y, z);
}

UnitQuaternion UnitQuaternion::from_axis_angle(const Eigen::Vector3d& axis, double angle) {
  const double n = axis.norm();
  if (n < 1e-15) return identity();
  const Eigen::Vector3d u = axis / n;
  const double h = 0.5 * angle;
  const double s = std::sin(h);
  return canonicalize(std::cos(h), u.x() * s, u.y() * s, u.z() * s);
}

double UnitQuaternion::norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

UnitQuaternion UnitQuaternion::operator*(const UnitQuaternion& o) const {
  return canonicalize(w * o.w - x * o.x - y * o.y - z * o.z,
                      w * o.x + x * o.w + y * o.z - z * o.y,
                      w * o.y - x * o.z + y * o.w + z * o.x,
                      w * o.z + x * o.y - y * o.x + z * o.w);
}

Eigen::Vector3d UnitQuaternion::rotate(const Eigen::Vector3d& v) const {
  // v' = v + 2 u x (u x v + w v), u = (x,y,z)
  const Eigen::Vector3d u(x, y, z);
  const Eigen::Vector3d t = 2.0 * u.cross(v);
  return v + w * t + u.cross(t);
}

Eigen::Matrix3d UnitQuaternion::to_matrix() const {
  Eigen::Matrix3d m;
  const double xx = x * x, yy = y * y, zz = z * z;
  const double xy = x * y, xz = x * z, yz = y * z;
  const double wx = w * x, wy = w * y, wz = w * z;
  m << 1 - 2 * (yy + zz), 2 * (xy - wz), 2 * (xz + wy),
       2 * (xy + wz), 1 - 2 * (xx + zz), 2 * (yz - wx),
       2 * (xz - wy), 2 * (yz + wx), 1 - 2 * (xx + yy);
  return m;
}

double UnitQuaternion::angle_to(const UnitQuaternion& o) const {
  const double d = std::min(1.0, std::abs(dot(o)));
  return 2.0 * std::acos(d);
}

bool UnitQuaternion::approx_equal(const UnitQuaternion& o, double tol) const {
  return angle_to(o) <= tol;
}

UnitQuaternion slerp(const UnitQuaternion& q0, const UnitQuaternion& q1, double t) {
  if (t < 0.0 || t > 1.0) throw ValidationError("slerp parameter outside [0,1]");
  double d = q0.dot(q1);
  // Shortest arc: flip q1 when the arc through -q1 is shorter.
  double sign = 1.0;
  if (d < 0.0) {
    d = -d;
    sign = -1.0;
  }
  d = std::min(d, 1.0);
  const double omega = std::acos(d);
  const double so = std::sin(omega);
  double c0, c1;
  if (so < 1e-8) {
    // Nearly parallel: linear blend, renormalized below.
    c0 = 1.0 - t;
    c1 = t;
  } else {
    c0 = std::sin((1.0 - t) * omega) / so;
    c1 = std::sin(t * omega) / so;
  }
  c1 *= sign;
  return UnitQuaternion::from_components(c0 * q0.w + c1 * q1.w,
                                         c0 * q0.x + c1 * q1.x,
                                         c0 * q0.y + c1 * q1.y,
                                         c0 * q0.z + c1 * q1.z);
}

std::array<double, 7> Pose::to_array() const {
  return {p.x(), p.y(), p.z(), q.w, q.x, q.y, q.z};
}

Pose Pose::from_array(const std::array<double, 7>& a) {
  Pose out;
  out.p = {a[0], a[1], a[2]};
  out.q = UnitQuaternion::from_components(a[3], a[4], a[5], a[6]);
  return out;
}

Pose compose(const Pose& a, const Pose& b) {
  Pose out;
  out.p = a.p + a.q.rotate(b.p);
  out.q = a.q * b.q;
  return out;
}

Pose inverse(const Pose& a) {
  Pose out;
  out.q = a.q.conjugate();
  out.p = -out.q.rotate(a.p);
  return out;
}

Pose relative_to(const Pose& ref, const Pose& a) { return compose(inverse(ref), a); }

}  // namespace forceflow
