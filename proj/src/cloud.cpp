#include "forceflow/cloud.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <random>

#include "forceflow/errors.hpp"

namespace forceflow {

namespace {

inline Eigen::Vector2d rot2(double theta, const Eigen::Vector2d& v) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

// Slab intersection with the block's local AABB; returns entry distance.
bool ray_box(const Eigen::Vector2d& o, const Eigen::Vector2d& d, double hw, double hh,
             double* s_hit) {
  double t0 = 0.0, t1 = std::numeric_limits<double>::infinity();
  const double mins[2] = {-hw, -hh};
  const double maxs[2] = {hw, hh};
  for (int i = 0; i < 2; ++i) {
    if (std::abs(d[i]) < 1e-14) {
      if (o[i] < mins[i] || o[i] > maxs[i]) return false;
      continue;
    }
    double a = (mins[i] - o[i]) / d[i];
    double b = (maxs[i] - o[i]) / d[i];
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
    if (t0 > t1) return false;
  }
  if (t0 <= 1e-12) return false;  // origin inside or behind
  *s_hit = t0;
  return true;
}

bool ray_circle(const Eigen::Vector2d& o, const Eigen::Vector2d& d, const Eigen::Vector2d& c,
                double r, double* s_hit) {
  const Eigen::Vector2d oc = o - c;
  const double b = oc.dot(d);
  const double disc = b * b - (oc.squaredNorm() - r * r);
  if (disc < 0.0) return false;
  const double s = -b - std::sqrt(disc);
  if (s <= 1e-12) return false;
  *s_hit = s;
  return true;
}

}  // namespace

std::vector<Eigen::Vector3d> RayCloud::points() const {
  std::vector<Eigen::Vector3d> out;
  out.reserve(rays.size());
  for (const auto& r : rays) {
    if (r.hit) out.push_back(r.point);
  }
  return out;
}

RayCloud synth_pointcloud(const ScanConfig& scan, const BlockState& block, const EEState& ee,
                          double table_z) {
  if (scan.n_rays < 1) throw ValidationError("scan needs at least one ray");
  // Scanner must sit outside every solid.
  assert(scan.origin.y() > table_z);
  assert((scan.origin - Eigen::Vector2d(ee.x, ee.z)).norm() > ee.radius);
  {
    const Eigen::Vector2d local =
        rot2(-block.theta, scan.origin - Eigen::Vector2d(block.x, block.z));
    assert(std::abs(local.x()) > block.half_w || std::abs(local.y()) > block.half_h);
  }

  RayCloud out;
  out.rays.resize(scan.n_rays);
  const double dpsi =
      scan.n_rays > 1 ? (scan.angle_end - scan.angle_start) / (scan.n_rays - 1) : 0.0;
  const Eigen::Vector2d block_c(block.x, block.z);
  const Eigen::Vector2d ee_c(ee.x, ee.z);
  for (int i = 0; i < scan.n_rays; ++i) {
    const double psi = scan.angle_start + dpsi * i;
    const Eigen::Vector2d dir(std::cos(psi), std::sin(psi));
    double best = scan.max_range;
    bool hit = false;
    double s;
    // block (in its frame)
    {
      const Eigen::Vector2d o_local = rot2(-block.theta, scan.origin - block_c);
      const Eigen::Vector2d d_local = rot2(-block.theta, dir);
      if (ray_box(o_local, d_local, block.half_w, block.half_h, &s) && s < best) {
        best = s;
        hit = true;
      }
    }
    if (ray_circle(scan.origin, dir, ee_c, ee.radius, &s) && s < best) {
      best = s;
      hit = true;
    }
    // table surface
    if (dir.y() < -1e-14) {
      s = (table_z - scan.origin.y()) / dir.y();
      if (s > 1e-12 && s < best) {
        const double x_hit = scan.origin.x() + s * dir.x();
        if (x_hit >= scan.table_x_min && x_hit <= scan.table_x_max) {
          best = s;
          hit = true;
        }
      }
    }
    RayHit& r = out.rays[i];
    r.hit = hit;
    if (hit) {
      r.depth = best;
      const Eigen::Vector2d p = scan.origin + best * dir;
      r.point = {p.x(), 0.0, p.y()};
    }
  }
  return out;
}

std::vector<Eigen::Vector3d> inject_cloud_noise(const RayCloud& cloud, std::uint64_t seed,
                                                const CloudNoiseParams& params) {
  std::mt19937_64 rng(seed);
  const int n = static_cast<int>(cloud.rays.size());

  // (1) occlusion shadow
  std::vector<char> keep(n, 1);
  if (params.p_occ > 0.0) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    if (u01(rng) < params.p_occ && n > 2) {
      std::uniform_real_distribution<double> ufrac(params.occ_frac_min, params.occ_frac_max);
      const int width = std::max(1, static_cast<int>(std::lround(ufrac(rng) * n)));
      std::uniform_int_distribution<int> ustart(0, std::max(0, n - width));
      const int start = ustart(rng);
      for (int i = start; i < std::min(n, start + width); ++i) keep[i] = 0;
    }
  }

  // (2) flying pixels across depth jumps between adjacent surviving hits
  std::vector<Eigen::Vector3d> pts;
  pts.reserve(cloud.rays.size() + 16);
  int prev = -1;
  for (int i = 0; i < n; ++i) {
    if (!keep[i] || !cloud.rays[i].hit) continue;
    if (prev >= 0 && params.n_fly > 0 &&
        std::abs(cloud.rays[i].depth - cloud.rays[prev].depth) > params.tau_jump) {
      const Eigen::Vector3d& a = cloud.rays[prev].point;
      const Eigen::Vector3d& b = cloud.rays[i].point;
      for (int k = 1; k <= params.n_fly; ++k) {
        const double f = static_cast<double>(k) / (params.n_fly + 1);
        pts.push_back(a + f * (b - a));
      }
    }
    pts.push_back(cloud.rays[i].point);
    prev = i;
  }

  // (3) jitter
  if (params.sigma_p > 0.0) {
    std::normal_distribution<double> gauss(0.0, params.sigma_p);
    for (auto& p : pts) {
      p.x() += gauss(rng);
      p.y() += gauss(rng);
      p.z() += gauss(rng);
    }
  }
  return pts;
}

std::vector<Eigen::Vector3d> fps_downsample(const std::vector<Eigen::Vector3d>& points, int n,
                                            int start_index,
                                            const std::optional<CropBox>& crop) {
  if (n < 1) throw ValidationError("fps target count must be >= 1");
  std::vector<Eigen::Vector3d> in;
  if (crop) {
    in.reserve(points.size());
    for (const auto& p : points) {
      if (crop->contains(p)) in.push_back(p);
    }
  } else {
    in = points;
  }
  if (in.empty()) throw PipelineError("empty point cloud after cropping");
  const int m = static_cast<int>(in.size());
  if (start_index < 0 || start_index >= m) start_index = 0;

  std::vector<Eigen::Vector3d> out;
  out.reserve(n);
  std::vector<double> best_d2(m, std::numeric_limits<double>::infinity());
  int current = start_index;
  for (int pick = 0; pick < n; ++pick) {
    out.push_back(in[current]);
    if (static_cast<int>(out.size()) >= n) break;
    if (pick + 1 >= m) {
      // fewer input points than requested: pad with the last selected
      while (static_cast<int>(out.size()) < n) out.push_back(out.back());
      break;
    }
    double far_d2 = -1.0;
    int far_i = -1;
    for (int i = 0; i < m; ++i) {
      const double d2 = (in[i] - in[current]).squaredNorm();
      if (d2 < best_d2[i]) best_d2[i] = d2;
      if (best_d2[i] > far_d2) {
        far_d2 = best_d2[i];
        far_i = i;
      }
    }
    current = far_i;
  }
  return out;
}

}  // namespace forceflow
