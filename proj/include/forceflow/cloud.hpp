#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "forceflow/sim.hpp"

namespace forceflow {

// Planar lidar: a fan of rays in the x-z plane cast from a fixed scanner
// against the block, the ee disc and the table, keeping first hits.
struct ScanConfig {
  Eigen::Vector2d origin = Eigen::Vector2d(-0.50, 0.30);  // (x, z)
  double angle_start = -65.0 * M_PI / 180.0;              // vs +x axis
  double angle_end = -5.0 * M_PI / 180.0;
  int n_rays = 360;
  double max_range = 1.2;
  double table_x_min = -0.6;
  double table_x_max = 0.6;
};

struct RayHit {
  bool hit = false;
  double depth = 0.0;
  Eigen::Vector3d point = Eigen::Vector3d::Zero();  // (x, 0, z)
};

struct RayCloud {
  std::vector<RayHit> rays;  // ordered by angle

  std::vector<Eigen::Vector3d> points() const;
};

RayCloud synth_pointcloud(const ScanConfig& scan, const BlockState& block, const EEState& ee,
                          double table_z);

// Sensor artifacts: an occlusion shadow (a contiguous angular window dropped
// with probability p_occ), flying pixels interpolated across depth jumps
// between adjacent surviving rays, then per-axis Gaussian jitter.
struct CloudNoiseParams {
  double sigma_p = 0.002;     // m
  double tau_jump = 0.03;     // m, depth discontinuity threshold
  int n_fly = 3;              // interpolated points per jump
  double p_occ = 0.3;
  double occ_frac_min = 0.05; // shadow width as a fraction of the fan
  double occ_frac_max = 0.15;
};

std::vector<Eigen::Vector3d> inject_cloud_noise(const RayCloud& cloud, std::uint64_t seed,
                                                const CloudNoiseParams& params);

struct CropBox {
  Eigen::Vector3d lo =
      Eigen::Vector3d::Constant(-std::numeric_limits<double>::infinity());
  Eigen::Vector3d hi =
      Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());

  bool contains(const Eigen::Vector3d& p) const {
    return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
  }
};

// Greedy farthest-first subsampling to n points, seeded at start_index of the
// (optionally cropped) input; pads by repeating the last selected point when
// fewer than n remain.
std::vector<Eigen::Vector3d> fps_downsample(const std::vector<Eigen::Vector3d>& points, int n,
                                            int start_index = 0,
                                            const std::optional<CropBox>& crop = std::nullopt);

}  // namespace forceflow
