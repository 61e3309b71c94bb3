#pragma once

#include <Eigen/Core>

#include <vector>

#include "forceflow/geometry.hpp"

namespace forceflow {

// Ordered waypoint positions, one row per waypoint.
using WaypointPath = Eigen::Matrix<double, Eigen::Dynamic, 3>;

// Graph Laplacian of a path: unit edge weights, diagonal 1, off-diagonal
// -w_ij / sum_j w_ij over the neighbor set {i-1, i+1}.
struct PathLaplacian {
  Eigen::MatrixXd L;
  int m = 0;
};

PathLaplacian build_path_laplacian(int m);

// Delta = L * r. Interior rows: r_i - (r_{i-1} + r_{i+1}) / 2.
Eigen::MatrixXd laplacian_coordinates(const PathLaplacian& lap, const WaypointPath& path);

struct AnchorConstraint {
  int index = 0;
  Eigen::Vector3d target = Eigen::Vector3d::Zero();
};

// Minimizes ||L r_new - Delta||^2 subject to r_new[index] = target for every
// anchor. Each spatial dimension is solved independently.
WaypointPath edit_path(const WaypointPath& path, const std::vector<AnchorConstraint>& anchors);

// Warps a free-space pose segment: positions via anchored Laplacian editing
// (band of n_cs samples pinned relative to ee_new.p, band of n_ce samples
// pinned relative to target_new.p), orientations via SLERP from ee_new.q to
// target_new.q across the whole segment.
std::vector<Pose> warp_free_space(const std::vector<Pose>& segment,
                                  const Pose& ee_new,
                                  const Pose& target_new,
                                  int n_cs,
                                  int n_ce);

}  // namespace forceflow
