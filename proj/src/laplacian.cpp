#include "forceflow/laplacian.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cassert>
#include <set>

#include "forceflow/errors.hpp"

namespace forceflow {

PathLaplacian build_path_laplacian(int m) {
  if (m < 2) throw ValidationError("path Laplacian needs at least 2 waypoints");
  PathLaplacian lap;
  lap.m = m;
  lap.L = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    lap.L(i, i) = 1.0;
    const double degree = (i == 0 || i == m - 1) ? 1.0 : 2.0;
    if (i > 0) lap.L(i, i - 1) = -1.0 / degree;
    if (i < m - 1) lap.L(i, i + 1) = -1.0 / degree;
  }
  return lap;
}

Eigen::MatrixXd laplacian_coordinates(const PathLaplacian& lap, const WaypointPath& path) {
  if (path.rows() != lap.m) throw ValidationError("Laplacian size does not match path length");
  return lap.L * path;
}

WaypointPath edit_path(const WaypointPath& path, const std::vector<AnchorConstraint>& anchors) {
  const int m = static_cast<int>(path.rows());
  if (m < 3) throw ValidationError("path editing needs at least 3 waypoints");
  if (anchors.size() < 2) throw ValidationError("path editing needs at least 2 anchors");
  std::set<int> seen;
  for (const auto& a : anchors) {
    if (a.index < 0 || a.index >= m) throw ValidationError("anchor index out of range");
    if (!seen.insert(a.index).second) throw ValidationError("duplicate anchor index");
  }

  const PathLaplacian lap = build_path_laplacian(m);
  const Eigen::MatrixXd delta = laplacian_coordinates(lap, path);

  std::vector<int> free_idx;
  free_idx.reserve(m);
  for (int i = 0; i < m; ++i) {
    if (!seen.count(i)) free_idx.push_back(i);
  }

  WaypointPath out = path;
  for (const auto& a : anchors) out.row(a.index) = a.target.transpose();
  if (free_idx.empty()) return out;

  const int nf = static_cast<int>(free_idx.size());
  Eigen::MatrixXd Lf(m, nf);
  for (int j = 0; j < nf; ++j) Lf.col(j) = lap.L.col(free_idx[j]);

  // rhs = Delta - L_anchored * targets, per spatial dimension.
  Eigen::MatrixXd rhs = delta;
  for (const auto& a : anchors) {
    rhs -= lap.L.col(a.index) * out.row(a.index);
  }

  // L restricted to free columns has full column rank on a connected path
  // with at least one anchor.
  Eigen::LDLT<Eigen::MatrixXd> solver(Lf.transpose() * Lf);
  assert(solver.info() == Eigen::Success);
  const Eigen::MatrixXd xf = solver.solve(Lf.transpose() * rhs);
  for (int j = 0; j < nf; ++j) out.row(free_idx[j]) = xf.row(j);
  return out;
}

std::vector<Pose> warp_free_space(const std::vector<Pose>& segment,
                                  const Pose& ee_new,
                                  const Pose& target_new,
                                  int n_cs,
                                  int n_ce) {
  const int n = static_cast<int>(segment.size());
  if (n < 3) throw ValidationError("free-space segment too short to warp");
  if (n_cs < 1 || n_ce < 1) throw ValidationError("anchor bands need at least one sample");
  if (n_cs + n_ce >= n) throw ValidationError("anchor bands overlap");

  WaypointPath path(n, 3);
  for (int i = 0; i < n; ++i) path.row(i) = segment[i].p.transpose();

  const Eigen::Vector3d p0 = segment.front().p;
  const Eigen::Vector3d pT = segment.back().p;
  std::vector<AnchorConstraint> anchors;
  anchors.reserve(n_cs + n_ce);
  for (int t = 0; t < n_cs; ++t) {
    anchors.push_back({t, ee_new.p + (segment[t].p - p0)});
  }
  for (int t = n - n_ce; t < n; ++t) {
    anchors.push_back({t, target_new.p + (segment[t].p - pT)});
  }
  const WaypointPath edited = edit_path(path, anchors);

  std::vector<Pose> out(n);
  const double denom = static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) {
    out[i].p = edited.row(i).transpose();
    out[i].q = slerp(ee_new.q, target_new.q, static_cast<double>(i) / denom);
  }
  return out;
}

}  // namespace forceflow
