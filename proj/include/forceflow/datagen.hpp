#pragma once

#include <cstdint>
#include <vector>

#include "forceflow/cloud.hpp"
#include "forceflow/control.hpp"
#include "forceflow/demo.hpp"
#include "forceflow/expert.hpp"
#include "forceflow/laplacian.hpp"
#include "forceflow/sim.hpp"

namespace forceflow {

struct DataGenConfig {
  double eps_force = 0.1;      // N, free/contact split threshold
  double k_f = 0.005;          // m/N, virtual-target modulation strength
  int n_cs = 5, n_ce = 5;      // free-space anchor band sizes
  double f_max = 10.0;         // N, force normalization scale
  int policy_stride = 10;      // control ticks per observation tick
  int n_points = 256;          // cloud size after farthest-point sampling
  double speed_k = 0.1;        // m/s desired velocity magnitude
  Eigen::Vector3d damping_eigs = Eigen::Vector3d(40.0, 40.0, 40.0);
  ComplianceSchedule schedule;
  double settle_time = 2.5;    // s past the end of the plan
  double timeout = 20.0;       // s per episode
  bool use_simple_passive = false;
  bool ablate_virtual_target = false;  // drop the k_f force offset
  bool ablate_laplacian = false;       // replay the unwarped free segment
  ScanConfig scan;
  CloudNoiseParams noise;
  CropBox crop;
};

struct EpisodeStep {
  Pose ee;
  Eigen::Vector3d force_n = Eigen::Vector3d::Zero();  // normalized applied force
  Pose ref;
  Pose virt;
  double d = 0.0;
  int cloud_index = 0;
};

struct Episode {
  std::vector<EpisodeStep> steps;                 // control rate
  std::vector<std::vector<Eigen::Vector3f>> clouds;  // observation rate
  double dt = 0.01;
  int n_points = 256;
  std::uint64_t seed = 0;
  bool success = false;
};

struct GenResult {
  std::vector<Episode> episodes;  // successful episodes only
  std::vector<char> outcomes;     // per-scenario success flags
  double success_rate = 0.0;
};

// Builds the warped reference/virtual plan for one scenario and tracks it
// with the passive impedance controller inside a fresh world instance.
Episode replay_scenario(const SegmentedDemo& seg, const Scenario& scenario,
                        const SimConfig& sim, const BlockState& block_shape,
                        const EEState& ee_shape, const DataGenConfig& cfg);

GenResult generate_dataset(const Demonstration& seed_demo, int n,
                           const RandomizationRanges& ranges, const SimConfig& sim,
                           const BlockState& block_shape, const EEState& ee_shape,
                           const DataGenConfig& cfg, std::uint64_t master_seed, int workers);

}  // namespace forceflow
