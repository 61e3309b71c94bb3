#include "forceflow/datagen.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "forceflow/errors.hpp"

namespace forceflow {

namespace {

// Observation tick: synthesize, corrupt and downsample one cloud.
std::vector<Eigen::Vector3f> sense_cloud(const PlanarWorld& world, const DataGenConfig& cfg,
                                         std::uint64_t seed) {
  const RayCloud rays = synth_pointcloud(cfg.scan, world.block(), world.ee(), world.config().table_z);
  const std::vector<Eigen::Vector3d> noisy = inject_cloud_noise(rays, seed, cfg.noise);
  const std::vector<Eigen::Vector3d> sampled =
      fps_downsample(noisy, cfg.n_points, 0, cfg.crop);
  std::vector<Eigen::Vector3f> out(sampled.size());
  for (std::size_t i = 0; i < sampled.size(); ++i) out[i] = sampled[i].cast<float>();
  return out;
}

}  // namespace

Episode replay_scenario(const SegmentedDemo& seg, const Scenario& scenario,
                        const SimConfig& sim, const BlockState& block_shape,
                        const EEState& ee_shape, const DataGenConfig& cfg) {
  PlanarWorld world = make_world(sim, scenario, block_shape, ee_shape);
  const int substeps = std::max(1, static_cast<int>(std::round(0.01 / sim.dt)));  // 100 Hz control
  const double dtc = substeps * sim.dt;

  const double k_f = cfg.ablate_virtual_target ? 0.0 : cfg.k_f;
  const Pose obj_new = world.block().pose();
  const Pose ee_new = world.ee().pose();

  // Contact plan: relative ee poses and forces in the demo object frame,
  // re-expressed against the live object pose at execution time.
  const Demonstration& dc = seg.contact;
  const int t_c = dc.size();
  const WarpedContact warped_entry = [&] {
    Demonstration first;
    first.dt = dc.dt;
    first.steps.push_back(dc.steps.front());
    return warp_in_contact(first, obj_new);
  }();

  // Free plan via Laplacian editing: end band anchored so the final sample
  // keeps its demo offset from the warped contact entry.
  std::vector<Pose> free_plan;
  {
    std::vector<Pose> free_seg;
    free_seg.reserve(seg.free.size());
    for (const auto& s : seg.free.steps) free_seg.push_back(s.ee);
    if (cfg.ablate_laplacian) {
      free_plan = free_seg;
    } else {
      Pose end_anchor;
      end_anchor.p = warped_entry.poses.front().p +
                     (free_seg.back().p - dc.steps.front().ee.p);
      end_anchor.q = warped_entry.poses.front().q;
      Pose start_anchor;
      start_anchor.p = ee_new.p;
      start_anchor.q = ee_new.q;
      free_plan = warp_free_space(free_seg, start_anchor, end_anchor, cfg.n_cs, cfg.n_ce);
    }
  }
  const int t_f = static_cast<int>(free_plan.size());
  const int plan_len = t_f + t_c;

  // Live object-centric target for contact step j.
  auto contact_target = [&](int j, const Pose& obj_live, Pose* ref, Pose* virt) {
    const DemoStep& s = dc.steps[j];
    const UnitQuaternion rot = obj_live.q * s.obj.q.inverse();
    ref->p = obj_live.p + rot.rotate(s.ee.p - s.obj.p);
    ref->q = rot * s.ee.q;
    const ForceVec f_live = rot.rotate(s.force);
    virt->p = ref->p + k_f * f_live;
    virt->q = ref->q;
  };

  auto plan_target = [&](int idx, const Pose& obj_live, Pose* ref, Pose* virt) {
    idx = std::clamp(idx, 0, plan_len - 1);
    if (idx < t_f) {
      *ref = free_plan[idx];
      *virt = *ref;
    } else {
      contact_target(idx - t_f, obj_live, ref, virt);
    }
  };

  Episode ep;
  ep.dt = dtc;
  ep.n_points = cfg.n_points;
  ep.seed = scenario.seed;

  const int max_ticks = static_cast<int>(cfg.timeout / dtc);
  const int settle_ticks = static_cast<int>(cfg.settle_time / dtc);
  const Eigen::Matrix3d damping_iso =
      damping_matrix({cfg.damping_eigs, Eigen::Vector3d(1.0, 0.0, 0.0)});

  for (int tick = 0; tick < max_ticks; ++tick) {
    const Pose obj_live = world.block().pose();
    Pose ref, virt, ref_next, virt_next;
    plan_target(tick, obj_live, &ref, &virt);
    plan_target(tick + 1, obj_live, &ref_next, &virt_next);

    const ForceVec f_meas = world.applied_force();
    const Eigen::Vector3d f_norm = normalize_force(f_meas, cfg.f_max);
    const double d = compliance_gain_schedule(f_norm.norm(), cfg.schedule);

    const Eigen::Vector3d ee_pos = world.ee().pose().p;
    const Eigen::Vector3d t_raw = ref_next.p - ref.p;
    const Eigen::Vector3d n_raw = virt.p - ee_pos;

    ForceVec f_cmd = ForceVec::Zero();
    Eigen::Vector3d f_x = Eigen::Vector3d::Zero();
    Eigen::Matrix3d damping = damping_iso;
    if (t_raw.norm() >= 1e-9 || n_raw.norm() >= 1e-9) {
      const Eigen::Vector3d u_hat = blend_direction(t_raw, n_raw, d);
      f_x = desired_velocity(u_hat, cfg.speed_k);
      damping = damping_matrix({cfg.damping_eigs, u_hat});
    }
    f_cmd = cfg.use_simple_passive ? simple_passive_command(f_x, damping)
                                   : passive_command(world.ee().velocity3(), f_x, damping);

    if (tick % cfg.policy_stride == 0) {
      ep.clouds.push_back(sense_cloud(world, cfg, derive_seed(scenario.seed, 1000000 + tick)));
    }

    EpisodeStep step;
    step.ee = world.ee().pose();
    step.force_n = f_norm;
    step.ref = ref;
    step.virt = virt;
    step.d = d;
    step.cloud_index = static_cast<int>(ep.clouds.size()) - 1;
    ep.steps.push_back(step);

    for (int s = 0; s < substeps; ++s) world.step(f_cmd);

    if (world.task_success()) break;
    if (tick >= plan_len + settle_ticks) break;
  }

  ep.success = world.task_success();
  return ep;
}

GenResult generate_dataset(const Demonstration& seed_demo, int n,
                           const RandomizationRanges& ranges, const SimConfig& sim,
                           const BlockState& block_shape, const EEState& ee_shape,
                           const DataGenConfig& cfg, std::uint64_t master_seed, int workers) {
  if (n < 1) throw ValidationError("dataset needs at least one scenario");
  const SegmentedDemo seg = split_demo(seed_demo, cfg.eps_force);

  std::vector<Episode> all(n);
  std::atomic<int> next{0};
  workers = std::max(1, workers);
  auto run = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      const Scenario sc = randomize_scenario(derive_seed(master_seed, i), ranges);
      all[i] = replay_scenario(seg, sc, sim, block_shape, ee_shape, cfg);
    }
  };
  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }

  GenResult out;
  out.outcomes.resize(n);
  int ok = 0;
  for (int i = 0; i < n; ++i) {
    out.outcomes[i] = all[i].success ? 1 : 0;
    if (all[i].success) {
      ++ok;
      out.episodes.push_back(std::move(all[i]));
    }
  }
  out.success_rate = static_cast<double>(ok) / n;
  return out;
}

}  // namespace forceflow
