#include "forceflow/expert.hpp"

#include <algorithm>
#include <cmath>

#include "forceflow/errors.hpp"

namespace forceflow {

namespace {

inline Eigen::Vector2d rot2(double theta, const Eigen::Vector2d& v) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

}  // namespace

PlanarWorld make_world(const SimConfig& sim, const Scenario& scenario,
                       const BlockState& block_shape, const EEState& ee_shape) {
  BlockState block = block_shape;
  block.x = scenario.obj_pose0.p.x();
  block.z = sim.table_z + block.half_h + scenario.obj_pose0.p.z();
  block.theta = 0.0;
  block.vx = block.vz = block.omega = 0.0;
  block.mass = scenario.mass;
  block.friction = scenario.friction;
  EEState ee = ee_shape;
  ee.x = scenario.ee_pose0.p.x();
  ee.z = scenario.ee_pose0.p.z();
  ee.vx = ee.vz = 0.0;
  return PlanarWorld(sim, block, ee);
}

Demonstration scripted_expert_demo(const SimConfig& sim, const ExpertConfig& cfg,
                                   const Scenario& scenario, const BlockState& block_shape,
                                   const EEState& ee_shape) {
  bool success = false;
  Demonstration demo = expert_demo_attempt(sim, cfg, scenario, block_shape, ee_shape, &success);
  if (!success) throw PipelineError("scripted expert failed to complete the flip");
  return demo;
}

Demonstration expert_demo_attempt(const SimConfig& sim, const ExpertConfig& cfg,
                                  const Scenario& scenario, const BlockState& block_shape,
                                  const EEState& ee_shape, bool* success) {
  PlanarWorld world = make_world(sim, scenario, block_shape, ee_shape);
  const int substeps = std::max(1, static_cast<int>(std::round(1.0 / (cfg.control_hz * sim.dt))));
  const double dtc = substeps * sim.dt;

  const BlockState& b = world.block();
  // Press setpoint from the tipping statics: drag torque 2h*mu_pair*Fn must
  // beat the gravity moment m*g*w plus the press moment (1-frac)*w*Fn, while
  // the transmitted drag mu_pair*Fn stays inside the table friction budget.
  const double mu_pair = std::sqrt(sim.mu_ee * b.friction);
  const double weight = b.mass * sim.gravity;
  const double tip_denom = 2.0 * b.half_h * mu_pair - (1.0 - cfg.press_frac) * b.half_w;
  double f_set = cfg.press_floor;
  if (tip_denom > 1e-6) {
    f_set = std::max(cfg.press_floor, cfg.press_margin * weight * b.half_w / tip_denom);
  }
  if (mu_pair > b.friction) {
    const double slide_cap = 0.9 * b.friction * weight / (mu_pair - b.friction);
    if (slide_cap > cfg.press_floor) f_set = std::min(f_set, slide_cap);
  }

  // Script landmarks from the initial block pose.
  const double press_x = b.x + cfg.press_frac * b.half_w;
  const double block_top = b.z + b.half_h;
  const double safe_z = block_top + cfg.safe_clearance;
  const Eigen::Vector2d pivot_local(b.half_w, -b.half_h);
  const Eigen::Vector2d contact_local(cfg.press_frac * b.half_w, b.half_h);

  enum class Phase { Transit, Descend, Press, Arc, Retract, Settle };
  Phase phase = Phase::Transit;

  Eigen::Vector2d p_cmd(world.ee().x, world.ee().z);
  Eigen::Vector2d p_cmd_prev = p_cmd;
  std::vector<Eigen::Vector2d> waypoints;
  {
    Eigen::Vector2d start = p_cmd;
    if (start.y() < safe_z) waypoints.push_back({start.x(), safe_z});
    waypoints.push_back({press_x, safe_z});
  }
  std::size_t wp = 0;
  double arc_phase = 0.0;
  double theta = 0.0;
  double theta_prev = 0.0;
  double flip_rate = 0.0;  // control-tick finite difference, immune to contact chatter
  double drag_level = 0.0;
  double sink = 0.0;
  double retract_elapsed = 0.0;
  double settle_elapsed = 0.0;
  Eigen::Vector2d retract_from = p_cmd;
  Eigen::Vector2d retract_dir = Eigen::Vector2d::Zero();

  Demonstration demo;
  demo.dt = dtc;

  const int max_ticks = static_cast<int>(cfg.timeout / dtc);
  for (int tick = 0; tick < max_ticks; ++tick) {
    const double fmag = world.applied_force().norm();
    theta_prev = theta;
    theta = world.block().theta;
    flip_rate = -(theta - theta_prev) / dtc;

    switch (phase) {
      case Phase::Transit: {
        const Eigen::Vector2d target = waypoints[wp];
        const Eigen::Vector2d d = target - p_cmd;
        const double step = cfg.approach_speed * dtc;
        if (d.norm() <= step) {
          p_cmd = target;
          if (++wp >= waypoints.size()) phase = Phase::Descend;
        } else {
          p_cmd += d.normalized() * step;
        }
        break;
      }
      case Phase::Descend: {
        p_cmd.y() -= cfg.descend_speed * dtc;
        if (fmag > cfg.contact_threshold) {
          phase = Phase::Press;
          arc_phase = 0.0;
          sink = (block_top + world.ee().radius) - world.ee().z;
          sink = std::clamp(sink, 0.0, cfg.sink_max);
        }
        break;
      }
      case Phase::Press: {
        sink += cfg.sink_gain * (f_set - fmag) * dtc;
        sink = std::clamp(sink, 0.0, cfg.sink_max);
        p_cmd = Eigen::Vector2d(press_x, block_top + world.ee().radius - sink);
        if (fmag >= 0.8 * f_set) phase = Phase::Arc;
        break;
      }
      case Phase::Arc: {
        // Ride the measured block angle: the position servo only presses
        // along the face normal; rotation is driven by a tangential force
        // feedforward at a fraction of the friction cone.
        const double f_n_meas = std::max(0.0, -world.applied_force().z() * std::cos(theta) +
                                                  world.applied_force().x() * std::sin(theta));
        sink += cfg.sink_gain * (f_set - f_n_meas) * dtc;
        sink = std::clamp(sink, 0.0, cfg.sink_max);
        arc_phase = std::min(theta, 0.0);
        const Eigen::Vector2d pivot_world =
            Eigen::Vector2d(world.block().x, world.block().z) + rot2(theta, pivot_local);
        const Eigen::Vector2d u0 =
            contact_local + Eigen::Vector2d(0.0, world.ee().radius - sink) - pivot_local;
        p_cmd = pivot_world + rot2(arc_phase, u0);
        if (theta <= -cfg.done_angle) {
          phase = Phase::Retract;
          retract_from = p_cmd;
          // back off along the rotated face normal, then up
          retract_dir = rot2(arc_phase, Eigen::Vector2d(0.0, 1.0)) * cfg.retract_dist +
                        Eigen::Vector2d(0.0, cfg.retract_lift);
          retract_elapsed = 0.0;
        }
        break;
      }
      case Phase::Retract: {
        retract_elapsed += dtc;
        const double a = std::min(1.0, retract_elapsed / cfg.retract_time);
        p_cmd = retract_from + a * retract_dir;
        if (a >= 1.0) phase = Phase::Settle;
        break;
      }
      case Phase::Settle: {
        settle_elapsed += dtc;
        break;
      }
    }

    const Eigen::Vector2d v_cmd = (p_cmd - p_cmd_prev) / dtc;
    p_cmd_prev = p_cmd;
    const Eigen::Vector2d e(p_cmd.x() - world.ee().x, p_cmd.y() - world.ee().z);
    const Eigen::Vector2d edot(v_cmd.x() - world.ee().vx, v_cmd.y() - world.ee().vz);
    Eigen::Vector2d f2;
    if (phase == Phase::Arc) {
      const Eigen::Vector2d n_hat = rot2(arc_phase, Eigen::Vector2d(0.0, 1.0));
      const Eigen::Vector2d t_hat = rot2(arc_phase, Eigen::Vector2d(1.0, 0.0));
      const double mu_pair_live = std::sqrt(sim.mu_ee * b.friction);
      const double f_n_meas = std::max(0.0, -world.applied_force().z() * std::cos(theta) +
                                                world.applied_force().x() * std::sin(theta));
      // Integral drag loop on the flip rate, ceilinged by the friction cone.
      const double cone = cfg.drag_frac * mu_pair_live * f_n_meas;
      drag_level += cfg.rate_gain * (cfg.rate_target - flip_rate) * dtc;
      drag_level = std::clamp(drag_level, 0.0, world.last_contact().in_contact ? cone : 0.0);
      const double drag = drag_level;

      // One-sided tangential servo: catch up when the face outruns the ee,
      // never pull back against the feedforward drag.
      const double e_t = std::max(0.0, e.dot(t_hat));
      f2 = n_hat * (cfg.kp * e.dot(n_hat) + cfg.kd * edot.dot(n_hat)) +
           t_hat * (cfg.kp_tan * e_t + cfg.kd_tan * edot.dot(t_hat) + drag);
    } else {
      f2 = cfg.kp * e + cfg.kd * edot;
    }
    ForceVec f_cmd(f2.x(), 0.0, f2.y());
    const double fn = f_cmd.norm();
    if (fn > cfg.force_cap) f_cmd *= cfg.force_cap / fn;

    for (int s = 0; s < substeps; ++s) world.step(f_cmd);

    DemoStep rec;
    rec.t = world.time();
    rec.ee = world.ee().pose();
    rec.force = world.applied_force();
    rec.obj = world.block().pose();
    demo.steps.push_back(rec);

    if (phase == Phase::Settle && (world.task_success() || settle_elapsed > cfg.settle_time)) {
      break;
    }
  }

  if (success) *success = world.task_success();
  return demo;
}

}  // namespace forceflow
