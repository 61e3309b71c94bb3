#pragma once

#include "forceflow/demo.hpp"
#include "forceflow/sim.hpp"

namespace forceflow {

// Scripted demonstrator for the flip: approach above the press point, settle
// onto the top face near the pivot edge, then drag along a circular arc about
// that edge (phase slaved to the measured block angle) while an integral
// force loop holds the press force near its setpoint.
struct ExpertConfig {
  double control_hz = 100.0;
  double approach_speed = 0.07;    // m/s, transit legs
  double descend_speed = 0.03;     // m/s, final descent
  double safe_clearance = 0.08;    // transit altitude above the block top, m
  double press_frac = 0.5;         // contact x in units of half_w (toward pivot)
  double done_angle = 87.0 * M_PI / 180.0;
  double kp = 600.0;               // PD position gain, N/m (normal dir during arc)
  double kd = 50.0;                // PD velocity gain, N s/m
  double kp_tan = 80.0;            // weak tangential centering during the arc
  double kd_tan = 30.0;
  double drag_frac = 0.95;         // drag ceiling as a cone fraction
  double rate_target = 0.7;        // rad/s flip rate the drag loop drives toward
  double rate_gain = 25.0;         // N per (rad/s) integrated drag adjustment
  double force_cap = 25.0;         // command clamp, N
  double press_margin = 3.2;       // press setpoint over the tipping minimum
  double press_floor = 1.2;        // N
  double sink_gain = 2e-3;         // m per (N s), force-loop integrator
  double sink_max = 0.012;         // m
  double contact_threshold = 0.5;  // N, descend -> arc switch
  double retract_dist = 0.05;     // m, along the final face normal
  double retract_lift = 0.03;     // m, extra upward component
  double retract_time = 0.8;       // s
  double settle_time = 2.5;        // s to wait for the success check
  double timeout = 18.0;           // s
};

// Runs the script in a fresh world built from (sim, scenario). Throws
// PipelineError when the script does not reach task success.
Demonstration scripted_expert_demo(const SimConfig& sim, const ExpertConfig& cfg,
                                   const Scenario& scenario, const BlockState& block_shape,
                                   const EEState& ee_shape);

// Same script without the success gate; records the attempt either way.
Demonstration expert_demo_attempt(const SimConfig& sim, const ExpertConfig& cfg,
                                  const Scenario& scenario, const BlockState& block_shape,
                                  const EEState& ee_shape, bool* success);

// Places block and ee according to the scenario (block resting on the table).
PlanarWorld make_world(const SimConfig& sim, const Scenario& scenario,
                       const BlockState& block_shape, const EEState& ee_shape);

}  // namespace forceflow
