// Development harness for tuning the simulator and the scripted expert.
#include <string>
#include <cmath>
#include <algorithm>
#include <cstdio>

#include "forceflow/expert.hpp"

using namespace forceflow;

int main(int argc, char** argv) {
  SimConfig sim;
  ExpertConfig cfg;
  BlockState block_shape;
  EEState ee_shape;

  RandomizationRanges ranges;
  ranges.obj_nominal.p = {0.0, 0.0, 0.0};
  ranges.ee_nominal.p = {-0.18, 0.0, 0.18};
  ranges.ee_delta = {0.15, 0.0, 0.03};
  ranges.obj_delta = {0.15, 0.0, 0.0};
  ranges.mass_lo = 0.10;
  ranges.mass_hi = 0.25;
  ranges.friction_lo = 0.5;
  ranges.friction_hi = 1.0;

  if (argc > 1 && std::string(argv[1]) == std::string("trace")) {
    Scenario sc;
    sc.obj_pose0 = ranges.obj_nominal;
    sc.ee_pose0 = ranges.ee_nominal;
    sc.mass = argc > 2 ? std::atof(argv[2]) : 0.16;
    sc.friction = argc > 3 ? std::atof(argv[3]) : 0.7;
    if (argc > 4) sc.obj_pose0.p.x() = std::atof(argv[4]);
    if (argc > 6) { sc.ee_pose0.p.x() = std::atof(argv[5]); sc.ee_pose0.p.z() = std::atof(argv[6]); }
    PlanarWorld world = make_world(sim, sc, block_shape, ee_shape);
    std::printf("block: x=%.3f z=%.4f theta=%.3f  ee: x=%.3f z=%.3f\n", world.block().x,
                world.block().z, world.block().theta, world.ee().x, world.ee().z);
    bool success = false;
    Demonstration demo = expert_demo_attempt(sim, cfg, sc, block_shape, ee_shape, &success);
    std::printf("success=%d, %d steps\n", success ? 1 : 0, demo.size());
    for (int k = 0; k < demo.size(); k += 10) {
      const auto& s = demo.steps[k];
      const double theta = -2.0 * std::asin(std::clamp(s.obj.q.y, -1.0, 1.0));
      std::printf(
          "t=%5.2f ee=(%+.3f,%.3f) F=(%+5.2f,%+5.2f)|%5.2f| obj=(%+.3f,%.4f) th=%+6.1f\n",
          s.t, s.ee.p.x(), s.ee.p.z(), s.force.x(), s.force.z(), s.force.norm(), s.obj.p.x(),
          s.obj.p.z(), theta * 180 / M_PI);
    }
    return 0;
  }

  int n = argc > 1 ? std::atoi(argv[1]) : 1;
  int ok = 0;
  for (int i = 0; i < n; ++i) {
    Scenario sc;
    if (i == 0) {
      sc.obj_pose0 = ranges.obj_nominal;
      sc.ee_pose0 = ranges.ee_nominal;
      sc.mass = 0.16;
      sc.friction = 0.7;
    } else {
      sc = randomize_scenario(derive_seed(1234, i), ranges);
    }
    try {
      Demonstration demo = scripted_expert_demo(sim, cfg, sc, block_shape, ee_shape);
      ++ok;
      double fmax = 0.0;
      int t_contact = -1;
      for (int k = 0; k < demo.size(); ++k) {
        fmax = std::max(fmax, demo.steps[k].force.norm());
        if (t_contact < 0 && demo.steps[k].force.norm() > 0.1) t_contact = k;
      }
      std::printf(
          "[%3d] ok  steps=%4d  T_f=%4d  fmax=%5.2f  mass=%.3f mu=%.2f obj_x=%+.3f ee=(%+.3f,%.3f)\n",
          i, demo.size(), t_contact, fmax, sc.mass, sc.friction, sc.obj_pose0.p.x(),
          sc.ee_pose0.p.x(), sc.ee_pose0.p.z());
    } catch (const std::exception& e) {
      std::printf("[%3d] FAIL (%s) mass=%.3f mu=%.2f obj_x=%+.3f ee=(%+.3f,%.3f)\n", i, e.what(),
                  sc.mass, sc.friction, sc.obj_pose0.p.x(), sc.ee_pose0.p.x(), sc.ee_pose0.p.z());
    }
  }
  std::printf("expert success: %d/%d\n", ok, n);
  return 0;
}
