// Development harness for tuning the warped-replay generation path.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "forceflow/datagen.hpp"

using namespace forceflow;

int main(int argc, char** argv) {
  SimConfig sim;
  ExpertConfig ecfg;
  BlockState block_shape;
  EEState ee_shape;
  DataGenConfig gen;

  RandomizationRanges ranges;
  ranges.obj_nominal.p = {0.0, 0.0, 0.0};
  ranges.ee_nominal.p = {-0.18, 0.0, 0.18};
  ranges.ee_delta = {0.15, 0.0, 0.03};
  ranges.obj_delta = {0.15, 0.0, 0.0};
  ranges.mass_lo = 0.10;
  ranges.mass_hi = 0.25;
  ranges.friction_lo = 0.5;
  ranges.friction_hi = 1.0;

  Scenario nominal;
  nominal.obj_pose0 = ranges.obj_nominal;
  nominal.ee_pose0 = ranges.ee_nominal;
  nominal.mass = 0.16;
  nominal.friction = 0.7;

  Demonstration demo = scripted_expert_demo(sim, ecfg, nominal, block_shape, ee_shape);
  std::printf("seed demo: %d steps\n", demo.size());

  const std::string mode = argc > 1 ? argv[1] : "";
  int n = argc > 2 ? std::atoi(argv[2]) : 25;
  if (mode == "novt") gen.ablate_virtual_target = true;
  if (mode == "nolap") gen.ablate_laplacian = true;

  if (mode == "trace") {
    const SegmentedDemo seg = split_demo(demo, gen.eps_force);
    std::printf("T_f=%d T_c=%d\n", seg.free.size(), seg.contact.size());
    Scenario sc = nominal;
    if (argc > 3) sc.mass = std::atof(argv[2]);
    if (argc > 3) sc.friction = std::atof(argv[3]);
    if (argc > 4) sc.obj_pose0.p.x() = std::atof(argv[4]);
    if (argc > 5) sc.ee_pose0.p.x() = std::atof(argv[5]);
    Episode ep = replay_scenario(seg, sc, sim, block_shape, ee_shape, gen);
    std::printf("replay success=%d steps=%zu clouds=%zu\n", ep.success ? 1 : 0, ep.steps.size(),
                ep.clouds.size());
    for (std::size_t k = 0; k < ep.steps.size(); k += 25) {
      const auto& s = ep.steps[k];
      std::printf("t=%5.2f ee=(%+.3f,%.3f) F=(%+5.2f,%+5.2f) d=%4.2f ref=(%+.3f,%.3f) virt_dz=%+6.3f\n",
                  k * ep.dt, s.ee.p.x(), s.ee.p.z(), s.force_n.x() * gen.f_max,
                  s.force_n.z() * gen.f_max, s.d, s.ref.p.x(), s.ref.p.z(),
                  s.virt.p.z() - s.ref.p.z());
    }
    return 0;
  }

  GenResult res = generate_dataset(demo, n, ranges, sim, block_shape, ee_shape, gen, 777, 2);
  std::printf("success rate: %.3f (%d/%d)\n", res.success_rate,
              static_cast<int>(res.episodes.size()), n);
  return 0;
}
