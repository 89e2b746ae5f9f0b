#include "mvfp/synth.hpp"

#include <algorithm>
#include <cmath>

#include "mvfp/legalize.hpp"

namespace mvfp {

ProblemInstance synth_instance(const SynthConfig& config, Rng& rng) {
  std::vector<Module> modules(config.modules);
  double area = 0;
  for (int i = 0; i < config.modules; ++i) {
    modules[i].id = i;
    modules[i].name = "sb" + std::to_string(i);
    modules[i].width = rng.uniform(config.dim_min, config.dim_max);
    modules[i].height = rng.uniform(config.dim_min, config.dim_max);
    area += modules[i].width * modules[i].height;
  }

  const double ring = std::sqrt(area) * config.terminal_ring;
  std::vector<Pad> pads(config.terminals);
  for (int i = 0; i < config.terminals; ++i) {
    pads[i].id = i;
    pads[i].name = "p" + std::to_string(i);
    const double t = rng.uniform(0, 4);
    const double along = ring * (t - std::floor(t));
    switch (static_cast<int>(t)) {
      case 0: pads[i].x = along; pads[i].y = 0; break;
      case 1: pads[i].x = ring; pads[i].y = along; break;
      case 2: pads[i].x = ring - along; pads[i].y = ring; break;
      default: pads[i].x = 0; pads[i].y = ring - along; break;
    }
  }

  std::vector<Net> nets(config.nets);
  const int endpoints = config.modules + config.terminals;
  for (Net& net : nets) {
    const double draw = rng.uniform();
    const int degree = draw < 0.92 ? 2 : (draw < 0.98 ? 3 : rng.uniform_int(4, 5));
    while (static_cast<int>(net.pins.size()) < std::min(degree, endpoints)) {
      const int pick = rng.uniform_int(0, endpoints - 1);
      PinRef pin;
      if (pick < config.modules)
        pin = {PinRef::Kind::module, pick, 0, 0};
      else
        pin = {PinRef::Kind::pad, pick - config.modules, 0, 0};
      bool seen = false;
      for (const PinRef& p : net.pins)
        if (p.kind == pin.kind && p.index == pin.index) seen = true;
      if (!seen) net.pins.push_back(pin);
    }
  }
  return ProblemInstance(std::move(modules), std::move(pads), std::move(nets));
}

Floorplan random_floorplan(const ProblemInstance& instance, double w, double h, Rng& rng) {
  const std::size_t n = instance.module_count();
  Floorplan plan;
  plan.x.resize(n);
  plan.y.resize(n);
  plan.r.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    plan.x[i] = rng.uniform(0, w);
    plan.y[i] = rng.uniform(0, h);
    plan.r[i] = Orientation(rng.uniform_int(0, 3));
  }
  return plan;
}

Floorplan near_legal_floorplan(const ProblemInstance& instance, Rng& rng, double jitter,
                               int overlap_pulls) {
  const std::size_t n = instance.module_count();
  const double side = std::sqrt(2.0 * instance.total_module_area());
  Floorplan plan = random_floorplan(instance, side, side, rng);
  plan = legalize_graph(instance, plan);

  for (std::size_t i = 0; i < n; ++i) {
    const Module& m = instance.modules()[i];
    const double amp = jitter * std::min(m.width, m.height);
    plan.x[i] += rng.uniform(-amp, amp);
    plan.y[i] += rng.uniform(-amp, amp);
  }
  for (int pull = 0; pull < overlap_pulls && n > 1; ++pull) {
    const int i = rng.uniform_int(0, static_cast<int>(n) - 1);
    int j = rng.uniform_int(0, static_cast<int>(n) - 2);
    if (j >= i) ++j;
    plan.x[i] += 0.3 * (plan.x[j] - plan.x[i]);
    plan.y[i] += 0.3 * (plan.y[j] - plan.y[i]);
  }
  return plan;
}

}  // namespace mvfp
