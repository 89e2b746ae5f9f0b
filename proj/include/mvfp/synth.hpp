#pragma once

#include "mvfp/model.hpp"
#include "mvfp/rng.hpp"

namespace mvfp {

struct SynthConfig {
  int modules = 20;
  int terminals = 8;
  int nets = 30;
  double dim_min = 6;
  double dim_max = 60;
  double terminal_ring = 1.2;  // terminals sit on the boundary of sqrt(A) * this
};

// Random hard-block instance: uniform dimensions, terminals on the chip
// boundary ring, nets mostly two-pin with a tail of larger degrees.
ProblemInstance synth_instance(const SynthConfig& config, Rng& rng);

// Uniform random centers in [0, w] x [0, h], random orientations.
Floorplan random_floorplan(const ProblemInstance& instance, double w, double h, Rng& rng);

// Legal-but-perturbed placement: a random plan is packed by the constraint
// graph, then jittered; `overlap_pulls` modules are additionally dragged
// toward a neighbor to create genuine overlaps.
Floorplan near_legal_floorplan(const ProblemInstance& instance, Rng& rng,
                               double jitter = 0.02, int overlap_pulls = 2);

}  // namespace mvfp
