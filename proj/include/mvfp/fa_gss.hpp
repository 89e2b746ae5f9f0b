#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mvfp/ffa_cd.hpp"

namespace mvfp {

struct GssConfig {
  double epsilon = 0.002;       // bracket width at termination
  double aspect_ratio = 1.0;    // R of every trial outline
  double gamma_max_init = 0.15; // first feasibility probe; doubles until feasible
  double gamma_cap = 2.0;       // give up past this ratio
  int trial_generations = 60;   // inner-loop budget per trial
  bool warm_start = false;      // carry (Q, P, X, Y) across trials
  FfaConfig ffa;                // inner-loop template; outline filled per trial
};

struct GssTrial {
  int index = 0;
  double gamma = 0;
  bool feasible = false;
  double hpwl = 0;
  double area = 0;  // bounding-box area of the trial's best plan
  int generations = 0;
  std::optional<Floorplan> witness;  // legal plan backing a feasible verdict
};

struct GssResult {
  bool found = false;  // a legal plan exists for some probed ratio
  Floorplan plan;      // witness of the final gamma_max
  double gamma_min = 0;
  double gamma_max = 0;
  double achieved_whitespace = 0;  // (S - A) / A of the returned plan
  double hpwl = 0;
  double area = 0;
  std::vector<GssTrial> trials;
  double seconds = 0;
};

// gamma_m = 0.618 (gamma_max - gamma_min) + gamma_min
inline double golden_trial(double gamma_min, double gamma_max) {
  return 0.618 * (gamma_max - gamma_min) + gamma_min;
}

// 0.5 W / W_min + 0.5 S / S_min; throws on non-positive minima.
double cost_function(double wirelength, double min_wirelength, double area, double min_area);

struct BracketOutcome {
  bool found = false;
  double gamma_min = 0;
  double gamma_max = 0;
  int trials = 0;
};

// The bracketing skeleton, separated from the solver so the contraction
// arithmetic is testable with scripted feasibility predicates. Starts from
// [0, gamma_init], doubling gamma_init (up to cap) until feasible, then
// contracts at the golden trial point until the width drops below epsilon.
BracketOutcome golden_section_bracket(double gamma_init, double cap, double epsilon,
                                      const std::function<bool(double gamma, int trial)>& feasible);

// Outline-free wirelength+area minimization (fixed-outline runs at shrinking
// whitespace ratios). Every feasible verdict is backed by a stored legal
// plan; the result carries the witness of the final bracket.
GssResult fa_gss(const ProblemInstance& instance, const GssConfig& config, std::uint64_t seed);

}  // namespace mvfp
