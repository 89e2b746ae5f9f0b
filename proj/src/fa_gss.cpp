#include "mvfp/fa_gss.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace mvfp {

namespace {

constexpr std::uint64_t kTagTrial = 0x201;

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace

double cost_function(double wirelength, double min_wirelength, double area, double min_area) {
  if (!(min_wirelength > 0) || !(min_area > 0))
    throw std::invalid_argument("cost needs positive reference minima");
  return 0.5 * wirelength / min_wirelength + 0.5 * area / min_area;
}

BracketOutcome golden_section_bracket(double gamma_init, double cap, double epsilon,
                                      const std::function<bool(double, int)>& feasible) {
  if (!(gamma_init > 0) || !(epsilon > 0) || !(cap >= gamma_init))
    throw std::invalid_argument("bad bracket parameters");

  BracketOutcome out;
  int trial = 0;

  // establish a feasible upper end
  double gamma_max = gamma_init;
  for (;;) {
    if (feasible(gamma_max, trial++)) {
      out.found = true;
      break;
    }
    if (gamma_max >= cap) {
      out.gamma_min = 0;
      out.gamma_max = gamma_max;
      out.trials = trial;
      return out;  // found stays false: infeasible even at the cap
    }
    gamma_max = std::min(2 * gamma_max, cap);
  }

  double gamma_min = 0;
  while (gamma_max - gamma_min >= epsilon) {
    const double gamma_m = golden_trial(gamma_min, gamma_max);
    if (feasible(gamma_m, trial++))
      gamma_max = gamma_m;
    else
      gamma_min = gamma_m;
  }
  out.gamma_min = gamma_min;
  out.gamma_max = gamma_max;
  out.trials = trial;
  return out;
}

GssResult fa_gss(const ProblemInstance& instance, const GssConfig& config, std::uint64_t seed) {
  if (!(config.aspect_ratio > 0)) throw std::invalid_argument("fa_gss needs a positive ratio");
  const double area = instance.total_module_area();
  const double start = now_seconds();

  GssResult result;
  std::optional<FfaWarmState> carried;

  auto run_trial = [&](double gamma, int index) {
    FfaConfig fc = config.ffa;
    fc.outline = outline_from_ratio(area, config.aspect_ratio, gamma);
    fc.max_generations = config.trial_generations;
    if (fc.csa_iterations_later <= 0) fc.csa_iterations_later = 35;
    if (config.warm_start && carried) fc.csa_iterations = fc.csa_iterations_later;

    const std::uint64_t trial_seed =
        splitmix64(splitmix64(seed ^ kTagTrial) + static_cast<std::uint64_t>(index));
    FfaDriver driver(instance, fc, trial_seed);
    if (config.warm_start && carried)
      driver.initialize(*carried);
    else
      driver.initialize();
    while (!driver.done()) driver.step();
    if (config.warm_start) carried = driver.export_state();

    const FfaResult inner = driver.result();
    GssTrial trial;
    trial.index = index;
    trial.gamma = gamma;
    trial.feasible = inner.legal;
    trial.hpwl = inner.hpwl;
    trial.area = bounding_area(instance, inner.plan);
    trial.generations = inner.generations;
    if (inner.legal) trial.witness = inner.plan;
    result.trials.push_back(std::move(trial));

    if (inner.legal) {
      // this gamma becomes the new gamma_max; keep its witness
      result.plan = inner.plan;
      result.hpwl = inner.hpwl;
      result.found = true;
    }
    return inner.legal;
  };

  const BracketOutcome bracket =
      golden_section_bracket(config.gamma_max_init, config.gamma_cap, config.epsilon, run_trial);
  result.gamma_min = bracket.gamma_min;
  result.gamma_max = bracket.gamma_max;
  if (result.found) {
    result.area = bounding_area(instance, result.plan);
    result.achieved_whitespace = (result.area - area) / area;
  }
  result.seconds = now_seconds() - start;
  return result;
}

}  // namespace mvfp
