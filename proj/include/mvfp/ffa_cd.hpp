#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "mvfp/csa.hpp"
#include "mvfp/dea_ppm.hpp"
#include "mvfp/model.hpp"
#include "mvfp/objective.hpp"
#include "mvfp/rng.hpp"

namespace mvfp {

struct FfaConfig {
  OutlineSpec outline;
  PenaltyWeights weights;          // starting weights; overlap/outline escalate during the run
  int csa_iterations = 50;         // k_max of the global phase
  int csa_iterations_later = 0;    // k_max from the second generation on (0: same)
  int legal_csa_iterations = 1000; // budget of the legalization phase
  double legal_step_floor = 10;    // its step control is max(s/2, this floor)
  double generation_step_decay = 0.95;
  double initial_step = 0;         // 0: max(W*, H*) / 2
  double min_step = 0;             // 0: 5% of the larger outline extent
  double overlap_ratio_tol = 0.1;    // delta_1 on D / A
  double outline_ratio_tol = 1e-4;   // delta_2 on B / (W* + H*)
  int max_generations = 500;
  int stall_reinit = 5;            // generations without a better f before re-sampling X, Y
  int hpwl_stall_stop = 10;        // generations without a better legal HPWL before stopping
  CsaConfig csa;                   // step decay / stall of the inner solver
  DeaParams dea;
  int threads = 0;                 // 0: MVFP_THREADS or hardware
  bool record_history = false;
};

struct GenerationStats {
  int generation = 0;
  double best_f = 0;            // running minimum
  double generation_best_f = 0; // this generation only
  double best_legal_hpwl = 0;   // +inf until a legal plan exists
  double overlap_weight = 0;
  double outline_weight = 0;
  double step_control = 0;
};

struct FfaResult {
  Floorplan plan;
  bool legal = false;
  bool outline_fits = true;  // false when some module cannot fit under any orientation
  double hpwl = 0;
  double overlap_area = 0;
  double outline_violation = 0;
  double best_f = 0;
  int generations = 0;
  double seconds = 0;
  std::vector<GenerationStats> history;
};

struct CoordinatePopulations {
  std::vector<std::vector<double>> x;  // np rows of n coordinates
  std::vector<std::vector<double>> y;
};

// Latin hypercube start: per module and axis the np samples land in np
// distinct strata of [margin, extent - margin] with margin half the module's
// larger dimension; modules too wide for the outline sit at the center.
CoordinatePopulations latin_hypercube_population(const ProblemInstance& instance,
                                                 const OutlineSpec& outline, int np, Rng& rng);

// Penalty escalation steps of the generation loop.
inline double escalate_overlap_weight(double w) { return std::min(1.5 * w, w + 30); }
inline double escalate_outline_weight(double w) { return std::min(1.1 * w, w + 10); }

// Population snapshot for carrying a search across outline changes.
struct FfaWarmState {
  DistributionPopulation q;
  SolutionPopulation p;
  CoordinatePopulations coords;
};

// Fixed-outline floorplanning: DEA-PPM evolves the orientation vectors while
// a conjugate sub-gradient solver refines the member coordinates, with
// penalty escalation and constraint-graph legalization once the overlap
// ratio is small. Deterministic for a fixed seed independent of the thread
// count; members execute in parallel between generation barriers.
class FfaDriver {
 public:
  FfaDriver(const ProblemInstance& instance, FfaConfig config, std::uint64_t seed);
  ~FfaDriver();

  FfaDriver(const FfaDriver&) = delete;
  FfaDriver& operator=(const FfaDriver&) = delete;

  void initialize();
  void initialize(const FfaWarmState& state);
  FfaWarmState export_state() const;
  void step();         // one generation
  bool done() const;   // termination-condition 2
  FfaResult result() const;

  // introspection (primarily for tests)
  int generation() const { return generation_; }
  double step_control() const { return step_; }
  const PenaltyWeights& weights() const { return weights_; }
  const std::vector<double>& fitness() const { return fitness_; }
  const SolutionPopulation& solutions() const { return p_; }
  const CoordinatePopulations& coordinates() const { return coords_; }
  double best_f() const { return best_f_; }
  bool legal_found() const { return legal_found_; }
  double best_legal_hpwl() const { return best_legal_hpwl_; }
  const std::vector<ObjectiveBreakdown>& breakdowns() const { return member_breakdown_; }
  const std::vector<char>& member_legal() const { return member_legal_; }

 private:
  double reference_fitness(const ObjectiveBreakdown& bd) const;
  void update_xy(const SolutionPopulation& sampled);
  void evaluate_initial();
  void track_bests();
  Floorplan member_plan(int i, const SolutionPopulation& p) const;
  int csa_budget() const;

  const ProblemInstance& instance_;
  FfaConfig config_;
  std::uint64_t seed_ = 0;
  std::size_t n_ = 0;
  int np_ = 0;
  double area_ = 0;

  DistributionPopulation q_;
  SolutionPopulation p_;
  CoordinatePopulations coords_;
  std::vector<std::unique_ptr<ObjectiveEvaluator>> evaluators_;

  PenaltyWeights weights_;
  double step_ = 0;
  int generation_ = 0;
  bool initialized_ = false;
  bool outline_fits_ = true;

  std::vector<double> fitness_;
  std::vector<ObjectiveBreakdown> member_breakdown_;
  std::vector<char> member_legal_;

  double best_f_ = 0;
  Floorplan best_plan_;
  bool legal_found_ = false;
  double best_legal_hpwl_ = 0;
  Floorplan best_legal_plan_;
  int reinit_stall_ = 0;
  int hpwl_stall_ = 0;
  std::vector<GenerationStats> history_;
  double start_time_ = 0;
};

FfaResult ffa_cd(const ProblemInstance& instance, const FfaConfig& config, std::uint64_t seed);

}  // namespace mvfp
