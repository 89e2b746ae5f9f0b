#include "mvfp/ffa_cd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mvfp/legalize.hpp"
#include "mvfp/parallel.hpp"

namespace mvfp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kTagLhs = 0x101;
constexpr std::uint64_t kTagReinit = 0x102;

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace

CoordinatePopulations latin_hypercube_population(const ProblemInstance& instance,
                                                 const OutlineSpec& outline, int np, Rng& rng) {
  if (np < 1) throw std::invalid_argument("population must be >= 1");
  const std::size_t n = instance.module_count();
  CoordinatePopulations pop;
  pop.x.assign(np, std::vector<double>(n, 0.0));
  pop.y.assign(np, std::vector<double>(n, 0.0));

  std::vector<int> strata(np);
  auto fill_axis = [&](double extent, std::size_t j, std::vector<std::vector<double>>& axis) {
    const Module& m = instance.modules()[j];
    const double margin = std::max(m.width, m.height) / 2;
    double lo = margin, hi = extent - margin;
    if (hi < lo) lo = hi = extent / 2;  // module wider than the outline: clamp to center
    std::iota(strata.begin(), strata.end(), 0);
    for (int i = np - 1; i > 0; --i) std::swap(strata[i], strata[rng.uniform_int(0, i)]);
    for (int i = 0; i < np; ++i) {
      const double u = rng.uniform();
      axis[i][j] = lo + (hi - lo) * ((strata[i] + u) / np);
    }
  };

  for (std::size_t j = 0; j < n; ++j) {
    fill_axis(outline.width, j, pop.x);
    fill_axis(outline.height, j, pop.y);
  }
  return pop;
}

// Escalation makes raw f values incomparable across generations, so member
// fitness and all improvement bookkeeping use the run's initial weights.
double FfaDriver::reference_fitness(const ObjectiveBreakdown& bd) const {
  return config_.weights.wirelength * bd.wirelength +
         config_.weights.overlap * std::sqrt(bd.overlap_area) +
         config_.weights.outline * bd.outline_violation;
}

FfaDriver::FfaDriver(const ProblemInstance& instance, FfaConfig config, std::uint64_t seed)
    : instance_(instance), config_(std::move(config)), seed_(seed) {
  if (!(config_.outline.width > 0) || !(config_.outline.height > 0))
    throw std::invalid_argument("ffa_cd needs a positive outline");
  config_.dea.validate();
  n_ = instance.module_count();
  np_ = config_.dea.population;
  area_ = instance.total_module_area();
  weights_ = config_.weights;
  step_ = config_.initial_step > 0
              ? config_.initial_step
              : std::max(config_.outline.width, config_.outline.height) / 2;
  if (config_.min_step <= 0)
    config_.min_step = 0.05 * std::max(config_.outline.width, config_.outline.height);
  for (const Module& m : instance.modules()) {
    const bool fits = (m.width <= config_.outline.width && m.height <= config_.outline.height) ||
                      (m.height <= config_.outline.width && m.width <= config_.outline.height);
    if (!fits) outline_fits_ = false;
  }
  evaluators_.reserve(np_);
  for (int i = 0; i < np_; ++i)
    evaluators_.push_back(std::make_unique<ObjectiveEvaluator>(instance_, config_.outline));
  fitness_.assign(np_, kInf);
  member_breakdown_.assign(np_, {});
  member_legal_.assign(np_, 0);
  best_f_ = kInf;
  best_legal_hpwl_ = kInf;
}

FfaDriver::~FfaDriver() = default;

Floorplan FfaDriver::member_plan(int i, const SolutionPopulation& p) const {
  Floorplan plan;
  plan.x = coords_.x[i];
  plan.y = coords_.y[i];
  plan.r = p[i];
  return plan;
}

int FfaDriver::csa_budget() const {
  if (generation_ <= 1 || config_.csa_iterations_later <= 0) return config_.csa_iterations;
  return config_.csa_iterations_later;
}

void FfaDriver::initialize() {
  q_ = init_distribution(n_, np_);
  p_ = sample_fresh(q_, seed_, 0);
  Rng rng = Rng::stream(seed_, kTagLhs);
  coords_ = latin_hypercube_population(instance_, config_.outline, np_, rng);
  start_time_ = now_seconds();
  evaluate_initial();
  initialized_ = true;
}

void FfaDriver::initialize(const FfaWarmState& state) {
  if (state.q.size() != static_cast<std::size_t>(np_) || state.p.size() != state.q.size() ||
      state.coords.x.size() != state.q.size())
    throw std::invalid_argument("warm state population size mismatch");
  q_ = state.q;
  p_ = state.p;
  coords_ = state.coords;
  start_time_ = now_seconds();
  evaluate_initial();
  initialized_ = true;
}

FfaWarmState FfaDriver::export_state() const {
  return FfaWarmState{q_, p_, coords_};
}

void FfaDriver::evaluate_initial() {
  parallel_for(np_, config_.threads, [&](std::size_t i) {
    ObjectiveEvaluator& eval = *evaluators_[i];
    eval.set_orientations(p_[i]);
    eval.set_weights(weights_);
    std::vector<double> u(2 * n_);
    std::copy(coords_.x[i].begin(), coords_.x[i].end(), u.begin());
    std::copy(coords_.y[i].begin(), coords_.y[i].end(), u.begin() + n_);
    member_breakdown_[i] = eval.breakdown(u);
    fitness_[i] = reference_fitness(member_breakdown_[i]);
    const Floorplan plan = member_plan(static_cast<int>(i), p_);
    member_legal_[i] = has_zero_geometric_overlap(instance_, plan) &&
                               inside_outline(instance_, plan, config_.outline)
                           ? 1
                           : 0;
  });
  track_bests();
}

void FfaDriver::update_xy(const SolutionPopulation& sampled) {
  const PenaltyWeights snapshot = weights_;
  const int budget = csa_budget();
  std::vector<char> wants_lambda(np_, 0), wants_mu(np_, 0);

  parallel_for(np_, config_.threads, [&](std::size_t i) {
    ObjectiveEvaluator& eval = *evaluators_[i];
    eval.set_orientations(sampled[i]);
    eval.set_weights(snapshot);

    std::vector<double> u(2 * n_);
    std::copy(coords_.x[i].begin(), coords_.x[i].end(), u.begin());
    std::copy(coords_.y[i].begin(), coords_.y[i].end(), u.begin() + n_);

    CsaConfig csa = config_.csa;
    csa.max_iterations = budget;
    csa.initial_step = step_;
    auto global_oracle = [&eval](std::span<const double> point, std::span<double> grad) {
      return eval.value_and_subgradient(point, grad);
    };
    u = csa_minimize(global_oracle, std::move(u), csa).best_point;

    ObjectiveBreakdown bd = eval.breakdown(u);
    const double d0 = bd.overlap_area / area_;
    const double c0 = bd.outline_violation / (config_.outline.width + config_.outline.height);

    if (d0 > config_.overlap_ratio_tol) {
      wants_lambda[i] = 1;
      if (c0 > config_.outline_ratio_tol) wants_mu[i] = 1;
    } else {
      CsaConfig legal_csa = config_.csa;
      legal_csa.max_iterations = config_.legal_csa_iterations;
      legal_csa.initial_step = std::max(step_ / 2, config_.legal_step_floor);
      auto legal_oracle = [&eval](std::span<const double> point, std::span<double> grad) {
        return eval.legal_value_and_subgradient(point, grad);
      };
      u = csa_minimize(legal_oracle, std::move(u), legal_csa).best_point;

      Floorplan plan;
      plan.x.assign(u.begin(), u.begin() + n_);
      plan.y.assign(u.begin() + n_, u.end());
      plan.r = sampled[i];
      plan = legalize_graph(instance_, plan);
      std::copy(plan.x.begin(), plan.x.end(), u.begin());
      std::copy(plan.y.begin(), plan.y.end(), u.begin() + n_);
      bd = eval.breakdown(u);
    }

    std::copy(u.begin(), u.begin() + n_, coords_.x[i].begin());
    std::copy(u.begin() + n_, u.end(), coords_.y[i].begin());
    member_breakdown_[i] = bd;
    fitness_[i] = reference_fitness(bd);

    const Floorplan plan = member_plan(static_cast<int>(i), sampled);
    member_legal_[i] = has_zero_geometric_overlap(instance_, plan) &&
                               inside_outline(instance_, plan, config_.outline)
                           ? 1
                           : 0;
  });

  // escalation after the barrier, in member order (same count as the serial loop)
  for (int i = 0; i < np_; ++i) {
    if (wants_lambda[i]) weights_.overlap = escalate_overlap_weight(weights_.overlap);
    if (wants_mu[i]) weights_.outline = escalate_outline_weight(weights_.outline);
  }
  step_ = std::max(config_.generation_step_decay * step_, config_.min_step);
}

void FfaDriver::track_bests() {
  int best_member = 0;
  for (int i = 1; i < np_; ++i)
    if (fitness_[i] < fitness_[best_member]) best_member = i;

  bool f_improved = false;
  if (fitness_[best_member] < best_f_) {
    best_f_ = fitness_[best_member];
    best_plan_ = member_plan(best_member, p_);
    f_improved = true;
  }

  bool hpwl_improved = false;
  for (int i = 0; i < np_; ++i) {
    if (!member_legal_[i]) continue;
    if (!legal_found_ || member_breakdown_[i].wirelength < best_legal_hpwl_) {
      legal_found_ = true;
      best_legal_hpwl_ = member_breakdown_[i].wirelength;
      best_legal_plan_ = member_plan(i, p_);
      hpwl_improved = true;
    }
  }

  if (generation_ > 0) {
    reinit_stall_ = f_improved ? 0 : reinit_stall_ + 1;
    if (legal_found_ && !hpwl_improved) ++hpwl_stall_;
    if (hpwl_improved) hpwl_stall_ = 0;
  }

  if (config_.record_history) {
    GenerationStats stats;
    stats.generation = generation_;
    stats.best_f = best_f_;
    stats.generation_best_f = fitness_[best_member];
    stats.best_legal_hpwl = best_legal_hpwl_;
    stats.overlap_weight = weights_.overlap;
    stats.outline_weight = weights_.outline;
    stats.step_control = step_;
    history_.push_back(stats);
  }
}

void FfaDriver::step() {
  if (!initialized_) initialize();
  ++generation_;

  orth_exp_q(q_, fitness_, seed_, static_cast<std::uint64_t>(generation_));
  SolutionPopulation sampled =
      sample_p(q_, p_, config_.dea, seed_, static_cast<std::uint64_t>(generation_));
  update_xy(sampled);
  p_ = std::move(sampled);
  refine_q(p_, p_, q_, config_.dea, seed_, static_cast<std::uint64_t>(generation_));

  track_bests();

  if (reinit_stall_ >= config_.stall_reinit) {
    int best_member = 0;
    for (int i = 1; i < np_; ++i)
      if (fitness_[i] < fitness_[best_member]) best_member = i;
    Rng rng = Rng::stream(seed_, kTagReinit, static_cast<std::uint64_t>(generation_));
    CoordinatePopulations fresh =
        latin_hypercube_population(instance_, config_.outline, np_, rng);
    for (int i = 0; i < np_; ++i) {
      if (i == best_member) continue;
      coords_.x[i] = std::move(fresh.x[i]);
      coords_.y[i] = std::move(fresh.y[i]);
    }
    reinit_stall_ = 0;
  }
}

bool FfaDriver::done() const {
  if (generation_ >= config_.max_generations) return true;
  return legal_found_ && hpwl_stall_ >= config_.hpwl_stall_stop;
}

FfaResult FfaDriver::result() const {
  FfaResult out;
  out.outline_fits = outline_fits_;
  out.generations = generation_;
  out.best_f = best_f_;
  out.history = history_;
  out.seconds = now_seconds() - start_time_;
  if (legal_found_) {
    out.plan = best_legal_plan_;
    out.legal = true;
  } else {
    out.plan = best_plan_;
    out.legal = false;
  }
  out.hpwl = hpwl(instance_, out.plan.x, out.plan.y, out.plan.r);
  out.overlap_area = total_overlap(instance_, out.plan);
  out.outline_violation = boundary_sum(instance_, out.plan, config_.outline);
  return out;
}

FfaResult ffa_cd(const ProblemInstance& instance, const FfaConfig& config, std::uint64_t seed) {
  FfaDriver driver(instance, config, seed);
  driver.initialize();
  while (!driver.done()) driver.step();
  return driver.result();
}

}  // namespace mvfp
