#pragma once

#include <span>
#include <vector>

#include "mvfp/model.hpp"

namespace mvfp {

struct PenaltyWeights {
  double wirelength = 1;      // alpha
  double overlap = 20;        // lambda
  double outline = 100;       // mu
  double legal_overlap = 1;   // lambda_0
  double legal_outline = 10;  // mu_0
};

struct ObjectiveBreakdown {
  double wirelength = 0;           // W
  double overlap_area = 0;         // D
  double outline_violation = 0;    // B, sum of hinge terms
  double outline_violation_sq = 0; // smoothed sum of squared hinges
  double f = 0;                    // alpha W + lambda sqrt(D) + mu B
  double f_legal = 0;              // lambda_0 D + mu_0 smoothed
};

// Half-perimeter wirelength over all nets; pads contribute at their fixed
// coordinates, module pins at center plus any percent offsets.
double hpwl(const ProblemInstance& instance, std::span<const double> x,
            std::span<const double> y, std::span<const Orientation> r);

// Piecewise overlap length of two extents at center distance delta.
// Returns max(wi, wj) on the containment branch, (wi + wj - 2 delta) / 2 in
// between, and 0 once separated.
double overlap_1d(double wi, double wj, double delta);

// Sum over unordered pairs of overlap_1d(x) * overlap_1d(y).
double total_overlap(const ProblemInstance& instance, const Floorplan& plan);

// Hinge distances of one module rectangle to the outline sides.
struct BoundaryTerms {
  double left = 0;    // max(0, w/2 - x)
  double right = 0;   // max(0, w/2 + x - W*)
  double bottom = 0;  // max(0, h/2 - y)
  double top = 0;     // max(0, h/2 + y - H*)
};

BoundaryTerms boundary_terms(Dims dims, double x, double y, const OutlineSpec& outline);

double boundary_sum(const ProblemInstance& instance, const Floorplan& plan,
                    const OutlineSpec& outline);
double smooth_boundary(const ProblemInstance& instance, const Floorplan& plan,
                       const OutlineSpec& outline);

ObjectiveBreakdown global_objective(const ProblemInstance& instance, const Floorplan& plan,
                                    const PenaltyWeights& weights, const OutlineSpec& outline);

double legalization_objective(const ProblemInstance& instance, const Floorplan& plan,
                              const PenaltyWeights& weights, const OutlineSpec& outline);

// Reusable evaluator for one instance/outline with a fixed orientation
// assignment. Owns the scratch needed to produce a value and one
// subdifferential member per call; the layout of u and g is
// [x_0..x_{n-1}, y_0..y_{n-1}].
//
// The overlap pass prunes pairs with an x-interval sweep; it is numerically
// identical to the all-pairs sum up to addition order. Instances stay
// shareable: each evaluator is private to one optimization thread.
class ObjectiveEvaluator {
 public:
  ObjectiveEvaluator(const ProblemInstance& instance, const OutlineSpec& outline);

  void set_orientations(std::span<const Orientation> r);
  void set_weights(const PenaltyWeights& weights) { weights_ = weights; }
  const PenaltyWeights& weights() const { return weights_; }
  const OutlineSpec& outline() const { return outline_; }

  std::size_t size() const { return n_; }

  // f(x, y, r) and one member of its subdifferential in (x, y).
  double value_and_subgradient(std::span<const double> u, std::span<double> g);

  // The legalization objective f~ and its subgradient.
  double legal_value_and_subgradient(std::span<const double> u, std::span<double> g);

  // All components at u, no gradient.
  ObjectiveBreakdown breakdown(std::span<const double> u);

 private:
  struct ModulePin {
    int module = 0;
    double off_x_pct = 0;
    double off_y_pct = 0;
  };
  struct CompiledNet {
    std::vector<ModulePin> pins;
    // extremes over the net's fixed pads, -inf/+inf when the net has none
    double pad_min_x = 0, pad_max_x = 0, pad_min_y = 0, pad_max_y = 0;
  };

  // returns D; raw dD stored in gd_ when with_gradient
  double overlap_terms(std::span<const double> u, std::span<double> g, bool with_gradient);
  // returns W; adds scale * (+/-1) units into g unless scale == 0
  double wirelength_terms(std::span<const double> u, std::span<double> g, double scale);
  // accumulates hinge and squared-hinge subgradients into g with the given scales
  void boundary_pass(std::span<const double> u, double& hinge_sum, double& hinge_sq_sum,
                     std::span<double> g, double hinge_scale, double sq_scale);

  const ProblemInstance& instance_;
  OutlineSpec outline_;
  PenaltyWeights weights_;
  std::size_t n_ = 0;
  std::vector<CompiledNet> nets_;
  std::vector<double> ew_, eh_;  // effective extents for the active orientations
  std::vector<int> order_;       // sweep scratch
  std::vector<double> gd_;       // overlap-gradient scratch
};

// Convenience wrappers used by tests and bindings.
void subgradient_f(const ProblemInstance& instance, const Floorplan& plan,
                   const PenaltyWeights& weights, const OutlineSpec& outline,
                   std::span<double> gx, std::span<double> gy);
void subgradient_f_legal(const ProblemInstance& instance, const Floorplan& plan,
                         const PenaltyWeights& weights, const OutlineSpec& outline,
                         std::span<double> gx, std::span<double> gy);

}  // namespace mvfp
