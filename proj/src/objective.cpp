#include "mvfp/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mvfp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double sign_of(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

// Module pin coordinate: center plus percent-of-half-extent offset.
inline double pin_coord(double center, double extent, double pct) {
  return center + pct * 0.01 * (extent / 2);
}

}  // namespace

double overlap_1d(double wi, double wj, double delta) {
  const double half_diff = std::abs(wi - wj) / 2;
  const double half_sum = (wi + wj) / 2;
  if (delta <= half_diff) return std::max(wi, wj);
  if (delta <= half_sum) return (wi + wj - 2 * delta) / 2;
  return 0;
}

double hpwl(const ProblemInstance& instance, std::span<const double> x,
            std::span<const double> y, std::span<const Orientation> r) {
  double total = 0;
  for (const Net& net : instance.nets()) {
    double min_x = kInf, max_x = -kInf, min_y = kInf, max_y = -kInf;
    for (const PinRef& pin : net.pins) {
      double px, py;
      if (pin.kind == PinRef::Kind::pad) {
        px = instance.pads()[pin.index].x;
        py = instance.pads()[pin.index].y;
      } else {
        const Dims d = effective_dims(instance.modules()[pin.index], r[pin.index]);
        px = pin_coord(x[pin.index], d.w, pin.offset_x_pct);
        py = pin_coord(y[pin.index], d.h, pin.offset_y_pct);
      }
      min_x = std::min(min_x, px);
      max_x = std::max(max_x, px);
      min_y = std::min(min_y, py);
      max_y = std::max(max_y, py);
    }
    total += (max_x - min_x) + (max_y - min_y);
  }
  return total;
}

double total_overlap(const ProblemInstance& instance, const Floorplan& plan) {
  const std::size_t n = instance.module_count();
  double sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Dims di = effective_dims(instance.modules()[i], plan.r[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      const Dims dj = effective_dims(instance.modules()[j], plan.r[j]);
      const double ox = overlap_1d(di.w, dj.w, std::abs(plan.x[i] - plan.x[j]));
      if (ox == 0) continue;
      const double oy = overlap_1d(di.h, dj.h, std::abs(plan.y[i] - plan.y[j]));
      sum += ox * oy;
    }
  }
  return sum;
}

BoundaryTerms boundary_terms(Dims dims, double x, double y, const OutlineSpec& outline) {
  BoundaryTerms t;
  t.left = std::max(0.0, dims.w / 2 - x);
  t.right = std::max(0.0, dims.w / 2 + x - outline.width);
  t.bottom = std::max(0.0, dims.h / 2 - y);
  t.top = std::max(0.0, dims.h / 2 + y - outline.height);
  return t;
}

double boundary_sum(const ProblemInstance& instance, const Floorplan& plan,
                    const OutlineSpec& outline) {
  double sum = 0;
  for (std::size_t i = 0; i < instance.module_count(); ++i) {
    const Dims d = effective_dims(instance.modules()[i], plan.r[i]);
    const BoundaryTerms t = boundary_terms(d, plan.x[i], plan.y[i], outline);
    sum += t.left + t.right + t.bottom + t.top;
  }
  return sum;
}

double smooth_boundary(const ProblemInstance& instance, const Floorplan& plan,
                       const OutlineSpec& outline) {
  double sum = 0;
  for (std::size_t i = 0; i < instance.module_count(); ++i) {
    const Dims d = effective_dims(instance.modules()[i], plan.r[i]);
    const BoundaryTerms t = boundary_terms(d, plan.x[i], plan.y[i], outline);
    sum += t.left * t.left + t.right * t.right + t.bottom * t.bottom + t.top * t.top;
  }
  return sum;
}

ObjectiveBreakdown global_objective(const ProblemInstance& instance, const Floorplan& plan,
                                    const PenaltyWeights& weights, const OutlineSpec& outline) {
  ObjectiveBreakdown out;
  out.wirelength = hpwl(instance, plan.x, plan.y, plan.r);
  out.overlap_area = total_overlap(instance, plan);
  out.outline_violation = boundary_sum(instance, plan, outline);
  out.outline_violation_sq = smooth_boundary(instance, plan, outline);
  out.f = weights.wirelength * out.wirelength + weights.overlap * std::sqrt(out.overlap_area) +
          weights.outline * out.outline_violation;
  out.f_legal =
      weights.legal_overlap * out.overlap_area + weights.legal_outline * out.outline_violation_sq;
  return out;
}

double legalization_objective(const ProblemInstance& instance, const Floorplan& plan,
                              const PenaltyWeights& weights, const OutlineSpec& outline) {
  return global_objective(instance, plan, weights, outline).f_legal;
}

ObjectiveEvaluator::ObjectiveEvaluator(const ProblemInstance& instance, const OutlineSpec& outline)
    : instance_(instance), outline_(outline), n_(instance.module_count()) {
  nets_.reserve(instance.nets().size());
  for (const Net& net : instance.nets()) {
    CompiledNet cn;
    cn.pad_min_x = cn.pad_min_y = kInf;
    cn.pad_max_x = cn.pad_max_y = -kInf;
    for (const PinRef& pin : net.pins) {
      if (pin.kind == PinRef::Kind::pad) {
        const Pad& p = instance.pads()[pin.index];
        cn.pad_min_x = std::min(cn.pad_min_x, p.x);
        cn.pad_max_x = std::max(cn.pad_max_x, p.x);
        cn.pad_min_y = std::min(cn.pad_min_y, p.y);
        cn.pad_max_y = std::max(cn.pad_max_y, p.y);
      } else {
        cn.pins.push_back({pin.index, pin.offset_x_pct, pin.offset_y_pct});
      }
    }
    nets_.push_back(std::move(cn));
  }
  ew_.assign(n_, 0);
  eh_.assign(n_, 0);
  for (std::size_t i = 0; i < n_; ++i) {
    ew_[i] = instance.modules()[i].width;
    eh_[i] = instance.modules()[i].height;
  }
  order_.resize(n_);
  gd_.assign(2 * n_, 0);
}

void ObjectiveEvaluator::set_orientations(std::span<const Orientation> r) {
  for (std::size_t i = 0; i < n_; ++i) {
    const Dims d = effective_dims(instance_.modules()[i], r[i]);
    ew_[i] = d.w;
    eh_[i] = d.h;
  }
}

double ObjectiveEvaluator::wirelength_terms(std::span<const double> u, std::span<double> g,
                                            double scale) {
  const double* x = u.data();
  const double* y = u.data() + n_;
  double total = 0;
  for (const CompiledNet& net : nets_) {
    double min_x = net.pad_min_x, max_x = net.pad_max_x;
    double min_y = net.pad_min_y, max_y = net.pad_max_y;
    double mod_min_x = kInf, mod_max_x = -kInf, mod_min_y = kInf, mod_max_y = -kInf;
    int id_min_x = -1, id_max_x = -1, id_min_y = -1, id_max_y = -1;
    for (const ModulePin& pin : net.pins) {
      const int m = pin.module;
      const double px = pin_coord(x[m], ew_[m], pin.off_x_pct);
      const double py = pin_coord(y[m], eh_[m], pin.off_y_pct);
      if (px > mod_max_x || (px == mod_max_x && m < id_max_x)) { mod_max_x = px; id_max_x = m; }
      if (px < mod_min_x || (px == mod_min_x && m < id_min_x)) { mod_min_x = px; id_min_x = m; }
      if (py > mod_max_y || (py == mod_max_y && m < id_max_y)) { mod_max_y = py; id_max_y = m; }
      if (py < mod_min_y || (py == mod_min_y && m < id_min_y)) { mod_min_y = py; id_min_y = m; }
    }
    min_x = std::min(min_x, mod_min_x);
    max_x = std::max(max_x, mod_max_x);
    min_y = std::min(min_y, mod_min_y);
    max_y = std::max(max_y, mod_max_y);
    if (min_x == kInf) continue;  // net with no resolvable extent
    total += (max_x - min_x) + (max_y - min_y);
    if (scale != 0 && !net.pins.empty()) {
      // a pad at the extreme absorbs the unit; ties among modules go to the
      // lowest id (handled in the scan above)
      if (mod_max_x > net.pad_max_x) g[id_max_x] += scale;
      if (mod_min_x < net.pad_min_x) g[id_min_x] -= scale;
      if (mod_max_y > net.pad_max_y) g[n_ + id_max_y] += scale;
      if (mod_min_y < net.pad_min_y) g[n_ + id_min_y] -= scale;
    }
  }
  return total;
}

double ObjectiveEvaluator::overlap_terms(std::span<const double> u, std::span<double> /*unused*/,
                                         bool with_gradient) {
  const double* x = u.data();
  const double* y = u.data() + n_;
  if (with_gradient) std::fill(gd_.begin(), gd_.end(), 0.0);

  // x-interval sweep: pairs are visited only when their x extents meet
  // (touching included, so the separation-boundary subgradient rule applies).
  for (std::size_t i = 0; i < n_; ++i) order_[i] = static_cast<int>(i);
  std::sort(order_.begin(), order_.end(), [&](int a, int b) {
    const double la = x[a] - ew_[a] / 2, lb = x[b] - ew_[b] / 2;
    return la < lb || (la == lb && a < b);
  });

  double total = 0;
  for (std::size_t ii = 0; ii < n_; ++ii) {
    const int a = order_[ii];
    const double right_a = x[a] + ew_[a] / 2;
    for (std::size_t jj = ii + 1; jj < n_; ++jj) {
      const int b = order_[jj];
      if (x[b] - ew_[b] / 2 > right_a) break;
      const double dx = x[a] - x[b];
      const double adx = std::abs(dx);
      const double diff_x = std::abs(ew_[a] - ew_[b]) / 2;
      const double sum_x = (ew_[a] + ew_[b]) / 2;
      const double ox = adx <= diff_x ? std::max(ew_[a], ew_[b])
                                      : (adx <= sum_x ? sum_x - adx : 0.0);

      const double dy = y[a] - y[b];
      const double ady = std::abs(dy);
      const double diff_y = std::abs(eh_[a] - eh_[b]) / 2;
      const double sum_y = (eh_[a] + eh_[b]) / 2;
      if (ady > sum_y) continue;
      const double oy = ady <= diff_y ? std::max(eh_[a], eh_[b]) : sum_y - ady;

      total += ox * oy;
      if (!with_gradient) continue;
      // middle branch (boundaries included) differentiates to -sign; the
      // containment branch is flat
      if (adx >= diff_x) {
        const double d_ox = -sign_of(dx);
        gd_[a] += oy * d_ox;
        gd_[b] -= oy * d_ox;
      }
      if (ady >= diff_y) {
        const double d_oy = -sign_of(dy);
        gd_[n_ + a] += ox * d_oy;
        gd_[n_ + b] -= ox * d_oy;
      }
    }
  }
  return total;
}

void ObjectiveEvaluator::boundary_pass(std::span<const double> u, double& hinge_sum,
                                       double& hinge_sq_sum, std::span<double> g,
                                       double hinge_scale, double sq_scale) {
  const double* x = u.data();
  const double* y = u.data() + n_;
  hinge_sum = 0;
  hinge_sq_sum = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    const double w2 = ew_[i] / 2, h2 = eh_[i] / 2;
    const double b1x = std::max(0.0, w2 - x[i]);
    const double b2x = std::max(0.0, w2 + x[i] - outline_.width);
    const double b1y = std::max(0.0, h2 - y[i]);
    const double b2y = std::max(0.0, h2 + y[i] - outline_.height);
    hinge_sum += b1x + b2x + b1y + b2y;
    hinge_sq_sum += b1x * b1x + b2x * b2x + b1y * b1y + b2y * b2y;
    if (hinge_scale != 0) {
      g[i] += hinge_scale * ((b2x > 0 ? 1.0 : 0.0) - (b1x > 0 ? 1.0 : 0.0));
      g[n_ + i] += hinge_scale * ((b2y > 0 ? 1.0 : 0.0) - (b1y > 0 ? 1.0 : 0.0));
    }
    if (sq_scale != 0) {
      g[i] += sq_scale * 2 * (b2x - b1x);
      g[n_ + i] += sq_scale * 2 * (b2y - b1y);
    }
  }
}

double ObjectiveEvaluator::value_and_subgradient(std::span<const double> u, std::span<double> g) {
  std::fill(g.begin(), g.end(), 0.0);
  const double w = wirelength_terms(u, g, weights_.wirelength);
  const double d = overlap_terms(u, g, true);
  double b = 0, b_sq = 0;
  boundary_pass(u, b, b_sq, g, weights_.outline, 0);
  if (d > 0) {
    const double c = weights_.overlap / (2 * std::sqrt(d));
    for (std::size_t i = 0; i < 2 * n_; ++i) g[i] += c * gd_[i];
  }
  return weights_.wirelength * w + weights_.overlap * std::sqrt(d) + weights_.outline * b;
}

double ObjectiveEvaluator::legal_value_and_subgradient(std::span<const double> u,
                                                       std::span<double> g) {
  std::fill(g.begin(), g.end(), 0.0);
  const double d = overlap_terms(u, g, true);
  double b = 0, b_sq = 0;
  boundary_pass(u, b, b_sq, g, 0, weights_.legal_outline);
  for (std::size_t i = 0; i < 2 * n_; ++i) g[i] += weights_.legal_overlap * gd_[i];
  return weights_.legal_overlap * d + weights_.legal_outline * b_sq;
}

ObjectiveBreakdown ObjectiveEvaluator::breakdown(std::span<const double> u) {
  ObjectiveBreakdown out;
  out.wirelength = wirelength_terms(u, {}, 0);
  out.overlap_area = overlap_terms(u, {}, false);
  boundary_pass(u, out.outline_violation, out.outline_violation_sq, {}, 0, 0);
  out.f = weights_.wirelength * out.wirelength +
          weights_.overlap * std::sqrt(out.overlap_area) +
          weights_.outline * out.outline_violation;
  out.f_legal = weights_.legal_overlap * out.overlap_area +
                weights_.legal_outline * out.outline_violation_sq;
  return out;
}

namespace {

void subgradient_impl(const ProblemInstance& instance, const Floorplan& plan,
                      const PenaltyWeights& weights, const OutlineSpec& outline, bool legal,
                      std::span<double> gx, std::span<double> gy) {
  const std::size_t n = instance.module_count();
  ObjectiveEvaluator eval(instance, outline);
  eval.set_orientations(plan.r);
  eval.set_weights(weights);
  std::vector<double> u(2 * n), g(2 * n);
  std::copy(plan.x.begin(), plan.x.end(), u.begin());
  std::copy(plan.y.begin(), plan.y.end(), u.begin() + n);
  if (legal)
    eval.legal_value_and_subgradient(u, g);
  else
    eval.value_and_subgradient(u, g);
  std::copy(g.begin(), g.begin() + n, gx.begin());
  std::copy(g.begin() + n, g.end(), gy.begin());
}

}  // namespace

void subgradient_f(const ProblemInstance& instance, const Floorplan& plan,
                   const PenaltyWeights& weights, const OutlineSpec& outline,
                   std::span<double> gx, std::span<double> gy) {
  subgradient_impl(instance, plan, weights, outline, false, gx, gy);
}

void subgradient_f_legal(const ProblemInstance& instance, const Floorplan& plan,
                         const PenaltyWeights& weights, const OutlineSpec& outline,
                         std::span<double> gx, std::span<double> gy) {
  subgradient_impl(instance, plan, weights, outline, true, gx, gy);
}

}  // namespace mvfp
