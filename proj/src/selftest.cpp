#include "mvfp/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <string>
#include <vector>

#include "mvfp/dea_ppm.hpp"
#include "mvfp/legalize.hpp"
#include "mvfp/model.hpp"
#include "mvfp/objective.hpp"
#include "mvfp/parallel.hpp"
#include "mvfp/synth.hpp"

namespace mvfp {

namespace {

using CheckResult = CheckOutcome;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2e", v);
  return buf;
}

std::vector<double> pack_plan(const Floorplan& plan) {
  std::vector<double> u(plan.x.size() * 2);
  std::copy(plan.x.begin(), plan.x.end(), u.begin());
  std::copy(plan.y.begin(), plan.y.end(), u.begin() + plan.x.size());
  return u;
}

// --- objective cross-check ---------------------------------------------------

double reference_overlap(const ProblemInstance& instance, const Floorplan& plan,
                         bool corrupt_containment) {
  const std::size_t n = instance.module_count();
  double sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Dims di = effective_dims(instance.modules()[i], plan.r[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      const Dims dj = effective_dims(instance.modules()[j], plan.r[j]);
      auto piece = [corrupt_containment](double wi, double wj, double delta) {
        const double diff = std::abs(wi - wj) / 2, half = (wi + wj) / 2;
        if (delta <= diff) return corrupt_containment ? std::min(wi, wj) : std::max(wi, wj);
        if (delta <= half) return half - delta;
        return 0.0;
      };
      sum += piece(di.w, dj.w, std::abs(plan.x[i] - plan.x[j])) *
             piece(di.h, dj.h, std::abs(plan.y[i] - plan.y[j]));
    }
  }
  return sum;
}

CheckResult check_objective_cross(const SelftestOptions& opt) {
  CheckResult result{"objective-cross-check", true, ""};
  Rng rng = Rng::stream(opt.seed, 0xC1);
  double worst = 0;
  int zero_mismatches = 0;
  for (int c = 0; c < opt.cross_check_plans; ++c) {
    SynthConfig sc;
    sc.modules = 4 + (c % 24);
    sc.terminals = 4;
    sc.nets = sc.modules * 2;
    const ProblemInstance instance = synth_instance(sc, rng);
    const OutlineSpec outline = outline_from_ratio(instance.total_module_area(), 1.0, 0.15);
    // spread beyond the outline so boundary terms are exercised
    const Floorplan plan =
        random_floorplan(instance, 1.3 * outline.width, 1.3 * outline.height, rng);

    ObjectiveEvaluator eval(instance, outline);
    eval.set_orientations(plan.r);
    const ObjectiveBreakdown bd = eval.breakdown(pack_plan(plan));

    auto rel = [](double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); };
    worst = std::max(worst, rel(bd.wirelength, hpwl(instance, plan.x, plan.y, plan.r)));
    worst = std::max(worst,
                     rel(bd.overlap_area, reference_overlap(instance, plan,
                                                            opt.corrupt_overlap_reference)));
    worst = std::max(worst, rel(bd.outline_violation, boundary_sum(instance, plan, outline)));
    worst = std::max(worst, rel(bd.outline_violation_sq, smooth_boundary(instance, plan, outline)));

    const bool d_zero = bd.overlap_area == 0;
    if (d_zero != has_zero_geometric_overlap(instance, plan)) ++zero_mismatches;
  }
  result.pass = worst <= 1e-9 && zero_mismatches == 0;
  result.details = "max rel dev " + sci(worst) + ", zero-class mismatches " +
                   std::to_string(zero_mismatches) + " (" +
                   std::to_string(opt.cross_check_plans) + " plans)";
  return result;
}

// --- probability model -------------------------------------------------------

CheckResult check_probability_model(const SelftestOptions& opt) {
  CheckResult result{"probability-model", true, ""};
  Rng rng = Rng::stream(opt.seed, 0xC2);

  auto random_unit_column = [&rng]() {
    ProbabilityMatrix::Column col;
    double norm_sq = 0;
    do {
      norm_sq = 0;
      for (double& v : col) {
        v = rng.uniform();
        norm_sq += v * v;
      }
    } while (norm_sq < 1e-8);
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& v : col) v *= inv;
    return col;
  };

  double worst_norm = 0;
  ProbabilityMatrix::Column col = random_unit_column();
  for (int op = 0; op < opt.norm_operations; ++op) {
    if (op % 97 == 0) col = random_unit_column();
    const int kind = rng.uniform_int(0, 2);
    if (kind == 0) {
      exploitation_update(col, rng.uniform_int(0, 3), rng.uniform_int(0, 3), 0.2,
                          rng.uniform(-0.175, 0.175));
    } else if (kind == 1) {
      disturbance_update(col, rng.uniform_int(0, 3), 0.5);
    } else {
      const auto m = random_orthogonal4(rng);
      apply_orthogonal(col, m);
    }
    double norm_sq = 0;
    for (double v : col) norm_sq += v * v;
    worst_norm = std::max(worst_norm, std::abs(std::sqrt(norm_sq) - 1.0));
  }

  // renormalizing-update identity: the raw outputs, read as squared entries,
  // sum to exactly one for any unit-norm input
  double worst_sum = 0;
  for (int c = 0; c < 1000; ++c) {
    const auto probe = random_unit_column();
    const int code = rng.uniform_int(0, 3);
    const double lambda = rng.uniform(0.05, 0.95);
    const double q0_sq = probe[code] * probe[code];
    const double denom = 1.0 - (1.0 - lambda) * q0_sq;
    double sum = 0;
    for (int l = 0; l < 4; ++l) {
      const double sq = probe[l] * probe[l];
      sum += (l == code ? lambda * sq : sq) / denom;
    }
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
  }

  result.pass = worst_norm <= 1e-9 && worst_sum <= 1e-12;
  result.details = "max norm dev " + sci(worst_norm) + ", disturbance sum dev " + sci(worst_sum) +
                   " (" + std::to_string(opt.norm_operations) + " ops)";
  return result;
}

// --- subgradients vs. finite differences -------------------------------------

bool is_smooth_point(const ProblemInstance& instance, const Floorplan& plan,
                     const OutlineSpec& outline, double margin, double min_overlap) {
  const std::size_t n = instance.module_count();
  // Net extremes must be isolated so the stencil stays on one branch. Ties
  // between two fixed pads are not kinks in the module coordinates: only a
  // module pin contesting the extreme makes the net term non-smooth.
  for (const Net& net : instance.nets()) {
    for (int axis = 0; axis < 2; ++axis) {
      double pad_min = std::numeric_limits<double>::infinity(), pad_max = -pad_min;
      std::vector<double> mods;
      for (const PinRef& pin : net.pins) {
        if (pin.kind == PinRef::Kind::pad) {
          const Pad& p = instance.pads()[pin.index];
          pad_min = std::min(pad_min, axis == 0 ? p.x : p.y);
          pad_max = std::max(pad_max, axis == 0 ? p.x : p.y);
        } else {
          mods.push_back(axis == 0 ? plan.x[pin.index] : plan.y[pin.index]);
        }
      }
      if (mods.empty()) continue;
      std::sort(mods.begin(), mods.end());
      const double top = mods.back();
      if (std::abs(top - pad_max) <= margin) return false;
      if (top > pad_max && mods.size() > 1 && top - mods[mods.size() - 2] <= margin)
        return false;
      const double bottom = mods.front();
      if (std::abs(bottom - pad_min) <= margin) return false;
      if (bottom < pad_min && mods.size() > 1 && mods[1] - bottom <= margin) return false;
    }
  }
  // pair distances clear of the overlap branch boundaries
  for (std::size_t i = 0; i < n; ++i) {
    const Dims di = effective_dims(instance.modules()[i], plan.r[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      const Dims dj = effective_dims(instance.modules()[j], plan.r[j]);
      const double dx = std::abs(plan.x[i] - plan.x[j]);
      const double dy = std::abs(plan.y[i] - plan.y[j]);
      if (dx <= margin || std::abs(dx - std::abs(di.w - dj.w) / 2) <= margin ||
          std::abs(dx - (di.w + dj.w) / 2) <= margin)
        return false;
      if (dy <= margin || std::abs(dy - std::abs(di.h - dj.h) / 2) <= margin ||
          std::abs(dy - (di.h + dj.h) / 2) <= margin)
        return false;
    }
  }
  // hinge terms clear of their kinks
  for (std::size_t i = 0; i < n; ++i) {
    const Dims d = effective_dims(instance.modules()[i], plan.r[i]);
    if (std::abs(d.w / 2 - plan.x[i]) <= margin) return false;
    if (std::abs(d.w / 2 + plan.x[i] - outline.width) <= margin) return false;
    if (std::abs(d.h / 2 - plan.y[i]) <= margin) return false;
    if (std::abs(d.h / 2 + plan.y[i] - outline.height) <= margin) return false;
  }
  return total_overlap(instance, plan) > min_overlap;
}

CheckResult check_subgradients(const SelftestOptions& opt, int size) {
  CheckResult result{"subgradient-fd n=" + std::to_string(size), true, ""};
  Rng rng = Rng::stream(opt.seed, 0xC3, static_cast<std::uint64_t>(size));

  SynthConfig sc;
  sc.modules = size;
  sc.terminals = std::max(4, size / 3);
  sc.nets = size * 2;
  const ProblemInstance instance = synth_instance(sc, rng);
  const OutlineSpec outline = outline_from_ratio(instance.total_module_area(), 1.0, 0.15);
  const PenaltyWeights weights;

  std::vector<Floorplan> points;
  points.reserve(opt.fd_points);
  long attempts = 0;
  while (static_cast<int>(points.size()) < opt.fd_points) {
    if (++attempts > 100L * opt.fd_points) {
      result.pass = false;
      result.details = "could not sample enough smooth points";
      return result;
    }
    Floorplan plan = random_floorplan(instance, outline.width, outline.height, rng);
    if (is_smooth_point(instance, plan, outline, 1e-4, 1e-3)) points.push_back(std::move(plan));
  }

  const std::size_t n = instance.module_count();
  const double h = 1e-6;
  std::vector<double> errors(points.size(), 0.0);
  parallel_for(points.size(), 0, [&](std::size_t p) {
    ObjectiveEvaluator eval(instance, outline);
    eval.set_weights(weights);
    eval.set_orientations(points[p].r);
    std::vector<double> u = pack_plan(points[p]);
    std::vector<double> g(2 * n), g_legal(2 * n);
    eval.value_and_subgradient(u, g);
    eval.legal_value_and_subgradient(u, g_legal);
    double worst = 0;
    for (std::size_t c = 0; c < 2 * n; ++c) {
      const double keep = u[c];
      u[c] = keep + h;
      const ObjectiveBreakdown hi = eval.breakdown(u);
      u[c] = keep - h;
      const ObjectiveBreakdown lo = eval.breakdown(u);
      u[c] = keep;
      const double fd = (hi.f - lo.f) / (2 * h);
      const double fd_legal = (hi.f_legal - lo.f_legal) / (2 * h);
      worst = std::max(worst, std::abs(fd - g[c]) / std::max({1.0, std::abs(fd), std::abs(g[c])}));
      worst = std::max(worst, std::abs(fd_legal - g_legal[c]) /
                                  std::max({1.0, std::abs(fd_legal), std::abs(g_legal[c])}));
    }
    errors[p] = worst;
  });

  const double max_err = *std::max_element(errors.begin(), errors.end());
  result.pass = max_err <= 1e-4;
  result.details = "max rel err " + sci(max_err) + " (" + std::to_string(points.size()) +
                   " points, h=1e-6)";
  return result;
}

// --- legalizer oracle ----------------------------------------------------------

CheckResult check_legalizer(const SelftestOptions& opt) {
  CheckResult result{"legalizer-oracle", true, ""};
  Rng rng = Rng::stream(opt.seed, 0xC4);

  int overlap_failures = 0, negative_failures = 0, idempotence_failures = 0,
      relation_failures = 0;
  for (int c = 0; c < opt.legalizer_cases; ++c) {
    SynthConfig sc;
    sc.modules = 20;
    sc.terminals = 4;
    sc.nets = 24;
    const ProblemInstance instance = synth_instance(sc, rng);
    const Floorplan input = near_legal_floorplan(instance, rng);
    const RelationSets input_relations = build_relations(instance, input);

    const Floorplan packed = legalize_graph(instance, input);
    if (!has_zero_geometric_overlap(instance, packed)) ++overlap_failures;

    double scale = 0;
    for (std::size_t i = 0; i < instance.module_count(); ++i) {
      const Dims d = effective_dims(instance.modules()[i], packed.r[i]);
      scale = std::max({scale, packed.x[i] + d.w / 2, packed.y[i] + d.h / 2});
      if (packed.x[i] - d.w / 2 < -1e-9 || packed.y[i] - d.h / 2 < -1e-9) ++negative_failures;
    }

    const Floorplan twice = legalize_graph(instance, packed);
    for (std::size_t i = 0; i < instance.module_count(); ++i) {
      if (std::abs(twice.x[i] - packed.x[i]) > 1e-12 * scale ||
          std::abs(twice.y[i] - packed.y[i]) > 1e-12 * scale) {
        ++idempotence_failures;
        break;
      }
    }

    bool relation_ok = true;
    for (std::size_t j = 0; j < instance.module_count(); ++j) {
      const Dims dj = effective_dims(instance.modules()[j], packed.r[j]);
      for (int i : input_relations.left_of[j]) {
        const Dims di = effective_dims(instance.modules()[i], packed.r[i]);
        if ((packed.x[i] + di.w / 2) - (packed.x[j] - dj.w / 2) > 1e-9 * std::max(1.0, scale))
          relation_ok = false;
      }
      for (int i : input_relations.below[j]) {
        const Dims di = effective_dims(instance.modules()[i], packed.r[i]);
        if ((packed.y[i] + di.h / 2) - (packed.y[j] - dj.h / 2) > 1e-9 * std::max(1.0, scale))
          relation_ok = false;
      }
    }
    if (!relation_ok) ++relation_failures;
  }

  result.pass = overlap_failures == 0 && negative_failures == 0 && idempotence_failures == 0 &&
                relation_failures == 0;
  result.details = "overlap " + std::to_string(overlap_failures) + ", negative " +
                   std::to_string(negative_failures) + ", idempotence " +
                   std::to_string(idempotence_failures) + ", relations " +
                   std::to_string(relation_failures) + " failures (" +
                   std::to_string(opt.legalizer_cases) + " cases)";
  return result;
}

}  // namespace

std::vector<CheckOutcome> run_selftest_checks(const SelftestOptions& options) {
  std::vector<CheckOutcome> results;
  const auto timed = [&results](CheckOutcome outcome, double start) {
    outcome.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
            .count() -
        start;
    results.push_back(std::move(outcome));
  };
  auto now = [] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
  };
  double t = now();
  timed(check_objective_cross(options), t);
  t = now();
  timed(check_probability_model(options), t);
  t = now();
  timed(check_subgradients(options, 10), t);
  t = now();
  timed(check_subgradients(options, 50), t);
  t = now();
  timed(check_legalizer(options), t);
  return results;
}

int run_selftest(const SelftestOptions& options, std::ostream& out) {
  const std::vector<CheckOutcome> results = run_selftest_checks(options);

  bool all_pass = true;
  for (const CheckResult& r : results) {
    out << (r.pass ? "[ ok ] " : "[FAIL] ") << std::left << std::setw(26) << r.name << ' '
        << r.details << '\n';
    all_pass = all_pass && r.pass;
  }
  out << (all_pass ? "selftest: all checks passed\n" : "selftest: FAILURES detected\n");
  return all_pass ? 0 : 1;
}

}  // namespace mvfp
