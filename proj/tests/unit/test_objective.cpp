#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "mvfp/objective.hpp"
#include "mvfp/rng.hpp"
#include "mvfp/synth.hpp"

using namespace mvfp;
using test::make_instance;
using test::make_plan;

namespace {

std::vector<double> pack(const Floorplan& plan) {
  std::vector<double> u(plan.x.size() * 2);
  std::copy(plan.x.begin(), plan.x.end(), u.begin());
  std::copy(plan.y.begin(), plan.y.end(), u.begin() + plan.x.size());
  return u;
}

}  // namespace

TEST_CASE("hpwl basics") {
  // one net between module centers (0,0) and (3,4)
  const auto inst = make_instance({{1, 1}, {1, 1}}, {}, {{0, 1}});
  const auto plan = make_plan({{0, 0}, {3, 4}});
  CHECK(hpwl(inst, plan.x, plan.y, plan.r) == doctest::Approx(7.0));

  const auto single = make_instance({{1, 1}}, {}, {{0}});
  const auto sp = make_plan({{42, 17}});
  CHECK(hpwl(single, sp.x, sp.y, sp.r) == doctest::Approx(0.0));

  const auto multi = make_instance({{1, 1}, {1, 1}, {1, 1}}, {}, {{0, 1}, {0, 2}});
  const auto mp = make_plan({{0, 0}, {1, 1}, {2, 0}});
  CHECK(hpwl(multi, mp.x, mp.y, mp.r) == doctest::Approx(4.0));
}

TEST_CASE("hpwl includes pads at fixed coordinates") {
  const auto inst = make_instance({{1, 1}}, {{10, 0}}, {{0, ~0}});
  const auto plan = make_plan({{0, 0}});
  CHECK(hpwl(inst, plan.x, plan.y, plan.r) == doctest::Approx(10.0));
}

TEST_CASE("overlap_1d branches") {
  CHECK(overlap_1d(2, 2, 1) == doctest::Approx(1.0));  // middle
  CHECK(overlap_1d(2, 2, 2) == doctest::Approx(0.0));  // boundary of middle
  CHECK(overlap_1d(6, 2, 1) == doctest::Approx(6.0));  // containment takes the max
  CHECK(overlap_1d(2, 2, 5) == 0.0);                   // separated
}

TEST_CASE("overlap_1d symmetry") {
  Rng rng(3);
  for (int t = 0; t < 300; ++t) {
    const double wi = rng.uniform(0.1, 20), wj = rng.uniform(0.1, 20);
    const double d = rng.uniform(0, 25);
    CHECK(overlap_1d(wi, wj, d) == overlap_1d(wj, wi, d));
  }
}

TEST_CASE("total overlap") {
  const auto inst = make_instance({{2, 2}, {2, 2}});
  CHECK(total_overlap(inst, make_plan({{0, 0}, {1, 1}})) == doctest::Approx(1.0));
  CHECK(total_overlap(inst, make_plan({{0, 0}, {10, 0}})) == 0.0);
  CHECK(total_overlap(inst, make_plan({{1, 1}, {1, 1}})) == doctest::Approx(4.0));
}

TEST_CASE("total overlap is invariant under relabeling and translation") {
  Rng rng(5);
  SynthConfig sc;
  sc.modules = 12;
  sc.terminals = 0;
  sc.nets = 0;
  const auto inst = synth_instance(sc, rng);
  const auto plan = random_floorplan(inst, 80, 80, rng);
  const double base = total_overlap(inst, plan);

  // translate everything: both W and D unchanged (no pads in this instance)
  Floorplan moved = plan;
  for (double& x : moved.x) x += 17.25;
  CHECK(total_overlap(inst, moved) == doctest::Approx(base).epsilon(1e-12));

  const auto netted = make_instance({{2, 2}, {2, 2}, {2, 2}}, {}, {{0, 1}, {1, 2}});
  const auto netted_plan = make_plan({{0, 0}, {5, 3}, {9, 1}});
  Floorplan netted_moved = netted_plan;
  for (double& x : netted_moved.x) x += 17.25;
  CHECK(hpwl(netted, netted_moved.x, netted_moved.y, netted_moved.r) ==
        doctest::Approx(hpwl(netted, netted_plan.x, netted_plan.y, netted_plan.r))
            .epsilon(1e-12));

  // relabel: swap two modules (same dims set, swapped placements)
  std::vector<Module> swapped_modules = inst.modules();
  std::swap(swapped_modules[2].width, swapped_modules[7].width);
  std::swap(swapped_modules[2].height, swapped_modules[7].height);
  const ProblemInstance relabeled(swapped_modules, {}, {});
  Floorplan splan = plan;
  std::swap(splan.x[2], splan.x[7]);
  std::swap(splan.y[2], splan.y[7]);
  std::swap(splan.r[2], splan.r[7]);
  CHECK(total_overlap(relabeled, splan) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("zero overlap classification matches the geometric oracle") {
  Rng rng(9);
  for (int t = 0; t < 300; ++t) {
    SynthConfig sc;
    sc.modules = 8;
    sc.terminals = 0;
    sc.nets = 0;
    const auto inst = synth_instance(sc, rng);
    const double side = rng.uniform(60, 260);
    const auto plan = random_floorplan(inst, side, side, rng);
    CHECK((total_overlap(inst, plan) == 0) == has_zero_geometric_overlap(inst, plan));
  }
}

TEST_CASE("boundary terms") {
  const OutlineSpec outline{10, 10, 1, 0};
  const BoundaryTerms a = boundary_terms({4, 2}, 1, 5, outline);
  CHECK(a.left == doctest::Approx(1.0));
  CHECK(a.right == doctest::Approx(0.0));

  const BoundaryTerms inside = boundary_terms({4, 2}, 5, 5, outline);
  CHECK(inside.left == 0.0);
  CHECK(inside.right == 0.0);
  CHECK(inside.bottom == 0.0);
  CHECK(inside.top == 0.0);

  const BoundaryTerms top = boundary_terms({2, 2}, 5, 10, outline);
  CHECK(top.top == doctest::Approx(1.0));
}

TEST_CASE("boundary sums and smoothed sums") {
  const OutlineSpec outline{10, 10, 1, 0};
  const auto inst = make_instance({{4, 2}});

  CHECK(boundary_sum(inst, make_plan({{5, 5}}), outline) == 0.0);
  CHECK(smooth_boundary(inst, make_plan({{5, 5}}), outline) == 0.0);

  // single violation of 1: module center x = 1, half width 2
  CHECK(boundary_sum(inst, make_plan({{1, 5}}), outline) == doctest::Approx(1.0));
  CHECK(smooth_boundary(inst, make_plan({{1, 5}}), outline) == doctest::Approx(1.0));

  // violation of 2
  CHECK(boundary_sum(inst, make_plan({{0, 5}}), outline) == doctest::Approx(2.0));
  CHECK(smooth_boundary(inst, make_plan({{0, 5}}), outline) == doctest::Approx(4.0));
}

TEST_CASE("boundary zero iff smoothed zero iff inside") {
  Rng rng(21);
  const OutlineSpec outline{60, 60, 1, 0};
  for (int t = 0; t < 300; ++t) {
    SynthConfig sc;
    sc.modules = 6;
    sc.terminals = 0;
    sc.nets = 0;
    const auto inst = synth_instance(sc, rng);
    const auto plan = random_floorplan(inst, 75, 75, rng);
    const double b = boundary_sum(inst, plan, outline);
    const double bs = smooth_boundary(inst, plan, outline);
    CHECK((b == 0) == (bs == 0));
    CHECK((b == 0) == inside_outline(inst, plan, outline));
  }
}

TEST_CASE("global objective composition") {
  const OutlineSpec outline{100, 100, 1, 0};

  // legal plan: f reduces to alpha W
  const auto inst = make_instance({{2, 2}, {2, 2}}, {}, {{0, 1}});
  const auto legal = make_plan({{10, 10}, {20, 10}});
  const ObjectiveBreakdown bd = global_objective(inst, legal, {}, outline);
  CHECK(bd.overlap_area == 0.0);
  CHECK(bd.outline_violation == 0.0);
  CHECK(bd.f == doctest::Approx(bd.wirelength));

  // alpha=1, lambda=20, mu=100 with W=10, D=4, B=0 -> 10 + 20*2 = 50
  const auto two = make_instance({{2, 2}, {2, 2}}, {{0, 50}, {10, 50}}, {{~0, ~1}});
  const auto co = make_plan({{30, 50}, {30, 50}});
  const ObjectiveBreakdown bd2 = global_objective(two, co, {}, outline);
  CHECK(bd2.wirelength == doctest::Approx(10.0));
  CHECK(bd2.overlap_area == doctest::Approx(4.0));
  CHECK(bd2.f == doctest::Approx(50.0));

  // alpha=0 variant with lambda=1, D=9: overlap 3x3 squares fully coincident
  PenaltyWeights w;
  w.wirelength = 0;
  w.overlap = 1;
  const auto three = make_instance({{3, 3}, {3, 3}});
  const ObjectiveBreakdown bd3 =
      global_objective(three, make_plan({{30, 50}, {30, 50}}), w, outline);
  CHECK(bd3.f == doctest::Approx(3.0));
}

TEST_CASE("legalization objective") {
  const OutlineSpec outline{10, 10, 1, 0};
  const auto inst = make_instance({{2, 2}, {2, 2}});

  CHECK(legalization_objective(inst, make_plan({{2, 2}, {6, 6}}), {}, outline) == 0.0);

  // D=2, smoothed violation 0.5 with lambda0=1, mu0=10 -> 7
  const double b = std::sqrt(0.5);
  const auto plan = make_plan({{1 - b, 5}, {1 - b + 1, 5}});  // x-overlap 1, y containment 2
  const ObjectiveBreakdown bd = global_objective(inst, plan, {}, outline);
  CHECK(bd.overlap_area == doctest::Approx(2.0));
  CHECK(bd.outline_violation_sq == doctest::Approx(0.5));
  CHECK(bd.f_legal == doctest::Approx(7.0));

  // D=0, smoothed violation 1, mu0=10 -> 10
  const auto poke = make_plan({{0, 5}, {6, 5}});  // left hinge of the first module = 1
  const ObjectiveBreakdown bd2 = global_objective(inst, poke, {}, outline);
  CHECK(bd2.overlap_area == 0.0);
  CHECK(bd2.outline_violation_sq == doctest::Approx(1.0));
  CHECK(bd2.f_legal == doctest::Approx(10.0));
}

TEST_CASE("subgradient units for wirelength and hinges") {
  const OutlineSpec outline{100, 100, 1, 0};

  // isolated in-outline module on no nets: zero subgradient
  {
    const auto inst = make_instance({{2, 2}});
    const auto plan = make_plan({{50, 50}});
    std::vector<double> gx(1), gy(1);
    subgradient_f(inst, plan, {}, outline, gx, gy);
    CHECK(gx[0] == 0.0);
    CHECK(gy[0] == 0.0);
  }

  // HPWL unit: +1 to the argmax module, -1 to the argmin
  {
    const auto inst = make_instance({{1, 1}, {1, 1}}, {}, {{0, 1}});
    const auto plan = make_plan({{0, 50}, {3, 50}});
    PenaltyWeights w;
    w.overlap = 0;
    w.outline = 0;
    std::vector<double> gx(2), gy(2);
    subgradient_f(inst, plan, w, outline, gx, gy);
    CHECK(gx[1] == doctest::Approx(1.0));
    CHECK(gx[0] == doctest::Approx(-1.0));
  }

  // squared-hinge derivative: violation b2(x)=1 gives d(smoothed)/dx = 2
  {
    const auto inst = make_instance({{2, 2}});
    const auto plan = make_plan({{100, 50}});  // right hinge = 1 + 100 - 100 = 1
    PenaltyWeights w;
    w.legal_overlap = 0;
    w.legal_outline = 1;
    std::vector<double> gx(1), gy(1);
    subgradient_f_legal(inst, plan, w, outline, gx, gy);
    CHECK(gx[0] == doctest::Approx(2.0));
  }
}

TEST_CASE("pads absorb the extreme unit") {
  const OutlineSpec outline{100, 100, 1, 0};
  const auto inst = make_instance({{1, 1}}, {{50, 0}, {-50, 0}}, {{0, ~0, ~1}});
  const auto plan = make_plan({{0, 0}});
  PenaltyWeights w;
  w.overlap = 0;
  w.outline = 0;
  std::vector<double> gx(1), gy(1);
  subgradient_f(inst, plan, w, outline, gx, gy);
  CHECK(gx[0] == 0.0);  // both extremes sit on pads
}

TEST_CASE("evaluator matches the standalone operations") {
  Rng rng(31);
  for (int t = 0; t < 60; ++t) {
    SynthConfig sc;
    sc.modules = 4 + (t % 17);
    sc.terminals = 5;
    sc.nets = sc.modules * 2;
    const auto inst = synth_instance(sc, rng);
    const OutlineSpec outline = outline_from_ratio(inst.total_module_area(), 1.0, 0.15);
    const auto plan = random_floorplan(inst, 1.2 * outline.width, 1.2 * outline.height, rng);

    ObjectiveEvaluator eval(inst, outline);
    eval.set_orientations(plan.r);
    const ObjectiveBreakdown via_eval = eval.breakdown(pack(plan));
    const ObjectiveBreakdown direct = global_objective(inst, plan, {}, outline);
    CHECK(via_eval.wirelength == doctest::Approx(direct.wirelength).epsilon(1e-12));
    CHECK(via_eval.overlap_area == doctest::Approx(direct.overlap_area).epsilon(1e-12));
    CHECK(via_eval.outline_violation ==
          doctest::Approx(direct.outline_violation).epsilon(1e-12));
    CHECK(via_eval.f == doctest::Approx(direct.f).epsilon(1e-12));
    CHECK(via_eval.f_legal == doctest::Approx(direct.f_legal).epsilon(1e-12));
  }
}

TEST_CASE("subgradients agree with central differences at a constructed smooth point") {
  // three modules: a middle-branch overlap pair, one outline violator, one net
  const auto inst = make_instance({{4, 4}, {6, 2}, {3, 3}}, {{0, 0}}, {{0, 2, ~0}});
  const OutlineSpec outline{20, 20, 1, 0};
  const auto plan = make_plan({{3.1, 4.2}, {6.3, 4.9}, {19.7, 11.3}});
  // pair (0,1): dx=3.2 in (1,5), dy=0.7 in (... containment |4-2|/2=1: 0.7 < 1 containment in y)
  // module 2: right hinge = 1.5 + 19.7 - 20 = 1.2 > 0; all other hinges clear

  ObjectiveEvaluator eval(inst, outline);
  eval.set_orientations(plan.r);
  std::vector<double> u = pack(plan);
  std::vector<double> g(u.size()), g_legal(u.size());
  eval.value_and_subgradient(u, g);
  eval.legal_value_and_subgradient(u, g_legal);

  const double h = 1e-6;
  for (std::size_t c = 0; c < u.size(); ++c) {
    const double keep = u[c];
    u[c] = keep + h;
    const ObjectiveBreakdown hi = eval.breakdown(u);
    u[c] = keep - h;
    const ObjectiveBreakdown lo = eval.breakdown(u);
    u[c] = keep;
    const double fd = (hi.f - lo.f) / (2 * h);
    const double fd_legal = (hi.f_legal - lo.f_legal) / (2 * h);
    CHECK(std::abs(fd - g[c]) <= 1e-4 * std::max({1.0, std::abs(fd), std::abs(g[c])}));
    CHECK(std::abs(fd_legal - g_legal[c]) <=
          1e-4 * std::max({1.0, std::abs(fd_legal), std::abs(g_legal[c])}));
  }
}
