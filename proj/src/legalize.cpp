#include "mvfp/legalize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mvfp {

namespace {

struct Box {
  double llx = 0, lly = 0;  // lower-left corner
  double cx = 0, cy = 0;    // center
  double w = 0, h = 0;      // effective extents
};

// strict order on (corner, center, id); relations point from smaller to larger
bool key_less_x(const Box& a, const Box& b, int ia, int ib) {
  if (a.llx != b.llx) return a.llx < b.llx;
  if (a.cx != b.cx) return a.cx < b.cx;
  return ia < ib;
}

bool key_less_y(const Box& a, const Box& b, int ia, int ib) {
  if (a.lly != b.lly) return a.lly < b.lly;
  if (a.cy != b.cy) return a.cy < b.cy;
  return ia < ib;
}

std::vector<Box> make_boxes(const ProblemInstance& instance, const Floorplan& plan) {
  std::vector<Box> boxes(instance.module_count());
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const Dims d = effective_dims(instance.modules()[i], plan.r[i]);
    boxes[i] = {plan.x[i] - d.w / 2, plan.y[i] - d.h / 2, plan.x[i], plan.y[i], d.w, d.h};
  }
  return boxes;
}

}  // namespace

bool RelationSets::is_left_of(int i, int j) const {
  const auto& set = left_of[j];
  return std::find(set.begin(), set.end(), i) != set.end();
}

bool RelationSets::is_below(int i, int j) const {
  const auto& set = below[j];
  return std::find(set.begin(), set.end(), i) != set.end();
}

RelationSets build_relations(const ProblemInstance& instance, const Floorplan& plan) {
  const std::size_t n = instance.module_count();
  const std::vector<Box> boxes = make_boxes(instance, plan);

  RelationSets rel;
  rel.left_of.resize(n);
  rel.below.resize(n);

  auto add_x = [&](int i, int j) {  // directed by the x key
    if (key_less_x(boxes[i], boxes[j], i, j))
      rel.left_of[j].push_back(i);
    else
      rel.left_of[i].push_back(j);
  };
  auto add_y = [&](int i, int j) {
    if (key_less_y(boxes[i], boxes[j], i, j))
      rel.below[j].push_back(i);
    else
      rel.below[i].push_back(j);
  };

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Box& a = boxes[i];
      const Box& b = boxes[j];
      // Signed interval overlaps from the corners. Centers round-trip through
      // llx + w/2, so seams of a packed input touch only up to rounding; the
      // relative tolerance keeps a touching pair classified as separated.
      const double ox = std::min(a.llx + a.w, b.llx + b.w) - std::max(a.llx, b.llx);
      const double oy = std::min(a.lly + a.h, b.lly + b.h) - std::max(a.lly, b.lly);
      const double tol_x = 1e-12 * (a.w + b.w);
      const double tol_y = 1e-12 * (a.h + b.h);
      const bool sep_x = ox <= tol_x;  // separated or touching
      const bool sep_y = oy <= tol_y;
      const int ii = static_cast<int>(i), jj = static_cast<int>(j);
      if (!sep_x && !sep_y) {
        // residual overlap: separate along the axis of the smaller depth
        if (ox <= oy)
          add_x(ii, jj);
        else
          add_y(ii, jj);
      } else if (!sep_y) {
        add_x(ii, jj);
      } else if (!sep_x) {
        add_y(ii, jj);
      } else {
        // Separated on both axes. A touching pair keeps its contact axis:
        // that contact is what supports packed positions. Otherwise the
        // axis with the larger center-distance-to-extent ratio wins.
        const bool contact_x = ox >= -tol_x;
        const bool contact_y = oy >= -tol_y;
        if (contact_x && !contact_y) {
          add_x(ii, jj);
        } else if (contact_y && !contact_x) {
          add_y(ii, jj);
        } else {
          const double ratio_x = std::abs(a.cx - b.cx) / ((a.w + b.w) / 2);
          const double ratio_y = std::abs(a.cy - b.cy) / ((a.h + b.h) / 2);
          if (ratio_x >= ratio_y)
            add_x(ii, jj);
          else
            add_y(ii, jj);
        }
      }
    }
  }
  return rel;
}

Floorplan legalize_graph(const ProblemInstance& instance, const Floorplan& plan) {
  const std::size_t n = instance.module_count();
  const RelationSets rel = build_relations(instance, plan);
  const std::vector<Box> boxes = make_boxes(instance, plan);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  // x pass: ascending corner order is a linear extension of the x relations
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return key_less_x(boxes[a], boxes[b], a, b); });
  std::vector<double> llx(n, 0);
  for (int i : order) {
    double pos = 0;
    for (int j : rel.left_of[i]) pos = std::max(pos, llx[j] + boxes[j].w);
    llx[i] = pos;
  }

  // y pass
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return key_less_y(boxes[a], boxes[b], a, b); });
  std::vector<double> lly(n, 0);
  for (int i : order) {
    double pos = 0;
    for (int j : rel.below[i]) pos = std::max(pos, lly[j] + boxes[j].h);
    lly[i] = pos;
  }

  Floorplan out = plan;
  for (std::size_t i = 0; i < n; ++i) {
    out.x[i] = llx[i] + boxes[i].w / 2;
    out.y[i] = lly[i] + boxes[i].h / 2;
  }
  return out;
}

}  // namespace mvfp
