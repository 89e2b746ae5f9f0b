#pragma once

#include <vector>

#include "mvfp/model.hpp"

namespace mvfp {

// Pairwise ordering relations derived from a (near-legal) placement:
// left_of[i] holds the modules left of i, below[i] those below i. Either
// relation graph is acyclic: edges always point toward the module with the
// lexicographically larger (corner, center, id) key on the chosen axis.
struct RelationSets {
  std::vector<std::vector<int>> left_of;  // I_i
  std::vector<std::vector<int>> below;    // J_i

  bool is_left_of(int i, int j) const;  // i in left_of[j]
  bool is_below(int i, int j) const;
};

// Classifies every unordered pair:
//  - y-extent overlap, x separated  -> x relation by lower-left order;
//  - x-extent overlap, y separated  -> y relation;
//  - separated on both axes         -> the axis with the larger
//    center-distance-to-extent ratio;
//  - overlapping on both axes       -> the axis needing the smaller
//    separation displacement, ties x first, direction by corner/center/id.
RelationSets build_relations(const ProblemInstance& instance, const Floorplan& plan);

// Packs the placement toward the origin along the relation graph: modules in
// ascending lower-left-x order take x'_i = max over left_of[i] of
// (x'_j + w_j) (0 when unconstrained), then the same in y with the heights.
// Orientations are kept; the output has no geometric overlap.
Floorplan legalize_graph(const ProblemInstance& instance, const Floorplan& plan);

}  // namespace mvfp
