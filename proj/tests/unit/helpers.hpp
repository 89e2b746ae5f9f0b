#pragma once

#include <vector>

#include "mvfp/model.hpp"

namespace mvfp::test {

// Instance with the given module dimensions, optional pads, and nets given
// as lists of endpoint indices (non-negative: module id, negative: ~pad id).
inline ProblemInstance make_instance(const std::vector<std::pair<double, double>>& dims,
                                     const std::vector<std::pair<double, double>>& pad_xy = {},
                                     const std::vector<std::vector<int>>& net_refs = {}) {
  std::vector<Module> modules;
  for (std::size_t i = 0; i < dims.size(); ++i)
    modules.push_back({static_cast<int>(i), dims[i].first, dims[i].second,
                       "m" + std::to_string(i)});
  std::vector<Pad> pads;
  for (std::size_t i = 0; i < pad_xy.size(); ++i)
    pads.push_back({static_cast<int>(i), pad_xy[i].first, pad_xy[i].second,
                    "p" + std::to_string(i)});
  std::vector<Net> nets;
  for (const auto& refs : net_refs) {
    Net net;
    for (int ref : refs) {
      if (ref >= 0)
        net.pins.push_back({PinRef::Kind::module, ref, 0, 0});
      else
        net.pins.push_back({PinRef::Kind::pad, ~ref, 0, 0});
    }
    nets.push_back(std::move(net));
  }
  return ProblemInstance(std::move(modules), std::move(pads), std::move(nets));
}

// Plan at the given centers, all orientation codes zero unless given.
inline Floorplan make_plan(const std::vector<std::pair<double, double>>& centers,
                           const std::vector<int>& codes = {}) {
  Floorplan plan;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    plan.x.push_back(centers[i].first);
    plan.y.push_back(centers[i].second);
    plan.r.push_back(Orientation(codes.empty() ? 0 : codes[i]));
  }
  return plan;
}

}  // namespace mvfp::test
