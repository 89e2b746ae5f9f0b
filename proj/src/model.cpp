#include "mvfp/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mvfp {

ProblemInstance::ProblemInstance(std::vector<Module> modules, std::vector<Pad> pads,
                                 std::vector<Net> nets)
    : modules_(std::move(modules)), pads_(std::move(pads)), nets_(std::move(nets)) {
  if (modules_.empty()) throw std::invalid_argument("instance needs at least one module");
  for (std::size_t i = 0; i < modules_.size(); ++i) {
    const Module& m = modules_[i];
    if (m.id != static_cast<int>(i))
      throw std::invalid_argument("module ids must be dense and ordered");
    if (!(m.width > 0) || !(m.height > 0))
      throw std::invalid_argument("module '" + m.name + "' has non-positive dimensions");
    total_area_ += m.width * m.height;
  }
  for (std::size_t i = 0; i < pads_.size(); ++i) {
    const Pad& p = pads_[i];
    if (p.id != static_cast<int>(i))
      throw std::invalid_argument("pad ids must be dense and ordered");
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw std::invalid_argument("pad '" + p.name + "' has non-finite coordinates");
  }
  for (const Net& net : nets_) {
    if (net.pins.empty()) throw std::invalid_argument("net without endpoints");
    for (const PinRef& pin : net.pins) {
      const int limit = pin.kind == PinRef::Kind::module ? static_cast<int>(modules_.size())
                                                         : static_cast<int>(pads_.size());
      if (pin.index < 0 || pin.index >= limit)
        throw std::invalid_argument("net references an unknown endpoint");
    }
    for (std::size_t a = 0; a < net.pins.size(); ++a)
      for (std::size_t b = a + 1; b < net.pins.size(); ++b)
        if (net.pins[a].kind == net.pins[b].kind && net.pins[a].index == net.pins[b].index)
          throw std::invalid_argument("net lists an endpoint twice");
  }
}

void Floorplan::validate(std::size_t module_count) const {
  if (x.size() != module_count || y.size() != module_count || r.size() != module_count)
    throw std::invalid_argument("floorplan vectors must all have one entry per module");
  for (std::size_t i = 0; i < module_count; ++i)
    if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
      throw std::invalid_argument("floorplan coordinates must be finite");
}

double total_module_area(const ProblemInstance& instance) {
  return instance.total_module_area();
}

double bounding_area(const ProblemInstance& instance, const Floorplan& plan) {
  double lo_x = std::numeric_limits<double>::infinity();
  double lo_y = std::numeric_limits<double>::infinity();
  double hi_x = -lo_x;
  double hi_y = -lo_y;
  for (std::size_t i = 0; i < instance.module_count(); ++i) {
    const Dims d = effective_dims(instance.modules()[i], plan.r[i]);
    lo_x = std::min(lo_x, plan.x[i] - d.w / 2);
    hi_x = std::max(hi_x, plan.x[i] + d.w / 2);
    lo_y = std::min(lo_y, plan.y[i] - d.h / 2);
    hi_y = std::max(hi_y, plan.y[i] + d.h / 2);
  }
  return (hi_x - lo_x) * (hi_y - lo_y);
}

double whitespace_ratio(const ProblemInstance& instance, const Floorplan& plan) {
  const double a = instance.total_module_area();
  return (bounding_area(instance, plan) - a) / a;
}

OutlineSpec outline_from_ratio(double total_area, double aspect_ratio, double whitespace) {
  if (!(total_area > 0)) throw std::invalid_argument("outline needs a positive total area");
  if (!(aspect_ratio > 0)) throw std::invalid_argument("outline needs a positive aspect ratio");
  if (whitespace < 0) throw std::invalid_argument("whitespace ratio must be non-negative");
  OutlineSpec spec;
  spec.width = std::sqrt((1.0 + whitespace) * total_area / aspect_ratio);
  spec.height = std::sqrt((1.0 + whitespace) * total_area * aspect_ratio);
  spec.aspect_ratio = aspect_ratio;
  spec.whitespace = whitespace;
  return spec;
}

bool has_zero_geometric_overlap(const ProblemInstance& instance, const Floorplan& plan) {
  const std::size_t n = instance.module_count();
  for (std::size_t i = 0; i < n; ++i) {
    const Dims di = effective_dims(instance.modules()[i], plan.r[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      const Dims dj = effective_dims(instance.modules()[j], plan.r[j]);
      // packed seams touch only up to center/corner rounding; intersections
      // below the relative slack do not count as overlap
      const double ox = std::min(plan.x[i] + di.w / 2, plan.x[j] + dj.w / 2) -
                        std::max(plan.x[i] - di.w / 2, plan.x[j] - dj.w / 2);
      if (ox <= 1e-12 * (di.w + dj.w)) continue;
      const double oy = std::min(plan.y[i] + di.h / 2, plan.y[j] + dj.h / 2) -
                        std::max(plan.y[i] - di.h / 2, plan.y[j] - dj.h / 2);
      if (oy > 1e-12 * (di.h + dj.h)) return false;
    }
  }
  return true;
}

bool inside_outline(const ProblemInstance& instance, const Floorplan& plan,
                    const OutlineSpec& outline) {
  const double slack = 1e-9 * (outline.width + outline.height);
  for (std::size_t i = 0; i < instance.module_count(); ++i) {
    const Dims d = effective_dims(instance.modules()[i], plan.r[i]);
    if (plan.x[i] - d.w / 2 < -slack) return false;
    if (plan.x[i] + d.w / 2 > outline.width + slack) return false;
    if (plan.y[i] - d.h / 2 < -slack) return false;
    if (plan.y[i] + d.h / 2 > outline.height + slack) return false;
  }
  return true;
}

}  // namespace mvfp
