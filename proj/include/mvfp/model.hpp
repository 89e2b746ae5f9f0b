#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvfp {

// Clockwise rotation code: angle = code * pi/2. Odd codes swap the extents.
class Orientation {
 public:
  constexpr Orientation() = default;
  constexpr explicit Orientation(int code) : code_(static_cast<std::uint8_t>(code)) {
    if (code < 0 || code > 3) throw std::invalid_argument("orientation code must be in {0,1,2,3}");
  }

  constexpr int code() const { return code_; }
  constexpr bool swaps_axes() const { return (code_ & 1) != 0; }

  friend constexpr bool operator==(Orientation a, Orientation b) { return a.code_ == b.code_; }

 private:
  std::uint8_t code_ = 0;
};

struct Module {
  int id = 0;
  double width = 0;
  double height = 0;
  std::string name;

  double area() const { return width * height; }
};

struct Pad {
  int id = 0;
  double x = 0;
  double y = 0;
  std::string name;
};

// One endpoint of a net: a module (pin at the center unless an offset was
// given) or a fixed pad. Offsets are percent of the effective half-extent
// and are applied after orientation.
struct PinRef {
  enum class Kind : std::uint8_t { module, pad };
  Kind kind = Kind::module;
  int index = 0;
  double offset_x_pct = 0;
  double offset_y_pct = 0;
};

struct Net {
  std::vector<PinRef> pins;
};

class ProblemInstance {
 public:
  ProblemInstance(std::vector<Module> modules, std::vector<Pad> pads, std::vector<Net> nets);

  const std::vector<Module>& modules() const { return modules_; }
  const std::vector<Pad>& pads() const { return pads_; }
  const std::vector<Net>& nets() const { return nets_; }
  std::size_t module_count() const { return modules_.size(); }

  // sum of module areas (the A of the whitespace-ratio definition)
  double total_module_area() const { return total_area_; }

 private:
  std::vector<Module> modules_;
  std::vector<Pad> pads_;
  std::vector<Net> nets_;
  double total_area_ = 0;
};

// Module center coordinates plus orientation codes. Lower-left corners are
// derived explicitly where legalization needs them.
struct Floorplan {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<Orientation> r;

  // throws std::invalid_argument on size mismatch or non-finite coordinates
  void validate(std::size_t module_count) const;
};

struct OutlineSpec {
  double width = 0;        // W*
  double height = 0;       // H*
  double aspect_ratio = 1; // R = H*/W*
  double whitespace = 0;   // gamma used to size the outline
};

struct Dims {
  double w = 0;
  double h = 0;
};

// Effective extents under rotation: odd codes swap width and height.
inline Dims effective_dims(const Module& m, Orientation r) {
  return r.swaps_axes() ? Dims{m.height, m.width} : Dims{m.width, m.height};
}

double total_module_area(const ProblemInstance& instance);

// Area of the axis-aligned bounding box of all module rectangles.
double bounding_area(const ProblemInstance& instance, const Floorplan& plan);

// (S - A) / A with S the bounding-box area.
double whitespace_ratio(const ProblemInstance& instance, const Floorplan& plan);

// W* = sqrt((1+gamma) A / R), H* = sqrt((1+gamma) A R).
OutlineSpec outline_from_ratio(double total_area, double aspect_ratio, double whitespace);

// True geometric legality: no pair of module rectangles intersects with
// positive area (shared edges allowed).
bool has_zero_geometric_overlap(const ProblemInstance& instance, const Floorplan& plan);

// All module rectangles inside [0,W*]x[0,H*], up to a relative slack of
// 1e-9 * (W* + H*) to absorb accumulated rounding in packed placements.
bool inside_outline(const ProblemInstance& instance, const Floorplan& plan,
                    const OutlineSpec& outline);

}  // namespace mvfp
