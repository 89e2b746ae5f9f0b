#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "mvfp/rng.hpp"

namespace fs = std::filesystem;
using mvfp::Rng;

// Deterministic generator for GSRC-format hard-block benchmark fixtures.
// The instance names and module/terminal/net counts follow the familiar
// n10..n300 suite; dimensions and netlists are synthetic.

namespace {

struct BenchSpec {
  const char* name;
  int modules;
  int terminals;
  int nets;
};

constexpr BenchSpec kSuite[] = {
    {"n10", 10, 69, 118},    {"n30", 30, 212, 349},   {"n50", 50, 209, 485},
    {"n100", 100, 334, 885}, {"n200", 200, 564, 1585}, {"n300", 300, 569, 1893},
};

std::uint64_t fnv1a(const char* text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char* c = text; *c; ++c) {
    h ^= static_cast<unsigned char>(*c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

// Blocks come from a guillotine slicing of a square die, shrunk a little per
// side. Sliced dimensions tile by construction, so moderate whitespace
// targets are honestly feasible, matching the character of the original
// hard-block suites.
void slice_die(Rng& rng, int count, std::vector<int>& width, std::vector<int>& height) {
  struct Rect {
    double w, h;
  };
  const double side = 64.0 * std::sqrt(static_cast<double>(count));
  std::vector<Rect> rects{{side, side}};
  while (static_cast<int>(rects.size()) < count) {
    std::size_t biggest = 0;
    for (std::size_t i = 1; i < rects.size(); ++i)
      if (rects[i].w * rects[i].h > rects[biggest].w * rects[biggest].h) biggest = i;
    Rect r = rects[biggest];
    const double at = rng.uniform(0.35, 0.65);
    const bool vertical = r.w > r.h ? true : (r.h > r.w ? false : rng.uniform() < 0.5);
    Rect a = r, b = r;
    if (vertical) {
      a.w = r.w * at;
      b.w = r.w - a.w;
    } else {
      a.h = r.h * at;
      b.h = r.h - a.h;
    }
    rects[biggest] = a;
    rects.push_back(b);
  }
  width.resize(count);
  height.resize(count);
  for (int i = 0; i < count; ++i) {
    width[i] = std::max(8, static_cast<int>(rects[i].w * rng.uniform(0.90, 0.99)));
    height[i] = std::max(8, static_cast<int>(rects[i].h * rng.uniform(0.90, 0.99)));
  }
}

void generate(const fs::path& dir, const BenchSpec& spec, std::uint64_t seed) {
  Rng rng = Rng::stream(seed, 0xBE, fnv1a(spec.name));

  std::vector<int> width, height;
  slice_die(rng, spec.modules, width, height);
  long long area = 0;
  for (int i = 0; i < spec.modules; ++i)
    area += static_cast<long long>(width[i]) * height[i];
  const int ring = static_cast<int>(std::sqrt(static_cast<double>(area)) * 1.12) + 1;

  std::string blocks;
  blocks += "UCSC blocks 1.0\n";
  blocks += "# synthetic hard-block instance '" + std::string(spec.name) + "'\n\n";
  blocks += "NumSoftRectangularBlocks : 0\n";
  blocks += "NumHardRectilinearBlocks : " + std::to_string(spec.modules) + "\n";
  blocks += "NumTerminals : " + std::to_string(spec.terminals) + "\n\n";
  for (int i = 0; i < spec.modules; ++i) {
    const std::string w = std::to_string(width[i]), h = std::to_string(height[i]);
    blocks += "sb" + std::to_string(i) + " hardrectilinear 4 (0, 0) (0, " + h + ") (" + w +
              ", " + h + ") (" + w + ", 0)\n";
  }
  blocks += "\n";
  for (int t = 0; t < spec.terminals; ++t) blocks += "p" + std::to_string(t) + " terminal\n";
  write_file(dir / (std::string(spec.name) + ".blocks"), blocks);

  std::string pl;
  pl += "UCLA pl 1.0\n\n";
  for (int i = 0; i < spec.modules; ++i) pl += "sb" + std::to_string(i) + " 0 0\n";
  for (int t = 0; t < spec.terminals; ++t) {
    int x = 0, y = 0;
    const int side = rng.uniform_int(0, 3);
    const int along = rng.uniform_int(0, ring);
    switch (side) {
      case 0: x = along; y = 0; break;
      case 1: x = ring; y = along; break;
      case 2: x = ring - along; y = ring; break;
      default: x = 0; y = ring - along; break;
    }
    pl += "p" + std::to_string(t) + " " + std::to_string(x) + " " + std::to_string(y) + "\n";
  }
  write_file(dir / (std::string(spec.name) + ".pl"), pl);

  // degree mix tuned to the familiar ~2.1 pins per net; the first nets pin
  // one module each so nothing is disconnected
  std::string nets;
  std::string body;
  long pins = 0;
  const int endpoints = spec.modules + spec.terminals;
  for (int k = 0; k < spec.nets; ++k) {
    const double draw = rng.uniform();
    const int degree = draw < 0.92 ? 2 : (draw < 0.98 ? 3 : rng.uniform_int(4, 5));
    std::vector<int> chosen;
    if (k < spec.modules) chosen.push_back(k);
    while (static_cast<int>(chosen.size()) < degree) {
      const int pick = rng.uniform_int(0, endpoints - 1);
      bool seen = false;
      for (int c : chosen) seen = seen || c == pick;
      if (!seen) chosen.push_back(pick);
    }
    body += "NetDegree : " + std::to_string(degree) + "\n";
    for (int c : chosen) {
      body += (c < spec.modules ? "sb" + std::to_string(c)
                                : "p" + std::to_string(c - spec.modules)) +
              " B\n";
      ++pins;
    }
  }
  nets += "UCLA nets 1.0\n\n";
  nets += "NumNets : " + std::to_string(spec.nets) + "\n";
  nets += "NumPins : " + std::to_string(pins) + "\n\n";
  nets += body;
  write_file(dir / (std::string(spec.name) + ".nets"), nets);

  write_file(dir / (std::string(spec.name) + ".aux"),
             "RowBasedPlacement : " + std::string(spec.name) + ".blocks " + spec.name +
                 ".nets " + spec.name + ".pl\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic GSRC-format benchmark fixtures"};
  std::string out_dir = "benchmarks";
  std::uint64_t seed = 7;
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--seed", seed, "Generator seed");
  CLI11_PARSE(app, argc, argv);

  try {
    fs::create_directories(out_dir);
    for (const BenchSpec& spec : kSuite) {
      generate(out_dir, spec, seed);
      std::cout << spec.name << ": " << spec.modules << " modules, " << spec.terminals
                << " terminals, " << spec.nets << " nets\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
