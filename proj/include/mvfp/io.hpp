#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mvfp/model.hpp"

namespace mvfp {

// Parse failure with file/line context; the CLI maps it to exit code 2.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string_view file, int line, std::string_view message);
  const std::string& file() const { return file_; }
  int line() const { return line_; }

 private:
  std::string file_;
  int line_ = 0;
};

struct ParsedBlocks {
  std::vector<Module> modules;              // ids dense in file order
  std::vector<std::string> terminal_names;  // file order
};

// Bookshelf .blocks: hard rectangular blocks (4-vertex axis-aligned
// outlines) and terminals. Soft or rectilinear entries are rejected.
ParsedBlocks parse_blocks(std::string_view text, std::string_view filename = "<blocks>");

// Bookshelf .nets: NetDegree groups resolved against block/terminal names.
// Optional "%x %y" pin offsets are percent of the effective half-extent.
std::vector<Net> parse_nets(std::string_view text, const ParsedBlocks& blocks,
                            std::string_view filename = "<nets>");

struct PlacementEntry {
  double x = 0;
  double y = 0;
  std::optional<Orientation> orientation;
};

// Bookshelf .pl: "name x y" with an optional ": N|E|S|W" orientation tail.
// Terminal lines give fixed pad coordinates; module lines are placement
// seeds (lower-left corners).
std::map<std::string, PlacementEntry> parse_pl(std::string_view text,
                                               std::string_view filename = "<pl>");

struct BenchmarkFiles {
  std::filesystem::path blocks;
  std::filesystem::path nets;
  std::filesystem::path pl;
};

// .aux: one "<tag> : a.blocks a.nets a.pl" line; paths resolve relative to
// the .aux location.
BenchmarkFiles parse_aux(const std::filesystem::path& aux_path);

ProblemInstance assemble_instance(const ParsedBlocks& blocks, std::vector<Net> nets,
                                  const std::map<std::string, PlacementEntry>& placement,
                                  bool normalize_terminals = false);

ProblemInstance load_instance(const std::filesystem::path& blocks_path,
                              const std::filesystem::path& nets_path,
                              const std::filesystem::path& pl_path,
                              bool normalize_terminals = false);
ProblemInstance load_instance_aux(const std::filesystem::path& aux_path,
                                  bool normalize_terminals = false);

// Module placements from parsed .pl entries (requires orientation tails or
// unrotated modules); inverse of write_pl.
Floorplan placement_to_floorplan(const ProblemInstance& instance,
                                 const std::map<std::string, PlacementEntry>& placement);

// Lower-left module coordinates with orientation tails, plus the pads.
std::string write_pl(const ProblemInstance& instance, const Floorplan& plan);

// One labelled rectangle per module with an orientation tick, pads as
// crosses, optional outline frame.
std::string render_svg(const ProblemInstance& instance, const Floorplan& plan,
                       const OutlineSpec* outline = nullptr);

struct RunRecord {
  std::string instance;
  std::string mode;  // "fixed-outline" | "min-area"
  double aspect_ratio = 1;
  double gamma = 0;
  std::uint64_t seed = 0;
  bool legal = false;
  double hpwl = 0;
  double area = 0;
  std::optional<double> cost;
  std::optional<double> seconds;
};

// Fixed header "instance,mode,R,gamma,seed,legal,hpwl,area,cost,seconds";
// one row per record plus one summary row per (instance, mode, R, gamma)
// group whose legal column carries the success rate in percent.
std::string write_metrics_csv(std::span<const RunRecord> records);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace mvfp
