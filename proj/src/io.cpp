#include "mvfp/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>

namespace mvfp {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

struct Line {
  int number = 0;
  std::vector<std::string> tokens;
};

bool is_blank_or_comment(std::string_view s) {
  for (char c : s) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// Tokenizes on whitespace; parentheses and commas also separate so vertex
// lists like "(0, 43)" come out as plain numbers.
std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view raw = text.substr(pos, eol - pos);
    ++number;
    pos = eol + 1;
    if (is_blank_or_comment(raw)) {
      if (eol == text.size()) break;
      continue;
    }
    Line line;
    line.number = number;
    std::string token;
    for (char c : raw) {
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ',') {
        if (!token.empty()) {
          line.tokens.push_back(std::move(token));
          token.clear();
        }
      } else {
        token.push_back(c);
      }
    }
    if (!token.empty()) line.tokens.push_back(std::move(token));
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (eol == text.size()) break;
  }
  return lines;
}

bool parse_double(const std::string& token, double& out) {
  const char* s = token.c_str();
  // accepts a leading '%' (Bookshelf pin offsets)
  if (*s == '%') ++s;
  char* end = nullptr;
  out = std::strtod(s, &end);
  return end != s && *end == '\0' && std::isfinite(out);
}

bool parse_count(const Line& line, std::string_view key, long& out) {
  if (line.tokens.size() == 3 && line.tokens[0] == key && line.tokens[1] == ":") {
    out = std::strtol(line.tokens[2].c_str(), nullptr, 10);
    return true;
  }
  return false;
}

// a version banner like "UCSC blocks 1.0": no colon, no coordinates
bool is_header(const Line& line) {
  for (const std::string& t : line.tokens)
    if (t == ":") return false;
  double unused;
  return !line.tokens.empty() && !parse_double(line.tokens[0], unused) &&
         line.tokens.size() <= 4 && line.tokens.back().find('.') != std::string::npos;
}

const char* kOrientationLetters = "NESW";

}  // namespace

ParseError::ParseError(std::string_view file, int line, std::string_view message)
    : std::runtime_error(std::string(file) + ":" + std::to_string(line) + ": " +
                         std::string(message)),
      file_(file),
      line_(line) {}

ParsedBlocks parse_blocks(std::string_view text, std::string_view filename) {
  ParsedBlocks out;
  long declared_blocks = -1, declared_terminals = -1, declared_soft = -1;
  bool first = true;

  for (const Line& line : tokenize(text)) {
    if (first && is_header(line)) {
      first = false;
      continue;
    }
    first = false;
    if (parse_count(line, "NumHardRectilinearBlocks", declared_blocks)) continue;
    if (parse_count(line, "NumTerminals", declared_terminals)) continue;
    if (parse_count(line, "NumSoftRectangularBlocks", declared_soft)) {
      if (declared_soft > 0)
        throw ParseError(filename, line.number, "soft blocks are not supported");
      continue;
    }

    if (line.tokens.size() == 2 && line.tokens[1] == "terminal") {
      out.terminal_names.push_back(line.tokens[0]);
      continue;
    }
    if (line.tokens.size() >= 2 && line.tokens[1] == "hardrectilinear") {
      if (line.tokens.size() != 11 || line.tokens[2] != "4")
        throw ParseError(filename, line.number,
                         "expected 'name hardrectilinear 4' with four (x,y) vertices");
      double xs[4], ys[4];
      for (int v = 0; v < 4; ++v) {
        if (!parse_double(line.tokens[3 + 2 * v], xs[v]) ||
            !parse_double(line.tokens[4 + 2 * v], ys[v]))
          throw ParseError(filename, line.number, "malformed vertex list");
      }
      const double min_x = *std::min_element(xs, xs + 4), max_x = *std::max_element(xs, xs + 4);
      const double min_y = *std::min_element(ys, ys + 4), max_y = *std::max_element(ys, ys + 4);
      for (int v = 0; v < 4; ++v) {
        if ((xs[v] != min_x && xs[v] != max_x) || (ys[v] != min_y && ys[v] != max_y))
          throw ParseError(filename, line.number,
                           "block outline is not an axis-aligned rectangle");
      }
      // all four corners must be distinct
      std::set<std::pair<double, double>> corners;
      for (int v = 0; v < 4; ++v) corners.insert({xs[v], ys[v]});
      if (corners.size() != 4 || min_x == max_x || min_y == max_y)
        throw ParseError(filename, line.number, "degenerate block outline");
      Module m;
      m.id = static_cast<int>(out.modules.size());
      m.name = line.tokens[0];
      m.width = max_x - min_x;
      m.height = max_y - min_y;
      out.modules.push_back(std::move(m));
      continue;
    }
    if (line.tokens.size() >= 2 &&
        (line.tokens[1] == "softrectangular" || line.tokens[1] == "softrectilinear"))
      throw ParseError(filename, line.number, "soft blocks are not supported");
    throw ParseError(filename, line.number, "unrecognized line");
  }

  if (declared_blocks >= 0 && declared_blocks != static_cast<long>(out.modules.size()))
    throw ParseError(filename, 0,
                     "block count mismatch: declared " + std::to_string(declared_blocks) +
                         ", parsed " + std::to_string(out.modules.size()));
  if (declared_terminals >= 0 &&
      declared_terminals != static_cast<long>(out.terminal_names.size()))
    throw ParseError(filename, 0,
                     "terminal count mismatch: declared " + std::to_string(declared_terminals) +
                         ", parsed " + std::to_string(out.terminal_names.size()));
  return out;
}

std::vector<Net> parse_nets(std::string_view text, const ParsedBlocks& blocks,
                            std::string_view filename) {
  std::unordered_map<std::string, PinRef> by_name;
  for (const Module& m : blocks.modules)
    by_name[m.name] = PinRef{PinRef::Kind::module, m.id, 0, 0};
  for (std::size_t i = 0; i < blocks.terminal_names.size(); ++i)
    by_name[blocks.terminal_names[i]] = PinRef{PinRef::Kind::pad, static_cast<int>(i), 0, 0};

  std::vector<Net> nets;
  long declared_nets = -1, declared_pins = -1;
  long pins_seen = 0;
  long expected_pins = 0;  // of the currently open net
  bool first = true;

  for (const Line& line : tokenize(text)) {
    if (first && is_header(line)) {
      first = false;
      continue;
    }
    first = false;
    if (parse_count(line, "NumNets", declared_nets)) continue;
    if (parse_count(line, "NumPins", declared_pins)) continue;

    long degree = 0;
    if (parse_count(line, "NetDegree", degree)) {
      if (expected_pins > 0)
        throw ParseError(filename, line.number,
                         "net " + std::to_string(nets.size() - 1) + " is short by " +
                             std::to_string(expected_pins) + " pin(s)");
      if (degree < 1)
        throw ParseError(filename, line.number, "net degree must be at least 1");
      nets.emplace_back();
      expected_pins = degree;
      continue;
    }

    if (expected_pins == 0)
      throw ParseError(filename, line.number, "pin line outside a NetDegree group");
    const auto found = by_name.find(line.tokens[0]);
    if (found == by_name.end())
      throw ParseError(filename, line.number,
                       "net " + std::to_string(nets.size() - 1) + " references unknown name '" +
                           line.tokens[0] + "'");
    PinRef pin = found->second;
    // accepted tails: [direction] [':' %x %y]
    std::size_t t = 1;
    if (t < line.tokens.size() && line.tokens[t] != ":") ++t;  // direction letter
    if (t < line.tokens.size()) {
      if (line.tokens[t] != ":" || line.tokens.size() != t + 3)
        throw ParseError(filename, line.number, "malformed pin offsets");
      if (!parse_double(line.tokens[t + 1], pin.offset_x_pct) ||
          !parse_double(line.tokens[t + 2], pin.offset_y_pct))
        throw ParseError(filename, line.number, "malformed pin offsets");
    }
    // duplicate endpoints collapse; the extent arithmetic is unaffected
    bool duplicate = false;
    for (const PinRef& existing : nets.back().pins)
      if (existing.kind == pin.kind && existing.index == pin.index) duplicate = true;
    if (!duplicate) nets.back().pins.push_back(pin);
    --expected_pins;
    ++pins_seen;
  }

  if (expected_pins > 0)
    throw ParseError(filename, 0,
                     "net " + std::to_string(nets.size() - 1) + " is short by " +
                         std::to_string(expected_pins) + " pin(s)");
  if (declared_nets >= 0 && declared_nets != static_cast<long>(nets.size()))
    throw ParseError(filename, 0,
                     "net count mismatch: declared " + std::to_string(declared_nets) +
                         ", parsed " + std::to_string(nets.size()));
  if (declared_pins >= 0 && declared_pins != pins_seen)
    throw ParseError(filename, 0,
                     "pin count mismatch: declared " + std::to_string(declared_pins) +
                         ", parsed " + std::to_string(pins_seen));
  return nets;
}

std::map<std::string, PlacementEntry> parse_pl(std::string_view text, std::string_view filename) {
  std::map<std::string, PlacementEntry> out;
  bool first = true;
  for (const Line& line : tokenize(text)) {
    if (first && is_header(line)) {
      first = false;
      continue;
    }
    first = false;
    if (line.tokens.size() != 3 && !(line.tokens.size() == 5 && line.tokens[3] == ":"))
      throw ParseError(filename, line.number, "expected 'name x y' or 'name x y : O'");
    PlacementEntry entry;
    if (!parse_double(line.tokens[1], entry.x) || !parse_double(line.tokens[2], entry.y))
      throw ParseError(filename, line.number, "malformed coordinates");
    if (line.tokens.size() == 5) {
      const std::string& o = line.tokens[4];
      const char* hit = o.size() == 1 ? std::strchr(kOrientationLetters, o[0]) : nullptr;
      if (!hit) throw ParseError(filename, line.number, "unknown orientation '" + o + "'");
      entry.orientation = Orientation(static_cast<int>(hit - kOrientationLetters));
    }
    if (!out.emplace(line.tokens[0], entry).second)
      throw ParseError(filename, line.number, "duplicate placement for '" + line.tokens[0] + "'");
  }
  return out;
}

BenchmarkFiles parse_aux(const std::filesystem::path& aux_path) {
  const std::string text = read_text_file(aux_path);
  const auto dir = aux_path.parent_path();
  for (const Line& line : tokenize(text)) {
    BenchmarkFiles files;
    for (const std::string& token : line.tokens) {
      std::filesystem::path p = dir / token;
      if (token.size() > 7 && token.substr(token.size() - 7) == ".blocks") files.blocks = p;
      if (token.size() > 5 && token.substr(token.size() - 5) == ".nets") files.nets = p;
      if (token.size() > 3 && token.substr(token.size() - 3) == ".pl") files.pl = p;
    }
    if (!files.blocks.empty() && !files.nets.empty() && !files.pl.empty()) return files;
  }
  throw ParseError(aux_path.string(), 0, "no '<tag> : a.blocks a.nets a.pl' line found");
}

ProblemInstance assemble_instance(const ParsedBlocks& blocks, std::vector<Net> nets,
                                  const std::map<std::string, PlacementEntry>& placement,
                                  bool normalize_terminals) {
  std::vector<Pad> pads;
  pads.reserve(blocks.terminal_names.size());
  for (std::size_t i = 0; i < blocks.terminal_names.size(); ++i) {
    const std::string& name = blocks.terminal_names[i];
    const auto found = placement.find(name);
    if (found == placement.end())
      throw std::invalid_argument("terminal '" + name + "' has no placed coordinates");
    pads.push_back(Pad{static_cast<int>(i), found->second.x, found->second.y, name});
  }
  if (normalize_terminals && !pads.empty()) {
    double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
    for (const Pad& p : pads) {
      min_x = std::min(min_x, p.x);
      min_y = std::min(min_y, p.y);
    }
    for (Pad& p : pads) {
      p.x -= min_x;
      p.y -= min_y;
    }
  }
  return ProblemInstance(blocks.modules, std::move(pads), std::move(nets));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
}

ProblemInstance load_instance(const std::filesystem::path& blocks_path,
                              const std::filesystem::path& nets_path,
                              const std::filesystem::path& pl_path, bool normalize_terminals) {
  const ParsedBlocks blocks = parse_blocks(read_text_file(blocks_path), blocks_path.string());
  std::vector<Net> nets = parse_nets(read_text_file(nets_path), blocks, nets_path.string());
  const auto placement = parse_pl(read_text_file(pl_path), pl_path.string());
  return assemble_instance(blocks, std::move(nets), placement, normalize_terminals);
}

ProblemInstance load_instance_aux(const std::filesystem::path& aux_path,
                                  bool normalize_terminals) {
  const BenchmarkFiles files = parse_aux(aux_path);
  return load_instance(files.blocks, files.nets, files.pl, normalize_terminals);
}

Floorplan placement_to_floorplan(const ProblemInstance& instance,
                                 const std::map<std::string, PlacementEntry>& placement) {
  Floorplan plan;
  const std::size_t n = instance.module_count();
  plan.x.resize(n);
  plan.y.resize(n);
  plan.r.resize(n);
  for (const Module& m : instance.modules()) {
    const auto found = placement.find(m.name);
    if (found == placement.end())
      throw std::invalid_argument("module '" + m.name + "' missing from placement");
    const PlacementEntry& e = found->second;
    plan.r[m.id] = e.orientation.value_or(Orientation(0));
    const Dims d = effective_dims(m, plan.r[m.id]);
    plan.x[m.id] = e.x + d.w / 2;
    plan.y[m.id] = e.y + d.h / 2;
  }
  return plan;
}

std::string write_pl(const ProblemInstance& instance, const Floorplan& plan) {
  std::ostringstream out;
  out << "UCLA pl 1.0\n\n";
  for (const Module& m : instance.modules()) {
    const Dims d = effective_dims(m, plan.r[m.id]);
    out << m.name << ' ' << fmt("%.6f", plan.x[m.id] - d.w / 2) << ' '
        << fmt("%.6f", plan.y[m.id] - d.h / 2) << " : "
        << kOrientationLetters[plan.r[m.id].code()] << '\n';
  }
  for (const Pad& p : instance.pads())
    out << p.name << ' ' << fmt("%.6f", p.x) << ' ' << fmt("%.6f", p.y) << '\n';
  return out.str();
}

std::string render_svg(const ProblemInstance& instance, const Floorplan& plan,
                       const OutlineSpec* outline) {
  double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
  bool seen = false;
  auto grow = [&](double x, double y) {
    if (!seen) {
      min_x = max_x = x;
      min_y = max_y = y;
      seen = true;
    } else {
      min_x = std::min(min_x, x);
      max_x = std::max(max_x, x);
      min_y = std::min(min_y, y);
      max_y = std::max(max_y, y);
    }
  };
  for (std::size_t i = 0; i < instance.module_count(); ++i) {
    const Dims d = effective_dims(instance.modules()[i], plan.r[i]);
    grow(plan.x[i] - d.w / 2, plan.y[i] - d.h / 2);
    grow(plan.x[i] + d.w / 2, plan.y[i] + d.h / 2);
  }
  for (const Pad& p : instance.pads()) grow(p.x, p.y);
  if (outline) {
    grow(0, 0);
    grow(outline->width, outline->height);
  }
  const double margin = 0.03 * std::max(max_x - min_x, max_y - min_y) + 1;
  min_x -= margin;
  min_y -= margin;
  max_x += margin;
  max_y += margin;
  const double flip = max_y + min_y;  // y_svg = flip - y keeps the viewBox

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" << fmt("%.3f", min_x) << ' '
      << fmt("%.3f", min_y) << ' ' << fmt("%.3f", max_x - min_x) << ' '
      << fmt("%.3f", max_y - min_y) << "\" width=\"900\">\n";
  const double stroke = 0.002 * std::max(max_x - min_x, max_y - min_y);
  const double font = 0.022 * std::max(max_x - min_x, max_y - min_y);

  if (outline) {
    out << "  <rect class=\"outline\" x=\"0\" y=\"" << fmt("%.6f", flip - outline->height)
        << "\" width=\"" << fmt("%.6f", outline->width) << "\" height=\""
        << fmt("%.6f", outline->height) << "\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\""
        << fmt("%.4f", 2 * stroke) << "\"/>\n";
  }
  for (std::size_t i = 0; i < instance.module_count(); ++i) {
    const Dims d = effective_dims(instance.modules()[i], plan.r[i]);
    const double llx = plan.x[i] - d.w / 2;
    const double lly = plan.y[i] - d.h / 2;
    out << "  <rect x=\"" << fmt("%.6f", llx) << "\" y=\"" << fmt("%.6f", flip - lly - d.h)
        << "\" width=\"" << fmt("%.6f", d.w) << "\" height=\"" << fmt("%.6f", d.h)
        << "\" fill=\"#7fb3d5\" fill-opacity=\"0.7\" stroke=\"#1b4f72\" stroke-width=\""
        << fmt("%.4f", stroke) << "\"/>\n";
    // orientation tick: center toward the rotated top edge
    static constexpr double kDirX[4] = {0, 1, 0, -1};
    static constexpr double kDirY[4] = {1, 0, -1, 0};
    const int code = plan.r[i].code();
    const double tx = plan.x[i] + kDirX[code] * d.w / 2;
    const double ty = plan.y[i] + kDirY[code] * d.h / 2;
    out << "  <line x1=\"" << fmt("%.6f", plan.x[i]) << "\" y1=\"" << fmt("%.6f", flip - plan.y[i])
        << "\" x2=\"" << fmt("%.6f", tx) << "\" y2=\"" << fmt("%.6f", flip - ty)
        << "\" stroke=\"#1b4f72\" stroke-width=\"" << fmt("%.4f", stroke) << "\"/>\n";
    out << "  <text x=\"" << fmt("%.6f", plan.x[i]) << "\" y=\"" << fmt("%.6f", flip - plan.y[i])
        << "\" font-size=\"" << fmt("%.4f", font)
        << "\" text-anchor=\"middle\" dominant-baseline=\"middle\">"
        << instance.modules()[i].name << "</text>\n";
  }
  for (const Pad& p : instance.pads()) {
    const double r = 1.5 * stroke;
    out << "  <path d=\"M " << fmt("%.6f", p.x - r) << ' ' << fmt("%.6f", flip - p.y) << " L "
        << fmt("%.6f", p.x + r) << ' ' << fmt("%.6f", flip - p.y) << " M " << fmt("%.6f", p.x)
        << ' ' << fmt("%.6f", flip - p.y - r) << " L " << fmt("%.6f", p.x) << ' '
        << fmt("%.6f", flip - p.y + r) << "\" stroke=\"#7d6608\" stroke-width=\""
        << fmt("%.4f", stroke) << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string write_metrics_csv(std::span<const RunRecord> records) {
  std::ostringstream out;
  out << "instance,mode,R,gamma,seed,legal,hpwl,area,cost,seconds\n";

  auto emit_optional = [&](const std::optional<double>& v, const char* spec) {
    if (v) out << fmt(spec, *v);
  };

  struct GroupKey {
    std::string instance, mode;
    double r, gamma;
    bool operator==(const GroupKey& other) const {
      return instance == other.instance && mode == other.mode && r == other.r &&
             gamma == other.gamma;
    }
  };
  std::vector<std::pair<GroupKey, std::vector<const RunRecord*>>> groups;

  for (const RunRecord& rec : records) {
    out << rec.instance << ',' << rec.mode << ',' << fmt("%g", rec.aspect_ratio) << ','
        << fmt("%g", rec.gamma) << ',' << rec.seed << ',' << (rec.legal ? 1 : 0) << ','
        << fmt("%.6f", rec.hpwl) << ',' << fmt("%.6f", rec.area) << ',';
    emit_optional(rec.cost, "%.6f");
    out << ',';
    emit_optional(rec.seconds, "%.3f");
    out << '\n';

    const GroupKey key{rec.instance, rec.mode, rec.aspect_ratio, rec.gamma};
    auto group = std::find_if(groups.begin(), groups.end(),
                              [&](const auto& g) { return g.first == key; });
    if (group == groups.end()) {
      groups.push_back({key, {}});
      group = std::prev(groups.end());
    }
    group->second.push_back(&rec);
  }

  for (const auto& [key, runs] : groups) {
    if (runs.size() < 2) continue;
    int legal = 0;
    double hpwl_sum = 0, area_sum = 0, cost_sum = 0, sec_sum = 0;
    int cost_count = 0, sec_count = 0;
    for (const RunRecord* rec : runs) {
      if (rec->legal) {
        ++legal;
        hpwl_sum += rec->hpwl;
        area_sum += rec->area;
        if (rec->cost) {
          cost_sum += *rec->cost;
          ++cost_count;
        }
      }
      if (rec->seconds) {
        sec_sum += *rec->seconds;
        ++sec_count;
      }
    }
    const double sr = 100.0 * legal / static_cast<double>(runs.size());
    out << key.instance << ',' << key.mode << "-summary," << fmt("%g", key.r) << ','
        << fmt("%g", key.gamma) << ",all," << fmt("%g", sr) << ',';
    if (legal > 0) out << fmt("%.6f", hpwl_sum / legal);
    out << ',';
    if (legal > 0) out << fmt("%.6f", area_sum / legal);
    out << ',';
    if (cost_count > 0) out << fmt("%.6f", cost_sum / cost_count);
    out << ',';
    if (sec_count > 0) out << fmt("%.3f", sec_sum / sec_count);
    out << '\n';
  }
  return out.str();
}

}  // namespace mvfp
