#include <doctest.h>

#include <cmath>
#include <string>

#include "helpers.hpp"
#include "mvfp/io.hpp"
#include "mvfp/rng.hpp"
#include "mvfp/synth.hpp"

using namespace mvfp;
using test::make_instance;
using test::make_plan;

namespace {

int count_occurrences(const std::string& text, const std::string& needle) {
  int count = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size()))
    ++count;
  return count;
}

const char* kBlocks = R"(UCSC blocks 1.0
# fixture

NumSoftRectangularBlocks : 0
NumHardRectilinearBlocks : 2
NumTerminals : 1

sb0 hardrectilinear 4 (0, 0) (0, 6) (8, 6) (8, 0)
sb1 hardrectilinear 4 (0,0) (0,4) (3,4) (3,0)
p1 terminal
)";

const char* kNets = R"(UCLA nets 1.0

NumNets : 2
NumPins : 4

NetDegree : 2
sb0 B
p1 B
NetDegree : 2
sb0 B
sb1 B
)";

const char* kPl = R"(UCLA pl 1.0

sb0 0 0
sb1 0 0
p1 0 100
)";

}  // namespace

TEST_CASE("parse_blocks reads hard rectangles and terminals") {
  const ParsedBlocks blocks = parse_blocks(kBlocks);
  REQUIRE(blocks.modules.size() == 2);
  CHECK(blocks.modules[0].name == "sb0");
  CHECK(blocks.modules[0].width == 8);
  CHECK(blocks.modules[0].height == 6);
  CHECK(blocks.modules[1].width == 3);
  CHECK(blocks.modules[1].height == 4);
  REQUIRE(blocks.terminal_names.size() == 1);
  CHECK(blocks.terminal_names[0] == "p1");
}

TEST_CASE("parse_blocks rejects malformed input with line numbers") {
  // declared count mismatch names both numbers
  try {
    parse_blocks("NumHardRectilinearBlocks : 3\n"
                 "a hardrectilinear 4 (0,0) (0,1) (1,1) (1,0)\n",
                 "f.blocks");
    FAIL("expected a ParseError");
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("3") != std::string::npos);
    CHECK(msg.find("1") != std::string::npos);
  }

  // non-rectangular outline
  CHECK_THROWS_AS(parse_blocks("a hardrectilinear 4 (0,0) (0,6) (8,6) (9,0)\n"),
                  ParseError);
  // malformed vertex list
  CHECK_THROWS_AS(parse_blocks("a hardrectilinear 4 (0,0) (0,x) (8,6) (8,0)\n"), ParseError);
  // soft blocks rejected
  CHECK_THROWS_AS(parse_blocks("NumSoftRectangularBlocks : 1\n"), ParseError);
  CHECK_THROWS_AS(parse_blocks("a softrectangular 10 0.5 2\n"), ParseError);
  // degenerate rectangle
  CHECK_THROWS_AS(parse_blocks("a hardrectilinear 4 (0,0) (0,0) (0,0) (0,0)\n"), ParseError);
}

TEST_CASE("parse_nets resolves names and validates degrees") {
  const ParsedBlocks blocks = parse_blocks(kBlocks);
  const std::vector<Net> nets = parse_nets(kNets, blocks);
  REQUIRE(nets.size() == 2);
  REQUIRE(nets[0].pins.size() == 2);
  CHECK(nets[0].pins[0].kind == PinRef::Kind::module);
  CHECK(nets[0].pins[0].index == 0);
  CHECK(nets[0].pins[1].kind == PinRef::Kind::pad);
  CHECK(nets[0].pins[1].index == 0);

  // unknown terminal name carries the net index
  try {
    parse_nets("NetDegree : 2\nsb0 B\nnope B\n", blocks, "f.nets");
    FAIL("expected a ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("net 0") != std::string::npos);
  }

  // degree mismatch
  CHECK_THROWS_AS(parse_nets("NetDegree : 3\nsb0 B\nsb1 B\n", blocks), ParseError);
  // count mismatch
  CHECK_THROWS_AS(parse_nets("NumNets : 5\nNetDegree : 2\nsb0 B\nsb1 B\n", blocks),
                  ParseError);
}

TEST_CASE("parse_nets accepts percent offsets") {
  const ParsedBlocks blocks = parse_blocks(kBlocks);
  const std::vector<Net> nets =
      parse_nets("NetDegree : 2\nsb0 B : %50 %-25\nsb1 B\n", blocks);
  CHECK(nets[0].pins[0].offset_x_pct == doctest::Approx(50.0));
  CHECK(nets[0].pins[0].offset_y_pct == doctest::Approx(-25.0));
}

TEST_CASE("duplicate net endpoints collapse") {
  const ParsedBlocks blocks = parse_blocks(kBlocks);
  const std::vector<Net> nets = parse_nets("NetDegree : 3\nsb0 B\nsb1 B\nsb0 B\n", blocks);
  CHECK(nets[0].pins.size() == 2);
}

TEST_CASE("parse_pl reads coordinates and orientation tails") {
  const auto entries = parse_pl("UCLA pl 1.0\n\np1 267 0\nsb0 1.5 2.5 : E\n");
  CHECK(entries.at("p1").x == 267);
  CHECK(entries.at("p1").y == 0);
  CHECK(!entries.at("p1").orientation.has_value());
  CHECK(entries.at("sb0").orientation->code() == 1);

  CHECK_THROWS_AS(parse_pl("sb0 x y\n"), ParseError);
  CHECK_THROWS_AS(parse_pl("sb0 1 2 : Q\n"), ParseError);
  CHECK_THROWS_AS(parse_pl("sb0 1 2\nsb0 3 4\n"), ParseError);
}

TEST_CASE("instances assemble with pads bound to placed terminals") {
  const ParsedBlocks blocks = parse_blocks(kBlocks);
  std::vector<Net> nets = parse_nets(kNets, blocks);
  const auto placement = parse_pl(kPl);
  const ProblemInstance inst = assemble_instance(blocks, std::move(nets), placement);
  CHECK(inst.module_count() == 2);
  CHECK(inst.pads()[0].y == 100);

  // missing terminal coordinates
  const auto missing = parse_pl("sb0 0 0\nsb1 0 0\n");
  std::vector<Net> nets2 = parse_nets(kNets, blocks);
  CHECK_THROWS_AS(assemble_instance(blocks, std::move(nets2), missing), std::invalid_argument);
}

TEST_CASE("terminal normalization shifts the bounding box to the origin") {
  const ParsedBlocks blocks = parse_blocks(
      "NumHardRectilinearBlocks : 1\nNumTerminals : 2\n"
      "a hardrectilinear 4 (0,0) (0,1) (1,1) (1,0)\np0 terminal\np1 terminal\n");
  const auto placement = parse_pl("a 0 0\np0 10 30\np1 20 40\n");
  const ProblemInstance inst = assemble_instance(blocks, {}, placement, true);
  CHECK(inst.pads()[0].x == 0);
  CHECK(inst.pads()[0].y == 0);
  CHECK(inst.pads()[1].x == 10);
  CHECK(inst.pads()[1].y == 10);
}

TEST_CASE("write_pl round-trips through parse_pl") {
  Rng rng(61);
  SynthConfig sc;
  sc.modules = 9;
  sc.terminals = 3;
  sc.nets = 12;
  const ProblemInstance inst = synth_instance(sc, rng);
  const Floorplan plan = random_floorplan(inst, 120, 90, rng);

  const std::string text = write_pl(inst, plan);
  const auto parsed = parse_pl(text);
  const Floorplan back = placement_to_floorplan(inst, parsed);
  for (std::size_t i = 0; i < inst.module_count(); ++i) {
    CHECK(std::abs(back.x[i] - plan.x[i]) <= 1e-6);
    CHECK(std::abs(back.y[i] - plan.y[i]) <= 1e-6);
    CHECK(back.r[i].code() == plan.r[i].code());
  }
  // pads present too, at %.6f precision
  for (const Pad& pad : inst.pads()) {
    CHECK(std::abs(parsed.at(pad.name).x - pad.x) <= 1e-6);
  }
}

TEST_CASE("svg contains one rectangle per module plus the optional frame") {
  const auto inst = make_instance({{4, 2}, {3, 3}});
  const auto plan = make_plan({{2, 1}, {6, 2}}, {1, 0});

  const std::string no_frame = render_svg(inst, plan, nullptr);
  CHECK(count_occurrences(no_frame, "<rect") == 2);

  const OutlineSpec outline{12, 12, 1, 0};
  const std::string framed = render_svg(inst, plan, &outline);
  CHECK(count_occurrences(framed, "<rect") == 3);

  // rotated module renders with swapped extents
  CHECK(framed.find("width=\"2.000000\" height=\"4.000000\"") != std::string::npos);
}

TEST_CASE("metrics csv carries per-run rows and group summaries") {
  std::vector<RunRecord> records;
  for (int run = 0; run < 10; ++run) {
    RunRecord r;
    r.instance = "n10";
    r.mode = "fixed-outline";
    r.aspect_ratio = 1;
    r.gamma = 0.15;
    r.seed = run + 1;
    r.legal = run != 3;  // 9 of 10 legal
    r.hpwl = 1000 + run;
    r.area = 500;
    records.push_back(r);
  }
  const std::string text = write_metrics_csv(records);
  CHECK(text.rfind("instance,mode,R,gamma,seed,legal,hpwl,area,cost,seconds\n", 0) == 0);
  CHECK(text.find("fixed-outline-summary,1,0.15,all,90,") != std::string::npos);
  // absent cost and seconds stay empty, not zero
  CHECK(text.find(",500.000000,,\n") != std::string::npos);

  // header is byte-stable
  const std::string again = write_metrics_csv(records);
  CHECK(text == again);
}

TEST_CASE("aux files name the trio") {
  const auto dir = std::filesystem::temp_directory_path() / "mvfp_aux_test";
  std::filesystem::create_directories(dir);
  write_text_file(dir / "x.aux", "RowBasedPlacement : x.blocks x.nets x.pl\n");
  const BenchmarkFiles files = parse_aux(dir / "x.aux");
  CHECK(files.blocks.filename() == "x.blocks");
  CHECK(files.nets.filename() == "x.nets");
  CHECK(files.pl.filename() == "x.pl");

  write_text_file(dir / "bad.aux", "nothing here\n");
  CHECK_THROWS_AS(parse_aux(dir / "bad.aux"), ParseError);
}
