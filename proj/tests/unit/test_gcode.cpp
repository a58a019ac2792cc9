#include <random>

#include "braillecam/gcode.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace braillecam;

namespace {

DotMap one_dot(double x, double y) {
  DotMap map;
  map.dots.push_back({x, y, 0, 1});
  return map;
}

}  // namespace

TEST_CASE("serpentine ordering reverses every second band") {
  DotMap map;
  map.dots = {{1, 0, 0, 1}, {2, 0, 1, 1}, {1, 2.5, 2, 1}, {2, 2.5, 3, 1}};
  const auto serp = order_strikes(map, Traversal::kSerpentine);
  REQUIRE(serp.size() == 4);
  CHECK(serp[0].x == 1);
  CHECK(serp[0].y == 0);
  CHECK(serp[1].x == 2);
  CHECK(serp[1].y == 0);
  CHECK(serp[2].x == 2);
  CHECK(serp[2].y == 2.5);
  CHECK(serp[3].x == 1);
  CHECK(serp[3].y == 2.5);

  const auto rows = order_strikes(map, Traversal::kRowMajor);
  CHECK(rows[2].x == 1);
  CHECK(rows[3].x == 2);

  CHECK(order_strikes(DotMap{}, Traversal::kSerpentine).empty());
  const DotMap single = one_dot(3, 4);
  CHECK(order_strikes(single, Traversal::kSerpentine) == single.dots);
  CHECK(order_strikes(single, Traversal::kRowMajor) == single.dots);
}

TEST_CASE("ordering is a permutation independent of input order") {
  std::mt19937 rng(2);
  const DotMap map = layout_dots(encode_text("Hello, World 42"), PageSpec{}, CellGeometry{});
  const auto expected = order_strikes(map, Traversal::kSerpentine);
  for (int i = 0; i < 20; ++i) {
    DotMap shuffled = map;
    std::shuffle(shuffled.dots.begin(), shuffled.dots.end(), rng);
    CHECK(order_strikes(shuffled, Traversal::kSerpentine) == expected);
  }
  CHECK(expected.size() == map.dots.size());
}

TEST_CASE("emit_program single dot") {
  const std::string program = emit_program(one_dot(15, 15), MachineConfig{}, EmitOptions{});
  CHECK(program ==
        "G21\nG90\nG0 X15.000 Y15.000\nM8\nG4 P0.050\nM9\nG0 X0.000 Y0.000\nM30\n");
}

TEST_CASE("emit_program empty map and homing preamble") {
  CHECK(emit_program(DotMap{}, MachineConfig{}, EmitOptions{}) ==
        "G21\nG90\nG0 X0.000 Y0.000\nM30\n");
  EmitOptions opt;
  opt.home_first = true;
  CHECK(emit_program(DotMap{}, MachineConfig{}, opt) ==
        "G21\nG90\nG28.2 X0 Y0\nG0 X0.000 Y0.000\nM30\n");
}

TEST_CASE("emit_program rejects positions beyond axis travel") {
  try {
    emit_program(one_dot(80, 15), MachineConfig{}, EmitOptions{});
    FAIL("expected TravelExceeded");
  } catch (const TravelExceeded& e) {
    CHECK(e.axis == Axis::kX);
    CHECK(e.value == 80);
    CHECK(e.limit == 75);
  }
  MachineConfig cfg;
  cfg.bed_depth = 100.0;
  CHECK_THROWS_AS(emit_program(one_dot(15, 120), cfg, EmitOptions{}), TravelExceeded);
  CHECK_THROWS_AS(emit_program(one_dot(15, 15), MachineConfig{}, EmitOptions{.dwell_s = 0}),
                  InvalidArgument);
}

TEST_CASE("bed_depth flips the y axis") {
  MachineConfig cfg;
  cfg.bed_depth = 120.0;
  CHECK(machine_y(15.0, cfg) == 105.0);
  CHECK(layout_y(machine_y(15.0, cfg), cfg) == 15.0);
  const std::string program = emit_program(one_dot(15, 15), cfg, EmitOptions{});
  CHECK(program.find("G0 X15.000 Y105.000\n") != std::string::npos);
}

TEST_CASE("parse_program examples") {
  auto p = parse_program("G21");
  REQUIRE(p.size() == 1);
  CHECK(std::holds_alternative<gcmd::UnitsMm>(p[0].op));
  CHECK(p[0].line_number == 1);

  p = parse_program("G4 P0.050");
  REQUIRE(p.size() == 1);
  CHECK(std::get<gcmd::Dwell>(p[0].op).seconds == doctest::Approx(0.05));

  try {
    parse_program("G0 X1 Y2 Z3");
    FAIL("expected UnsupportedWord");
  } catch (const UnsupportedWord& e) {
    CHECK(e.word == "Z3");
    CHECK(e.line == 1);
  }
}

TEST_CASE("parser accepts comments, blank lines and case variants") {
  auto p = parse_program("(header)\n\n g0 x1.5 y-2 ; trailing\nG1 X3 F500\nG28.2 X0\nM30\n");
  REQUIRE(p.size() == 4);
  CHECK(p[0].line_number == 3);
  CHECK(std::get<gcmd::Rapid>(p[0].op) == gcmd::Rapid{1.5, -2.0});
  CHECK(std::get<gcmd::Linear>(p[1].op) == gcmd::Linear{3.0, std::nullopt, 500.0});
  CHECK(std::get<gcmd::Home>(p[2].op) == gcmd::Home{true, false});
  CHECK(std::holds_alternative<gcmd::ProgramEnd>(p[3].op));
}

TEST_CASE("parser errors") {
  CHECK_THROWS_AS(parse_program("G99"), UnsupportedWord);
  CHECK_THROWS_AS(parse_program("M3"), UnsupportedWord);
  CHECK_THROWS_AS(parse_program("X10"), SyntaxError);
  CHECK_THROWS_AS(parse_program("G0 G1"), SyntaxError);
  CHECK_THROWS_AS(parse_program("G4"), SyntaxError);
  CHECK_THROWS_AS(parse_program("G4 P-1"), SyntaxError);
  CHECK_THROWS_AS(parse_program("G1 X1 F0"), SyntaxError);
  CHECK_THROWS_AS(parse_program("G0 X1 X2"), SyntaxError);
  CHECK_THROWS_AS(parse_program("G0 X1..2"), SyntaxError);
  CHECK_THROWS_AS(parse_program("G21 X1"), SyntaxError);
  CHECK_THROWS_AS(parse_program("G0 (open"), SyntaxError);
  CHECK_THROWS_AS(parse_program("G28.2"), SyntaxError);
  try {
    parse_program("G21\nG0 X1 #");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.line == 2);
    CHECK(e.column == 7);
  }
}

TEST_CASE("property: emitted programs parse and re-serialize identically") {
  std::mt19937 rng(9);
  for (int i = 0; i < 100; ++i) {
    const DotMap map =
        layout_dots(encode_text(testing::random_text(rng, 24)), PageSpec{}, CellGeometry{});
    const std::string text = emit_program(map, MachineConfig{}, EmitOptions{});
    std::string again;
    for (const GcodeCommand& cmd : parse_program(text)) again += to_gcode(cmd) + "\n";
    CHECK(again == text);
  }
}

TEST_CASE("format_coord") {
  CHECK(format_coord(0.0) == "0.000");
  CHECK(format_coord(-0.0) == "0.000");
  CHECK(format_coord(-0.0001) == "0.000");
  CHECK(format_coord(17.5) == "17.500");
  CHECK(format_coord(-2.25) == "-2.250");
}
