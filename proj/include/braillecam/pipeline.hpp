#pragma once

#include <string>
#include <string_view>

#include "braillecam/config.hpp"
#include "braillecam/machine.hpp"

namespace braillecam {

// encode -> layout -> (mirror) -> emit
std::string text_to_gcode(std::string_view text, const JobConfig& cfg,
                          bool mirror, Warnings* warnings = nullptr);

struct Simulation {
  ExecuteResult result;
  StrikeRaster page_raster;  // strikes in the page frame, unfolded
};

// parse -> execute, with the raster converted back to the page frame.
Simulation simulate(std::string_view gcode, const JobConfig& cfg, Side side);

struct RoundtripReport {
  bool pass = false;
  std::string stage;    // failing stage, empty on success
  std::string message;  // error text or mismatch description
  std::string expected;
  std::string decoded;
};

// Full pipeline identity check. Single-line text is decoded as one wrapped
// paragraph; text containing newlines is decoded line by line.
RoundtripReport roundtrip(std::string_view text, const JobConfig& cfg, bool mirror);
std::string roundtrip_to_json(const RoundtripReport& report);

// One circle per strike on a canvas the size of the page, units in mm.
std::string render_svg(const StrikeRaster& page_raster, const PageSpec& page,
                       const CellGeometry& geom);

}  // namespace braillecam
