#include "braillecam/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace braillecam {

void DecodeOptions::validate(const CellGeometry& geom) const {
  if (!(snap_tolerance > 0)) throw InvalidArgument("snap_tolerance must be > 0");
  // Half the smallest gap between two nominal dot positions.
  const double half_gap = std::min({geom.dot_pitch, geom.cell_pitch - geom.dot_pitch,
                                    geom.line_pitch - 2 * geom.dot_pitch}) / 2;
  if (!(snap_tolerance < half_gap)) {
    throw DecodeAmbiguity("snap_tolerance " + std::to_string(snap_tolerance) +
                          " mm reaches past half the dot spacing (" +
                          std::to_string(half_gap) + " mm)");
  }
}

DecodeAmbiguity::DecodeAmbiguity(const std::string& why)
    : Error("DecodeAmbiguity", "ambiguous dot assignment: " + why) {}

UnassignedStrike::UnassignedStrike(double x, double y)
    : Error("UnassignedStrike", "strike at (" + format_coord(x) + ", " +
                                    format_coord(y) + ") is not near any dot position"),
      x(x),
      y(y) {}

DuplicateStrike::DuplicateStrike(double x, double y, std::size_t line,
                                 std::size_t cell, int dot)
    : Error("DuplicateStrike", "strike at (" + format_coord(x) + ", " +
                                   format_coord(y) + ") hits dot " + std::to_string(dot) +
                                   " of line " + std::to_string(line + 1) + ", cell " +
                                   std::to_string(cell + 1) + " a second time"),
      x(x),
      y(y) {}

StrikeRaster raster_to_page_frame(const StrikeRaster& raster,
                                  const MachineConfig& cfg,
                                  const PageSpec& page) {
  StrikeRaster out = raster;
  for (Strike& s : out.strikes) {
    s.y = layout_y(s.y, cfg);
    if (raster.side == Side::kBack) s.x = page.width - s.x;
  }
  out.side = Side::kFront;
  return out;
}

std::vector<CellLine> raster_to_cells(const StrikeRaster& page_raster,
                                      const PageSpec& page,
                                      const CellGeometry& geom,
                                      const DecodeOptions& opt,
                                      Warnings* warnings) {
  geom.validate();
  opt.validate(geom);

  // (line, cell) -> mask
  std::map<std::pair<long, long>, unsigned> cells;
  long last_line = -1;
  for (const Strike& s : page_raster.strikes) {
    double best = std::numeric_limits<double>::infinity();
    long best_line = -1, best_cell = -1;
    int best_dot = 0;
    for (int column = 0; column < 2; ++column) {
      const long k = std::lround((s.x - page.margin_left - column * geom.dot_pitch) / geom.cell_pitch);
      if (k < 0) continue;
      for (int row = 0; row < 3; ++row) {
        const long r = std::lround((s.y - page.margin_top - row * geom.dot_pitch) / geom.line_pitch);
        if (r < 0) continue;
        const double nx = page.margin_left + k * geom.cell_pitch + column * geom.dot_pitch;
        const double ny = page.margin_top + r * geom.line_pitch + row * geom.dot_pitch;
        const double d = std::hypot(s.x - nx, s.y - ny);
        if (d < best) {
          best = d;
          best_line = r;
          best_cell = k;
          best_dot = column * 3 + row + 1;
        }
      }
    }
    if (!(best <= opt.snap_tolerance)) {
      if (opt.require_all_assigned) throw UnassignedStrike(s.x, s.y);
      if (warnings) warnings->push_back(UnassignedStrike(s.x, s.y).what());
      continue;
    }
    unsigned& mask = cells[{best_line, best_cell}];
    const unsigned bit = 1u << (best_dot - 1);
    if (mask & bit) {
      throw DuplicateStrike(s.x, s.y, static_cast<std::size_t>(best_line),
                            static_cast<std::size_t>(best_cell), best_dot);
    }
    mask |= bit;
    last_line = std::max(last_line, best_line);
  }

  std::vector<CellLine> lines(static_cast<std::size_t>(last_line + 1));
  for (const auto& [key, mask] : cells) {
    CellLine& line = lines[static_cast<std::size_t>(key.first)];
    const auto k = static_cast<std::size_t>(key.second);
    if (line.size() <= k) line.resize(k + 1);
    line[k] = BrailleCell(mask);
  }
  return lines;
}

std::string decode_page(const std::vector<CellLine>& lines,
                        std::size_t capacity, LineJoin join) {
  if (join == LineJoin::kLines) return decode_cells(BrailleText(lines.begin(), lines.end()));
  CellLine flow;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    flow.insert(flow.end(), lines[i].begin(), lines[i].end());
    if (i + 1 < lines.size() && lines[i].size() < capacity) {
      flow.resize(flow.size() + capacity - lines[i].size());
    }
  }
  return decode_cells(std::span<const BrailleCell>(flow));
}

}  // namespace braillecam
