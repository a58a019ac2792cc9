#pragma once

#include <string>
#include <vector>

#include "braillecam/braille.hpp"
#include "braillecam/layout.hpp"
#include "braillecam/machine.hpp"

namespace braillecam {

struct DecodeOptions {
  double snap_tolerance = 0.25;  // mm
  bool require_all_assigned = true;

  // Throws DecodeAmbiguity when the tolerance could reach two nominal dots.
  void validate(const CellGeometry& geom) const;
};

class DecodeAmbiguity : public Error {
 public:
  explicit DecodeAmbiguity(const std::string& why);
};

class UnassignedStrike : public Error {
 public:
  UnassignedStrike(double x, double y);
  double x, y;
};

class DuplicateStrike : public Error {
 public:
  DuplicateStrike(double x, double y, std::size_t line, std::size_t cell, int dot);
  double x, y;
};

// Machine frame -> page frame: undoes the bed_depth flip and, for back-side
// rasters, unfolds the mirror (x' = width - x).
StrikeRaster raster_to_page_frame(const StrikeRaster& raster,
                                  const MachineConfig& cfg,
                                  const PageSpec& page);

// Snaps each strike to its nominal dot and rebuilds cells per physical line.
// Trailing blank cells are trimmed; lines without dots are empty.
std::vector<CellLine> raster_to_cells(const StrikeRaster& page_raster,
                                      const PageSpec& page,
                                      const CellGeometry& geom,
                                      const DecodeOptions& opt,
                                      Warnings* warnings = nullptr);

enum class LineJoin {
  // Physical lines are wrap continuations of one paragraph; every line but
  // the last is padded with blank cells to the line capacity.
  kParagraph,
  // Each physical line is one text line.
  kLines,
};

std::string decode_page(const std::vector<CellLine>& lines,
                        std::size_t capacity, LineJoin join);

}  // namespace braillecam
