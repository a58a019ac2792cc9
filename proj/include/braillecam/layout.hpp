#pragma once

#include <string>
#include <vector>

#include "braillecam/braille.hpp"
#include "braillecam/error.hpp"

namespace braillecam {

// Cell dimensions in mm. Defaults follow the Marburg Medium standard.
struct CellGeometry {
  double dot_pitch = 2.5;
  double cell_pitch = 6.0;
  double line_pitch = 10.0;
  double dot_diameter = 1.4;

  void validate() const;
};

enum class Side { kFront, kBack };
const char* to_string(Side side);
Side side_from_string(const std::string& s);

// Page in the layout frame: origin top-left, x to the right, y downward.
// The default page is sized to the 75 mm X travel of the reference machine.
struct PageSpec {
  double width = 75.0;
  double height = 120.0;
  double margin_left = 15.0;
  double margin_right = 15.0;
  double margin_top = 15.0;
  double margin_bottom = 15.0;
  Side side = Side::kFront;

  double usable_width() const { return width - margin_left - margin_right; }
  double usable_height() const { return height - margin_top - margin_bottom; }
  void validate(const CellGeometry& geom) const;
};

struct Dot {
  double x = 0;
  double y = 0;
  std::size_t cell_index = 0;  // index into the flattened cell sequence
  int dot_number = 1;          // 1..6

  friend bool operator==(const Dot&, const Dot&) = default;
};

struct DotMap {
  std::vector<Dot> dots;
  PageSpec page;
};

class PageTooNarrow : public Error {
 public:
  PageTooNarrow(double usable, double dot_pitch);
};

class PageOverflow : public Error {
 public:
  explicit PageOverflow(std::size_t line, std::size_t capacity);
  std::size_t line;  // 0-based physical line that does not fit
};

// Cells per physical line: the largest n with (n-1)*cell_pitch + dot_pitch
// fitting in the usable width.
std::size_t line_capacity(const PageSpec& page, const CellGeometry& geom);
// Physical lines per page, by the same rule with line_pitch and 2*dot_pitch.
std::size_t page_line_capacity(const PageSpec& page, const CellGeometry& geom);

// Splits logical lines into physical lines of at most `capacity` cells.
// Wrapping is hard: mid-word, no hyphenation.
std::vector<CellLine> wrap_lines(const BrailleText& text, std::size_t capacity);

// Offset of a dot from its cell origin, in multiples of dot_pitch.
struct DotOffset {
  int column;  // 0 or 1
  int row;     // 0, 1 or 2
};
constexpr DotOffset dot_offset(int dot_number) {
  return {(dot_number - 1) / 3, (dot_number - 1) % 3};
}

DotMap layout_dots(const BrailleText& text, const PageSpec& page,
                   const CellGeometry& geom);

// Reflects x about the page width and flips the side. Adds a warning when
// the left and right margins differ.
DotMap mirror_dotmap(const DotMap& map, Warnings* warnings = nullptr);

// {"page":{...},"dots":[{"x":..,"y":..,"cell":..,"dot":..}]}
std::string dotmap_to_json(const DotMap& map);
DotMap dotmap_from_json(const std::string& text);

}  // namespace braillecam
