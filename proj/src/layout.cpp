#include "braillecam/layout.hpp"

#include <algorithm>
#include <cmath>

#include "json_util.hpp"

namespace braillecam {
namespace {

// Tolerance for floating-point comparisons of lengths in mm.
constexpr double kEps = 1e-9;

std::size_t fit_count(double usable, double extent, double pitch) {
  if (usable + kEps < extent) return 0;
  return static_cast<std::size_t>(std::floor((usable - extent) / pitch + kEps)) + 1;
}

}  // namespace

void CellGeometry::validate() const {
  if (!(dot_pitch > 0)) throw InvalidArgument("dot_pitch must be > 0");
  if (!(cell_pitch > dot_pitch)) {
    throw InvalidArgument("cell_pitch must exceed dot_pitch");
  }
  if (!(line_pitch > 2 * dot_pitch)) {
    throw InvalidArgument("line_pitch must exceed 2 * dot_pitch");
  }
  if (!(dot_diameter > 0)) throw InvalidArgument("dot_diameter must be > 0");
}

const char* to_string(Side side) {
  return side == Side::kFront ? "front" : "back";
}

Side side_from_string(const std::string& s) {
  if (s == "front") return Side::kFront;
  if (s == "back") return Side::kBack;
  throw InvalidArgument("side must be \"front\" or \"back\", got \"" + s + "\"");
}

void PageSpec::validate(const CellGeometry& geom) const {
  if (!(width > 0) || !(height > 0)) {
    throw InvalidArgument("page width and height must be > 0");
  }
  if (margin_left < 0 || margin_right < 0 || margin_top < 0 || margin_bottom < 0) {
    throw InvalidArgument("page margins must be >= 0");
  }
  if (usable_width() + kEps < geom.dot_pitch) {
    throw InvalidArgument("usable page width is narrower than one cell");
  }
  if (usable_height() + kEps < 2 * geom.dot_pitch) {
    throw InvalidArgument("usable page height is shorter than one cell");
  }
}

PageTooNarrow::PageTooNarrow(double usable, double dot_pitch)
    : Error("PageTooNarrow", "usable width " + std::to_string(usable) +
                                 " mm cannot hold a cell of width " +
                                 std::to_string(dot_pitch) + " mm") {}

PageOverflow::PageOverflow(std::size_t line, std::size_t capacity)
    : Error("PageOverflow", "line " + std::to_string(line + 1) +
                                " exceeds the page capacity of " +
                                std::to_string(capacity) + " lines"),
      line(line) {}

std::size_t line_capacity(const PageSpec& page, const CellGeometry& geom) {
  const std::size_t n =
      fit_count(page.usable_width(), geom.dot_pitch, geom.cell_pitch);
  if (n == 0) throw PageTooNarrow(page.usable_width(), geom.dot_pitch);
  return n;
}

std::size_t page_line_capacity(const PageSpec& page, const CellGeometry& geom) {
  return fit_count(page.usable_height(), 2 * geom.dot_pitch, geom.line_pitch);
}

std::vector<CellLine> wrap_lines(const BrailleText& text, std::size_t capacity) {
  std::vector<CellLine> out;
  for (const CellLine& line : text) {
    if (line.empty()) {
      out.emplace_back();
      continue;
    }
    for (std::size_t start = 0; start < line.size(); start += capacity) {
      const std::size_t end = std::min(line.size(), start + capacity);
      out.emplace_back(line.begin() + static_cast<std::ptrdiff_t>(start),
                       line.begin() + static_cast<std::ptrdiff_t>(end));
    }
  }
  return out;
}

DotMap layout_dots(const BrailleText& text, const PageSpec& page,
                   const CellGeometry& geom) {
  geom.validate();
  page.validate(geom);
  const std::size_t per_line = line_capacity(page, geom);
  const std::size_t max_lines = page_line_capacity(page, geom);

  DotMap map;
  map.page = page;
  std::size_t cell_index = 0;
  const std::vector<CellLine> lines = wrap_lines(text, per_line);
  for (std::size_t row = 0; row < lines.size(); ++row) {
    const bool has_dots = std::any_of(lines[row].begin(), lines[row].end(),
                                      [](BrailleCell c) { return !c.blank(); });
    if (row >= max_lines && has_dots) throw PageOverflow(row, max_lines);
    const double origin_y = page.margin_top + static_cast<double>(row) * geom.line_pitch;
    for (std::size_t k = 0; k < lines[row].size(); ++k, ++cell_index) {
      const double origin_x = page.margin_left + static_cast<double>(k) * geom.cell_pitch;
      for (int dot = 1; dot <= 6; ++dot) {
        if (!lines[row][k].raised(dot)) continue;
        const DotOffset off = dot_offset(dot);
        map.dots.push_back({origin_x + off.column * geom.dot_pitch,
                            origin_y + off.row * geom.dot_pitch, cell_index, dot});
      }
    }
  }
  return map;
}

DotMap mirror_dotmap(const DotMap& map, Warnings* warnings) {
  if (warnings && std::abs(map.page.margin_left - map.page.margin_right) > kEps) {
    warnings->push_back(
        "AsymmetricMargins: left and right margins differ, mirrored dots may "
        "leave the printable band");
  }
  DotMap out = map;
  out.page.side = map.page.side == Side::kFront ? Side::kBack : Side::kFront;
  for (Dot& d : out.dots) d.x = map.page.width - d.x;
  return out;
}

std::string dotmap_to_json(const DotMap& map) {
  nlohmann::ordered_json doc;
  doc["page"] = detail::page_to_json(map.page);
  auto dots = nlohmann::ordered_json::array();
  for (const Dot& d : map.dots) {
    dots.push_back({{"x", detail::round3(d.x)},
                    {"y", detail::round3(d.y)},
                    {"cell", d.cell_index},
                    {"dot", d.dot_number}});
  }
  doc["dots"] = std::move(dots);
  return doc.dump() + "\n";
}

DotMap dotmap_from_json(const std::string& text) {
  const auto doc = detail::parse_json(text, "dot map");
  DotMap map;
  map.page = detail::page_from_json(doc.at("page"));
  for (const auto& d : doc.at("dots")) {
    map.dots.push_back({d.at("x").get<double>(), d.at("y").get<double>(),
                        d.at("cell").get<std::size_t>(), d.at("dot").get<int>()});
  }
  return map;
}

}  // namespace braillecam
