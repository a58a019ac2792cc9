#include "braillecam/pipeline.hpp"

#include <functional>

#include "json_util.hpp"

namespace braillecam {

std::string text_to_gcode(std::string_view text, const JobConfig& cfg,
                          bool mirror, Warnings* warnings) {
  cfg.validate();
  const BrailleText cells = encode_text(text, cfg.unknown_chars, warnings);
  DotMap map = layout_dots(cells, cfg.page, cfg.geometry);
  if (mirror) map = mirror_dotmap(map, warnings);
  return emit_program(map, cfg.machine, cfg.emit);
}

Simulation simulate(std::string_view gcode, const JobConfig& cfg, Side side) {
  cfg.validate();
  ExecuteOptions opt;
  opt.expect_homing = cfg.emit.home_first;
  opt.side = side;
  Simulation sim;
  sim.result = execute(parse_program(gcode), cfg.machine, MachineState{}, opt);
  sim.page_raster = raster_to_page_frame(sim.result.raster, cfg.machine, cfg.page);
  return sim;
}

namespace {

std::string describe_mismatch(const std::string& expected, const std::string& got) {
  std::size_t i = 0;
  while (i < expected.size() && i < got.size() && expected[i] == got[i]) ++i;
  auto excerpt = [&](const std::string& s) {
    const std::size_t from = i < 10 ? 0 : i - 10;
    return nlohmann::json(s.substr(from, 20)).dump();
  };
  return "first difference at character " + std::to_string(i) + ": expected " +
         excerpt(expected) + ", decoded " + excerpt(got);
}

}  // namespace

RoundtripReport roundtrip(std::string_view text, const JobConfig& cfg, bool mirror) {
  RoundtripReport report;
  report.expected = std::string(text);
  std::string stage = "config";
  auto run = [&](const char* name, const std::function<void()>& fn) {
    stage = name;
    fn();
  };
  try {
    cfg.validate();
    BrailleText cells;
    DotMap map;
    std::string gcode;
    Simulation sim;
    std::vector<CellLine> lines;
    run("encode", [&] { cells = encode_text(text, cfg.unknown_chars); });
    run("layout", [&] { map = layout_dots(cells, cfg.page, cfg.geometry); });
    if (mirror) run("mirror", [&] { map = mirror_dotmap(map); });
    run("emit", [&] { gcode = emit_program(map, cfg.machine, cfg.emit); });
    run("execute", [&] { sim = simulate(gcode, cfg, map.page.side); });
    run("decode", [&] {
      lines = raster_to_cells(sim.page_raster, cfg.page, cfg.geometry, cfg.decode);
      const LineJoin join = text.find('\n') == std::string_view::npos
                                ? LineJoin::kParagraph
                                : LineJoin::kLines;
      report.decoded = decode_page(lines, line_capacity(cfg.page, cfg.geometry), join);
    });
  } catch (const std::exception& e) {
    report.stage = stage;
    report.message = e.what();
    return report;
  }
  if (report.decoded != report.expected) {
    report.stage = "compare";
    report.message = describe_mismatch(report.expected, report.decoded);
    return report;
  }
  report.pass = true;
  return report;
}

std::string roundtrip_to_json(const RoundtripReport& report) {
  nlohmann::ordered_json doc;
  doc["pass"] = report.pass;
  doc["stage"] = report.stage;
  doc["message"] = report.message;
  doc["expected"] = report.expected;
  doc["decoded"] = report.decoded;
  return doc.dump() + "\n";
}

std::string render_svg(const StrikeRaster& page_raster, const PageSpec& page,
                       const CellGeometry& geom) {
  const std::string w = format_coord(page.width);
  const std::string h = format_coord(page.height);
  const std::string r = format_coord(geom.dot_diameter / 2);
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + w + "mm\" height=\"" +
         h + "mm\" viewBox=\"0 0 " + w + " " + h + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + w + "\" height=\"" + h +
         "\" fill=\"white\" stroke=\"#999\" stroke-width=\"0.2\"/>\n";
  for (const Strike& s : page_raster.strikes) {
    out += "<circle cx=\"" + format_coord(s.x) + "\" cy=\"" + format_coord(s.y) +
           "\" r=\"" + r + "\" fill=\"black\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace braillecam
