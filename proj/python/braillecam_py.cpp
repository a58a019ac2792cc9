#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "braillecam/cli.hpp"
#include "braillecam/pipeline.hpp"

namespace py = pybind11;
using namespace braillecam;

namespace {

JobConfig config_or_default(const std::optional<std::string>& config_json) {
  return config_json ? job_config_from_json(*config_json) : JobConfig{};
}

std::vector<std::vector<unsigned>> to_masks(const std::vector<CellLine>& lines) {
  std::vector<std::vector<unsigned>> out;
  for (const CellLine& line : lines) {
    std::vector<unsigned> row;
    for (BrailleCell c : line) row.push_back(c.mask());
    out.push_back(std::move(row));
  }
  return out;
}

BrailleText from_masks(const std::vector<std::vector<unsigned>>& masks) {
  BrailleText out;
  for (const auto& row : masks) {
    CellLine line;
    for (unsigned m : row) line.push_back(BrailleCell(m));
    out.push_back(std::move(line));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_braillecam, m) {
  m.doc() = "Braille embosser toolchain";

  py::register_exception<Error>(m, "BrailleCamError", PyExc_ValueError);

  m.def(
      "encode",
      [](const std::string& text, bool replace) {
        Warnings warnings;
        auto cells = encode_text(
            text, replace ? UnknownCharPolicy::kReplace : UnknownCharPolicy::kStrict,
            &warnings);
        return py::make_tuple(to_masks(cells), warnings);
      },
      py::arg("text"), py::arg("replace") = false,
      "Text to per-line cell masks. Returns (masks, warnings).");

  m.def(
      "decode", [](const std::vector<std::vector<unsigned>>& masks) {
        return decode_cells(from_masks(masks));
      },
      py::arg("masks"));

  m.def("translate", [](const std::string& text) {
    return to_unicode_braille(encode_text(text));
  });

  m.def("cell_to_unicode", [](unsigned mask) {
    return u32_to_utf8(std::u32string(1, cell_to_unicode(BrailleCell(mask))));
  });

  m.def("unicode_to_cell", [](const std::string& ch) {
    const std::u32string cps = utf8_to_u32(ch);
    if (cps.size() != 1) throw InvalidArgument("expected a single code point");
    return unicode_to_cell(cps[0]).mask();
  });

  m.def("mirror_cell", [](unsigned mask) { return mirror_cell(BrailleCell(mask)).mask(); });

  m.def("derive_steps_per_mm", &derive_steps_per_mm, py::arg("step_angle_deg"),
        py::arg("microsteps"), py::arg("travel_per_rev_mm"));

  m.def(
      "line_capacity",
      [](const std::optional<std::string>& config_json) {
        const JobConfig cfg = config_or_default(config_json);
        return line_capacity(cfg.page, cfg.geometry);
      },
      py::arg("config_json") = py::none());

  m.def(
      "layout",
      [](const std::string& text, bool mirror, const std::optional<std::string>& config_json) {
        const JobConfig cfg = config_or_default(config_json);
        DotMap map = layout_dots(encode_text(text, cfg.unknown_chars), cfg.page, cfg.geometry);
        if (mirror) map = mirror_dotmap(map);
        return dotmap_to_json(map);
      },
      py::arg("text"), py::arg("mirror") = false, py::arg("config_json") = py::none(),
      "Dot map as JSON.");

  m.def(
      "gcode",
      [](const std::string& text, bool mirror, const std::optional<std::string>& config_json) {
        Warnings warnings;
        std::string program = text_to_gcode(text, config_or_default(config_json), mirror, &warnings);
        return py::make_tuple(program, warnings);
      },
      py::arg("text"), py::arg("mirror") = false, py::arg("config_json") = py::none());

  m.def(
      "simulate",
      [](const std::string& gcode, const std::optional<std::string>& side,
         const std::optional<std::string>& config_json) {
        const JobConfig cfg = config_or_default(config_json);
        const Simulation sim = simulate(gcode, cfg, side ? side_from_string(*side) : cfg.page.side);
        return py::make_tuple(raster_to_json(sim.result.raster, sim.result.elapsed),
                              sim.result.warnings);
      },
      py::arg("gcode"), py::arg("side") = py::none(), py::arg("config_json") = py::none(),
      "Runs G-code on the virtual embosser. Returns (raster_json, warnings).");

  m.def(
      "roundtrip",
      [](const std::string& text, bool mirror, const std::optional<std::string>& config_json) {
        return roundtrip_to_json(roundtrip(text, config_or_default(config_json), mirror));
      },
      py::arg("text"), py::arg("mirror") = false, py::arg("config_json") = py::none());

  m.def(
      "send_loopback",
      [](const std::string& gcode, const std::optional<std::string>& config_json) {
        const JobConfig cfg = config_or_default(config_json);
        Controller controller(cfg.machine);
        LoopbackTransport link(controller);
        const TransferReport report = stream(gcode, link, cfg.sender);
        return report_to_json(report);
      },
      py::arg("gcode"), py::arg("config_json") = py::none(),
      "Streams G-code to the simulated controller. Returns the transfer report JSON.");

  m.def("default_config", [] { return job_config_to_json(JobConfig{}); });

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line tool in-process. Returns (code, stdout, stderr).");
}
