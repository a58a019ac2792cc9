#include "braillecam/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "braillecam/pipeline.hpp"

namespace braillecam {
namespace {

namespace fs = std::filesystem;

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("IoError", what) {}
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes through a temporary so a failed run never leaves partial output.
void write_file(const std::string& path, const std::string& content) {
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out.flush()) throw IoError("cannot write " + path);
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("cannot write " + path + ": " + ec.message());
}

struct Common {
  std::string config_path;
  std::string out_path;
  bool mirror = false;
};

JobConfig load_config(const Common& common) {
  std::string path = common.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("BRAILLECAM_CONFIG")) path = env;
  }
  if (path.empty()) return JobConfig{};
  return job_config_from_json(read_file(path));
}

void emit_output(const Common& common, const std::string& content, std::ostream& out) {
  if (common.out_path.empty()) {
    out << content;
  } else {
    write_file(common.out_path, content);
  }
}

void print_warnings(const Warnings& warnings, std::ostream& err) {
  for (const std::string& w : warnings) err << "warning: " << w << "\n";
}

std::string strip_final_newline(std::string text) {
  if (!text.empty() && text.back() == '\n') text.pop_back();
  return text;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Braille embosser toolchain: text to Braille, G-code, simulation"};
  app.require_subcommand(1);

  Common common;
  std::string input;
  std::string svg_path;
  std::string side_name;
  std::string transport_name = "loopback";
  std::string transcript_path;
  std::string responses_path;

  auto add_common = [&](CLI::App* sub, bool with_mirror) {
    sub->add_option("--config", common.config_path,
                    "JSON config (falls back to $BRAILLECAM_CONFIG)");
    sub->add_option("--out", common.out_path, "output path (default: stdout)");
    if (with_mirror) {
      sub->add_flag("--mirror", common.mirror, "mirror for reverse-side embossing");
    }
  };

  auto* translate = app.add_subcommand("translate", "text file -> Unicode Braille");
  translate->add_option("input", input, "UTF-8 text file")->required();
  add_common(translate, false);

  auto* gcode = app.add_subcommand("gcode", "text file -> embosser G-code");
  gcode->add_option("input", input, "UTF-8 text file")->required();
  add_common(gcode, true);

  auto* simulate_cmd = app.add_subcommand("simulate", "run G-code on the virtual embosser");
  simulate_cmd->add_option("input", input, "G-code file")->required();
  simulate_cmd->add_option("--svg", svg_path, "SVG plot path (default: <out>.svg)");
  simulate_cmd->add_option("--side", side_name, "page side the program embosses")
      ->check(CLI::IsMember({"front", "back"}));
  add_common(simulate_cmd, false);

  auto* roundtrip_cmd = app.add_subcommand("roundtrip", "verify text survives the pipeline");
  roundtrip_cmd->add_option("input", input, "UTF-8 text file")->required();
  add_common(roundtrip_cmd, true);

  auto* send = app.add_subcommand("send", "stream G-code with planner flow control");
  send->add_option("input", input, "G-code file")->required();
  send->add_option("--transport", transport_name, "loopback or file")
      ->check(CLI::IsMember({"loopback", "file"}));
  send->add_option("--transcript", transcript_path, "file receiving the bytes sent");
  send->add_option("--responses", responses_path,
                   "loopback: record responses here; file: replay responses from here");
  add_common(send, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitDomain;
  }

  try {
    const JobConfig cfg = load_config(common);

    if (translate->parsed()) {
      Warnings warnings;
      const std::string text = read_file(input);
      const std::string braille = to_unicode_braille(encode_text(text, cfg.unknown_chars, &warnings));
      print_warnings(warnings, err);
      emit_output(common, braille, out);
      return kExitOk;
    }

    if (gcode->parsed()) {
      Warnings warnings;
      const std::string program = text_to_gcode(read_file(input), cfg, common.mirror, &warnings);
      print_warnings(warnings, err);
      emit_output(common, program, out);
      return kExitOk;
    }

    if (simulate_cmd->parsed()) {
      const Side side = side_name.empty() ? cfg.page.side : side_from_string(side_name);
      const Simulation sim = simulate(read_file(input), cfg, side);
      print_warnings(sim.result.warnings, err);
      const std::string json = raster_to_json(sim.result.raster, sim.result.elapsed);
      const std::string svg = render_svg(sim.page_raster, cfg.page, cfg.geometry);
      if (svg_path.empty() && !common.out_path.empty()) {
        svg_path = fs::path(common.out_path).replace_extension(".svg").string();
      }
      emit_output(common, json, out);
      if (!svg_path.empty()) write_file(svg_path, svg);
      err << "strikes: " << sim.result.raster.strikes.size()
          << ", estimated time: " << format_coord(sim.result.elapsed) << " s\n";
      return kExitOk;
    }

    if (roundtrip_cmd->parsed()) {
      const RoundtripReport report =
          roundtrip(strip_final_newline(read_file(input)), cfg, common.mirror);
      emit_output(common, roundtrip_to_json(report), out);
      if (!report.pass) {
        err << "roundtrip failed at " << report.stage << ": " << report.message << "\n";
        return kExitVerification;
      }
      return kExitOk;
    }

    if (send->parsed()) {
      const std::string program = read_file(input);
      std::ofstream transcript;
      if (!transcript_path.empty()) {
        transcript.open(transcript_path, std::ios::binary | std::ios::trunc);
        if (!transcript) throw IoError("cannot write " + transcript_path);
      }
      TransferReport report;
      if (transport_name == "loopback") {
        std::ofstream responses;
        if (!responses_path.empty()) {
          responses.open(responses_path, std::ios::binary | std::ios::trunc);
          if (!responses) throw IoError("cannot write " + responses_path);
        }
        Controller controller(cfg.machine);
        LoopbackTransport link(controller);
        RecordingTransport recorder(link, transcript.is_open() ? &transcript : nullptr,
                                    responses.is_open() ? &responses : nullptr);
        report = stream(program, recorder, cfg.sender);
        controller.finish();
      } else {
        if (responses_path.empty() || transcript_path.empty()) {
          throw InvalidArgument("file transport needs --transcript and --responses");
        }
        std::ifstream responses(responses_path, std::ios::binary);
        if (!responses) throw IoError("cannot read " + responses_path);
        FileTransport link(transcript, responses);
        report = stream(program, link, cfg.sender);
      }
      emit_output(common, report_to_json(report), out);
      for (const TransferError& e : report.errors) {
        err << "line " << e.line << ": " << e.message << "\n";
      }
      return report.ok() ? kExitOk : kExitDomain;
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const UnsupportedCharacter& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitDomain;
}

}  // namespace braillecam
