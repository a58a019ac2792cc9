#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "braillecam/error.hpp"
#include "braillecam/layout.hpp"
#include "braillecam/machine_config.hpp"

namespace braillecam {

// Embosser dialect. One command per line; G4 P is in seconds.
namespace gcmd {
struct UnitsMm {  // G21
  friend bool operator==(const UnitsMm&, const UnitsMm&) = default;
};
struct UnitsInch {  // G20
  friend bool operator==(const UnitsInch&, const UnitsInch&) = default;
};
struct Absolute {  // G90
  friend bool operator==(const Absolute&, const Absolute&) = default;
};
struct Relative {  // G91
  friend bool operator==(const Relative&, const Relative&) = default;
};
struct Rapid {  // G0
  std::optional<double> x, y;
  friend bool operator==(const Rapid&, const Rapid&) = default;
};
struct Linear {  // G1
  std::optional<double> x, y, f;
  friend bool operator==(const Linear&, const Linear&) = default;
};
struct Dwell {  // G4 P<seconds>
  double seconds = 0;
  friend bool operator==(const Dwell&, const Dwell&) = default;
};
struct Home {  // G28.2, axis word values are ignored
  bool x = false, y = false;
  friend bool operator==(const Home&, const Home&) = default;
};
struct SolenoidOn {  // M8
  friend bool operator==(const SolenoidOn&, const SolenoidOn&) = default;
};
struct SolenoidOff {  // M9
  friend bool operator==(const SolenoidOff&, const SolenoidOff&) = default;
};
struct ProgramEnd {  // M30
  friend bool operator==(const ProgramEnd&, const ProgramEnd&) = default;
};
}  // namespace gcmd

using GcodeOp = std::variant<gcmd::UnitsMm, gcmd::UnitsInch, gcmd::Absolute,
                             gcmd::Relative, gcmd::Rapid, gcmd::Linear,
                             gcmd::Dwell, gcmd::Home, gcmd::SolenoidOn,
                             gcmd::SolenoidOff, gcmd::ProgramEnd>;

struct GcodeCommand {
  GcodeOp op;
  int line_number = 0;  // 1-based source line

  friend bool operator==(const GcodeCommand&, const GcodeCommand&) = default;
};

using GcodeProgram = std::vector<GcodeCommand>;

enum class Traversal { kSerpentine, kRowMajor };
Traversal traversal_from_string(const std::string& s);
const char* to_string(Traversal t);

struct EmitOptions {
  double dwell_s = 0.05;
  // Carried for G1 positioning; the emitted template uses rapids only.
  double feed_mm_min = 1000.0;
  bool home_first = false;
  Traversal traversal = Traversal::kSerpentine;

  void validate() const;
};

class TravelExceeded : public Error {
 public:
  TravelExceeded(Axis axis, double value, double limit);
  Axis axis;
  double value;
  double limit;
};

class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, std::string token, const std::string& why);
  int line;
  int column;  // 1-based
  std::string token;
};

class UnsupportedWord : public Error {
 public:
  UnsupportedWord(int line, std::string word);
  int line;
  std::string word;
};

std::vector<Dot> order_strikes(const DotMap& map, Traversal traversal);

// Converts a layout-frame y to the machine frame.
double machine_y(double layout_y, const MachineConfig& cfg);
double layout_y(double machine_y, const MachineConfig& cfg);

std::string emit_program(const DotMap& map, const MachineConfig& cfg,
                         const EmitOptions& opt);

// Fixed-point, exactly three fractional digits, never "-0.000".
std::string format_coord(double value);

// Parses one source line. Blank and comment-only lines yield nullopt.
std::optional<GcodeCommand> parse_line(std::string_view line, int line_number);
GcodeProgram parse_program(std::string_view text);

// Canonical text for a single command, as the emitter writes it.
std::string to_gcode(const GcodeCommand& cmd);

}  // namespace braillecam
