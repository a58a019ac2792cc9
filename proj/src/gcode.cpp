#include "braillecam/gcode.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>

namespace braillecam {

Traversal traversal_from_string(const std::string& s) {
  if (s == "serpentine") return Traversal::kSerpentine;
  if (s == "row_major") return Traversal::kRowMajor;
  throw InvalidArgument("traversal must be \"serpentine\" or \"row_major\", got \"" + s + "\"");
}

const char* to_string(Traversal t) {
  return t == Traversal::kSerpentine ? "serpentine" : "row_major";
}

void EmitOptions::validate() const {
  if (!(dwell_s > 0)) throw InvalidArgument("dwell_s must be > 0");
  if (!(feed_mm_min > 0)) throw InvalidArgument("feed_mm_min must be > 0");
}

TravelExceeded::TravelExceeded(Axis axis, double value, double limit)
    : Error("TravelExceeded", std::string(1, axis_letter(axis)) + " = " +
                                  format_coord(value) +
                                  " mm is outside the axis travel (limit " +
                                  format_coord(limit) + " mm)"),
      axis(axis),
      value(value),
      limit(limit) {}

SyntaxError::SyntaxError(int line, int column, std::string token,
                         const std::string& why)
    : Error("SyntaxError", "line " + std::to_string(line) + ", column " +
                               std::to_string(column) + ": " + why + " near '" +
                               token + "'"),
      line(line),
      column(column),
      token(std::move(token)) {}

UnsupportedWord::UnsupportedWord(int line, std::string word)
    : Error("UnsupportedWord",
            "line " + std::to_string(line) + ": unsupported word " + word),
      line(line),
      word(std::move(word)) {}

std::vector<Dot> order_strikes(const DotMap& map, Traversal traversal) {
  std::vector<Dot> dots = map.dots;
  auto key = [](const Dot& d) {
    return std::tuple(d.y, d.x, d.cell_index, d.dot_number);
  };
  std::sort(dots.begin(), dots.end(),
            [&](const Dot& a, const Dot& b) { return key(a) < key(b); });
  if (traversal == Traversal::kRowMajor) return dots;

  // Bands are runs of identical y; every second band runs right to left.
  std::size_t band = 0;
  for (auto first = dots.begin(); first != dots.end(); ++band) {
    auto last = std::find_if(first, dots.end(),
                             [&](const Dot& d) { return d.y != first->y; });
    if (band % 2 == 1) {
      std::stable_sort(first, last,
                       [](const Dot& a, const Dot& b) { return a.x > b.x; });
    }
    first = last;
  }
  return dots;
}

double machine_y(double layout_y, const MachineConfig& cfg) {
  return cfg.bed_depth ? *cfg.bed_depth - layout_y : layout_y;
}

double layout_y(double machine_y, const MachineConfig& cfg) {
  return cfg.bed_depth ? *cfg.bed_depth - machine_y : machine_y;
}

std::string format_coord(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", value);
  std::string s(buf);
  if (s == "-0.000") s = "0.000";
  return s;
}

namespace {

void check_travel(Axis axis, double value, const AxisConfig& ax) {
  if (value > ax.travel_max) throw TravelExceeded(axis, value, ax.travel_max);
  if (value < ax.travel_min) throw TravelExceeded(axis, value, ax.travel_min);
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

std::string to_gcode(const GcodeCommand& cmd) {
  auto axes = [](std::string s, const std::optional<double>& x,
                 const std::optional<double>& y) {
    if (x) s += " X" + format_coord(*x);
    if (y) s += " Y" + format_coord(*y);
    return s;
  };
  return std::visit(
      Overloaded{
          [](const gcmd::UnitsMm&) -> std::string { return "G21"; },
          [](const gcmd::UnitsInch&) -> std::string { return "G20"; },
          [](const gcmd::Absolute&) -> std::string { return "G90"; },
          [](const gcmd::Relative&) -> std::string { return "G91"; },
          [&](const gcmd::Rapid& r) { return axes("G0", r.x, r.y); },
          [&](const gcmd::Linear& l) {
            std::string s = axes("G1", l.x, l.y);
            if (l.f) s += " F" + format_coord(*l.f);
            return s;
          },
          [](const gcmd::Dwell& d) { return "G4 P" + format_coord(d.seconds); },
          [](const gcmd::Home& h) {
            std::string s = "G28.2";
            if (h.x) s += " X0";
            if (h.y) s += " Y0";
            return s;
          },
          [](const gcmd::SolenoidOn&) -> std::string { return "M8"; },
          [](const gcmd::SolenoidOff&) -> std::string { return "M9"; },
          [](const gcmd::ProgramEnd&) -> std::string { return "M30"; },
      },
      cmd.op);
}

std::string emit_program(const DotMap& map, const MachineConfig& cfg,
                         const EmitOptions& opt) {
  opt.validate();
  const std::vector<Dot> strikes = order_strikes(map, opt.traversal);
  // Validate every position before producing any output.
  for (const Dot& d : strikes) {
    check_travel(Axis::kX, d.x, cfg.x);
    check_travel(Axis::kY, machine_y(d.y, cfg), cfg.y);
  }

  std::string out;
  auto put = [&](GcodeOp op) {
    out += to_gcode(GcodeCommand{std::move(op), 0});
    out += '\n';
  };
  put(gcmd::UnitsMm{});
  put(gcmd::Absolute{});
  if (opt.home_first) put(gcmd::Home{true, true});
  for (const Dot& d : strikes) {
    put(gcmd::Rapid{d.x, machine_y(d.y, cfg)});
    put(gcmd::SolenoidOn{});
    put(gcmd::Dwell{opt.dwell_s});
    put(gcmd::SolenoidOff{});
  }
  put(gcmd::Rapid{0.0, 0.0});
  put(gcmd::ProgramEnd{});
  return out;
}

namespace {

struct Word {
  char letter;
  std::string text;  // as written, e.g. "G28.2"
  double value;
  int column;
};

bool is_number_char(char c) {
  return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+';
}

std::vector<Word> tokenize(std::string_view line, int line_number) {
  std::vector<Word> words;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == ';') break;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '(') {
      const std::size_t close = line.find(')', i);
      if (close == std::string_view::npos) {
        throw SyntaxError(line_number, static_cast<int>(i) + 1,
                          std::string(line.substr(i)), "unterminated comment");
      }
      i = close + 1;
      continue;
    }
    const int column = static_cast<int>(i) + 1;
    if (!std::isalpha(static_cast<unsigned char>(c))) {
      throw SyntaxError(line_number, column, std::string(1, c), "unexpected character");
    }
    const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    std::size_t j = i + 1;
    while (j < line.size() && (line[j] == ' ' || line[j] == '\t')) ++j;
    const std::size_t num_start = j;
    while (j < line.size() && is_number_char(line[j])) ++j;
    std::string number(line.substr(num_start, j - num_start));
    std::string token = std::string(1, letter) + number;
    // [+-]? digits [. digits] | [+-]? . digits
    std::size_t k = 0;
    if (k < number.size() && (number[k] == '+' || number[k] == '-')) ++k;
    const std::size_t int_start = k;
    while (k < number.size() && std::isdigit(static_cast<unsigned char>(number[k]))) ++k;
    bool digits = k > int_start;
    if (k < number.size() && number[k] == '.') {
      ++k;
      const std::size_t frac_start = k;
      while (k < number.size() && std::isdigit(static_cast<unsigned char>(number[k]))) ++k;
      digits = digits || k > frac_start;
    }
    if (number.empty() || !digits || k != number.size()) {
      throw SyntaxError(line_number, column, token, "malformed number");
    }
    words.push_back({letter, token, std::strtod(number.c_str(), nullptr), column});
    i = j;
  }
  return words;
}

enum class Kind { kNone, kG0, kG1, kG4, kG20, kG21, kG28_2, kG90, kG91, kM8, kM9, kM30 };

Kind classify(const Word& w, int line_number) {
  auto is = [&](double v) { return std::abs(w.value - v) < 1e-9; };
  if (w.letter == 'G') {
    if (is(0)) return Kind::kG0;
    if (is(1)) return Kind::kG1;
    if (is(4)) return Kind::kG4;
    if (is(20)) return Kind::kG20;
    if (is(21)) return Kind::kG21;
    if (is(28.2)) return Kind::kG28_2;
    if (is(90)) return Kind::kG90;
    if (is(91)) return Kind::kG91;
  } else {
    if (is(8)) return Kind::kM8;
    if (is(9)) return Kind::kM9;
    if (is(30)) return Kind::kM30;
  }
  throw UnsupportedWord(line_number, w.text);
}

}  // namespace

std::optional<GcodeCommand> parse_line(std::string_view line, int line_number) {
  const std::vector<Word> words = tokenize(line, line_number);
  if (words.empty()) return std::nullopt;

  const Word* command = nullptr;
  std::map<char, const Word*> params;
  for (const Word& w : words) {
    switch (w.letter) {
      case 'G':
      case 'M':
        if (command) {
          throw SyntaxError(line_number, w.column, w.text, "more than one command on a line");
        }
        command = &w;
        break;
      case 'X':
      case 'Y':
      case 'F':
      case 'P':
        if (!std::isfinite(w.value)) {
          throw SyntaxError(line_number, w.column, w.text, "non-finite value");
        }
        if (!params.emplace(w.letter, &w).second) {
          throw SyntaxError(line_number, w.column, w.text, "repeated word");
        }
        break;
      default:
        throw UnsupportedWord(line_number, w.text);
    }
  }
  if (!command) {
    const Word* first = params.begin()->second;
    throw SyntaxError(line_number, first->column, first->text, "parameter without a command");
  }

  const Kind kind = classify(*command, line_number);
  auto allow = [&](std::string_view allowed) {
    for (const auto& [letter, w] : params) {
      if (allowed.find(letter) == std::string_view::npos) {
        throw SyntaxError(line_number, w->column, w->text,
                          "word not valid for " + command->text);
      }
    }
  };
  auto get = [&](char letter) -> std::optional<double> {
    auto it = params.find(letter);
    if (it == params.end()) return std::nullopt;
    return it->second->value;
  };

  GcodeCommand cmd;
  cmd.line_number = line_number;
  switch (kind) {
    case Kind::kG0:
      allow("XY");
      cmd.op = gcmd::Rapid{get('X'), get('Y')};
      break;
    case Kind::kG1: {
      allow("XYF");
      auto f = get('F');
      if (f && !(*f > 0)) {
        throw SyntaxError(line_number, params['F']->column, params['F']->text, "feed must be > 0");
      }
      cmd.op = gcmd::Linear{get('X'), get('Y'), f};
      break;
    }
    case Kind::kG4: {
      allow("P");
      auto p = get('P');
      if (!p) throw SyntaxError(line_number, command->column, command->text, "G4 needs P");
      if (*p < 0) {
        throw SyntaxError(line_number, params['P']->column, params['P']->text, "dwell must be >= 0");
      }
      cmd.op = gcmd::Dwell{*p};
      break;
    }
    case Kind::kG28_2:
      allow("XY");
      if (params.empty()) {
        throw SyntaxError(line_number, command->column, command->text, "G28.2 needs an axis word");
      }
      cmd.op = gcmd::Home{params.contains('X'), params.contains('Y')};
      break;
    default:
      allow("");
      switch (kind) {
        case Kind::kG20: cmd.op = gcmd::UnitsInch{}; break;
        case Kind::kG21: cmd.op = gcmd::UnitsMm{}; break;
        case Kind::kG90: cmd.op = gcmd::Absolute{}; break;
        case Kind::kG91: cmd.op = gcmd::Relative{}; break;
        case Kind::kM8: cmd.op = gcmd::SolenoidOn{}; break;
        case Kind::kM9: cmd.op = gcmd::SolenoidOff{}; break;
        case Kind::kM30: cmd.op = gcmd::ProgramEnd{}; break;
        default: break;
      }
  }
  return cmd;
}

GcodeProgram parse_program(std::string_view text) {
  GcodeProgram program;
  int line_number = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_number;
    if (auto cmd = parse_line(text.substr(start, end - start), line_number)) {
      program.push_back(std::move(*cmd));
    }
    start = end + 1;
  }
  return program;
}

}  // namespace braillecam
