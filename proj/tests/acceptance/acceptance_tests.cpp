// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "braillecam/cli.hpp"
#include "braillecam/pipeline.hpp"
#include "support.hpp"

using namespace braillecam;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

// Shared corpus for the pipeline criteria: supported alphabet, length up to
// three physical lines, never ending in a space.
std::vector<std::string> pipeline_corpus(const JobConfig& cfg) {
  std::mt19937 rng(20240601);
  const std::size_t cap = line_capacity(cfg.page, cfg.geometry);
  std::vector<std::string> corpus;
  for (int i = 0; i < 200; ++i) corpus.push_back(testing::random_text(rng, cap * 3));
  return corpus;
}

Outcome bijection() {
  Outcome o;
  std::set<char32_t> seen;
  for (unsigned m = 0; m < 64; ++m) {
    const char32_t cp = cell_to_unicode(BrailleCell(m));
    if (cp < 0x2800 || cp > 0x283F) o.fail("mask " + std::to_string(m) + " leaves the block");
    if (!seen.insert(cp).second) o.fail("duplicate codepoint for mask " + std::to_string(m));
    if (unicode_to_cell(cp).mask() != m) o.fail("mask " + std::to_string(m) + " does not return");
  }
  if (seen.size() != 64) o.fail("only " + std::to_string(seen.size()) + " codepoints");
  o.detail = o.pass ? "64 masks <-> U+2800..U+283F" : o.detail;
  return o;
}

Outcome pipeline_identity(const JobConfig& cfg, bool mirror) {
  Outcome o;
  int passed = 0;
  for (const std::string& t : pipeline_corpus(cfg)) {
    const RoundtripReport r = roundtrip(t, cfg, mirror);
    if (r.pass) {
      ++passed;
    } else {
      o.fail("\"" + t + "\" failed at " + r.stage + ": " + r.message);
    }
  }
  if (o.pass) o.detail = std::to_string(passed) + "/200 strings recovered exactly";
  return o;
}

Outcome mirror_rectification(const JobConfig& cfg) {
  Outcome o = pipeline_identity(cfg, true);
  double worst = 0;
  for (const std::string& t : pipeline_corpus(cfg)) {
    const DotMap map = layout_dots(encode_text(t), cfg.page, cfg.geometry);
    const DotMap twice = mirror_dotmap(mirror_dotmap(map));
    if (twice.dots.size() != map.dots.size()) {
      o.fail("double mirror changed the dot count");
      continue;
    }
    for (std::size_t i = 0; i < map.dots.size(); ++i) {
      worst = std::max({worst, std::abs(twice.dots[i].x - map.dots[i].x),
                        std::abs(twice.dots[i].y - map.dots[i].y)});
    }
  }
  if (worst > 1e-9) o.fail("mirror twice moved a dot by " + fmt("%.3g", worst) + " mm");
  if (o.pass) o.detail += "; mirror twice max deviation " + fmt("%.1e", worst) + " mm";
  return o;
}

Outcome geometry_conformance() {
  Outcome o;
  constexpr double kTol = 1e-9;
  const CellGeometry geom;
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> width(60, 300), margin(5, 25);
  std::size_t layouts = 0;
  for (int i = 0; i < 300; ++i) {
    PageSpec page;
    page.width = width(rng);
    page.height = 297;
    page.margin_left = margin(rng);
    page.margin_right = margin(rng);
    page.margin_top = margin(rng);
    std::size_t cap;
    try {
      cap = line_capacity(page, geom);
    } catch (const PageTooNarrow&) {
      continue;
    }
    DotMap map;
    try {
      map = layout_dots(encode_text(testing::random_text(rng, cap * 4, true)), page, geom);
    } catch (const PageOverflow&) {
      continue;
    }
    ++layouts;
    // Cell origins derived from each dot must agree within a cell.
    std::map<std::size_t, std::pair<double, double>> origin;
    for (const Dot& d : map.dots) {
      const DotOffset off = dot_offset(d.dot_number);
      const std::pair<double, double> at{d.x - off.column * geom.dot_pitch,
                                         d.y - off.row * geom.dot_pitch};
      auto [it, fresh] = origin.emplace(d.cell_index, at);
      if (!fresh && (std::abs(it->second.first - at.first) > kTol ||
                     std::abs(it->second.second - at.second) > kTol)) {
        o.fail("intra-cell spacing differs from dot_pitch in cell " +
               std::to_string(d.cell_index));
      }
    }
    // Cells on one line are cell_pitch apart per index step; line origins sit
    // on the line_pitch grid.
    for (auto a = origin.begin(); a != origin.end(); ++a) {
      auto b = std::next(a);
      if (b == origin.end() || std::abs(b->second.second - a->second.second) > kTol) continue;
      const double steps = static_cast<double>(b->first - a->first);
      if (std::abs(b->second.first - a->second.first - steps * geom.cell_pitch) > kTol) {
        o.fail("cell origins off cell_pitch at cell " + std::to_string(a->first));
      }
    }
    for (const auto& [cell, at] : origin) {
      if (std::abs(at.second - page.margin_top -
                   std::round((at.second - page.margin_top) / geom.line_pitch) * geom.line_pitch) >
          kTol) {
        o.fail("line origins off line_pitch at cell " + std::to_string(cell));
      }
    }
  }
  PageSpec a4;
  a4.width = 210;
  a4.height = 297;
  const std::size_t a4_cap = line_capacity(a4, geom);
  const std::size_t brute =
      testing::brute_force_capacity(a4.usable_width(), geom.dot_pitch, geom.cell_pitch);
  if (a4_cap != 30 || brute != 30) {
    o.fail("A4 capacity " + std::to_string(a4_cap) + ", brute force " + std::to_string(brute));
  }
  if (o.pass) {
    o.detail = std::to_string(layouts) + " layouts on the 2.5/6.0/10.0 grid; A4 capacity 30";
  }
  return o;
}

Outcome machine_constants(const JobConfig& cfg) {
  Outcome o;
  const double spm = derive_steps_per_mm(1.8, 4, 36);
  if (std::abs(spm - 22.2222) > 1e-4) o.fail("steps/mm " + fmt("%.6f", spm));
  const double bound = 0.0225;
  double worst = 0;
  std::size_t strikes = 0;
  for (const std::string& t : pipeline_corpus(cfg)) {
    const DotMap map = layout_dots(encode_text(t), cfg.page, cfg.geometry);
    const auto ordered = order_strikes(map, cfg.emit.traversal);
    const auto r = execute(parse_program(emit_program(map, cfg.machine, cfg.emit)), cfg.machine);
    if (r.raster.strikes.size() != ordered.size()) {
      o.fail("strike count mismatch for \"" + t + "\"");
      continue;
    }
    for (std::size_t i = 0; i < ordered.size(); ++i) {
      worst = std::max({worst, std::abs(r.raster.strikes[i].x - ordered[i].x),
                        std::abs(r.raster.strikes[i].y - machine_y(ordered[i].y, cfg.machine))});
    }
    strikes += ordered.size();
  }
  if (worst > bound + 1e-12) o.fail("quantization error " + fmt("%.6f", worst) + " mm");
  bool rejected = false;
  try {
    execute(parse_program("G0 X80\n"), cfg.machine);
  } catch (const SoftLimitViolation&) {
    rejected = true;
  }
  if (!rejected) o.fail("G0 X80 accepted under 75 mm travel");
  if (o.pass) {
    o.detail = "steps/mm " + fmt("%.6f", spm) + "; max quantization " + fmt("%.4f", worst) +
               " mm over " + std::to_string(strikes) + " strikes; G0 X80 rejected";
  }
  return o;
}

Outcome homing() {
  Outcome o;
  const MachineConfig cfg;
  const HomingConfig& h = cfg.homing;
  std::vector<double> starts;
  for (int i = 0; i <= 300; ++i) starts.push_back(i * 0.25);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> any(0, 75);
  for (int i = 0; i < 200; ++i) starts.push_back(any(rng));
  const std::vector<HomingPhaseKind> trace = {HomingPhaseKind::kSearch, HomingPhaseKind::kLatchBackoff,
                                              HomingPhaseKind::kLatch, HomingPhaseKind::kZeroBackoff};
  double worst = 0;
  for (double s : starts) {
    MachineState st;
    st.position[0] = s;
    const HomingResult r = home_axis(st, Axis::kX, cfg);
    std::vector<HomingPhaseKind> kinds;
    for (const HomingPhase& p : r.phases) kinds.push_back(p.kind);
    if (kinds != trace) o.fail("phase trace differs from " + fmt("%.3f", s));
    if (r.state.pos(Axis::kX) != 73.0) o.fail("final X " + fmt("%.9f", r.state.pos(Axis::kX)));
    const double expected = ((75.0 - s) / h.search_velocity + h.latch_backoff / h.search_velocity +
                             h.latch_backoff / h.latch_velocity + h.zero_backoff / h.latch_velocity) *
                            60.0;
    worst = std::max(worst, std::abs(r.state.clock - expected));
  }
  if (worst > 1e-6) o.fail("homing time off by " + fmt("%.3g", worst) + " s");
  if (o.pass) {
    o.detail = std::to_string(starts.size()) + " starts; final X 73.0; time error " +
               fmt("%.1e", worst) + " s";
  }
  return o;
}

Outcome flow_control() {
  Outcome o;
  std::mt19937 rng(4242);
  std::uniform_int_distribution<int> drain_d(0, 4), window_d(1, 8), depth_d(4, 28), len_d(1, 120);
  std::uniform_real_distribution<double> pos(0, 75);
  int episodes = 0;
  long responses_seen = 0;
  while (episodes < 500) {
    const int depth = depth_d(rng);
    const int window = window_d(rng);
    if (window > depth) continue;
    const int floor = std::uniform_int_distribution<int>(0, depth - window)(rng);
    const int drain = drain_d(rng);
    ++episodes;

    std::string program = "G21\nG90\n";
    const int lines = len_d(rng);
    for (int i = 0; i < lines; ++i) {
      program += "G0 X" + format_coord(pos(rng)) + " Y" + format_coord(pos(rng)) + "\n";
    }
    MachineConfig mc;
    mc.planner_depth = depth;
    mc.drain_rate = drain;
    Controller controller(mc);
    LoopbackTransport link(controller);
    RecordingTransport recorder(link, nullptr, nullptr);
    const TransferReport r = stream(program, recorder, SenderConfig{window, floor, 5.0});

    const std::string tag = " (depth " + std::to_string(depth) + ", window " +
                            std::to_string(window) + ", floor " + std::to_string(floor) +
                            ", drain " + std::to_string(drain) + ")";
    int last_n = 0;
    for (const std::string& line : recorder.responses()) {
      ++responses_seen;
      const Response resp = parse_response(line);
      if (const auto* f = std::get_if<response::Failure>(&resp)) {
        if (f->message == "buffer overflow") o.fail("buffer overflow" + tag);
      }
      if (const auto* a = std::get_if<response::Ack>(&resp)) {
        if (a->n <= last_n) o.fail("ack numbers not increasing" + tag);
        last_n = a->n;
      }
    }
    if (controller.overflow_count() != 0) o.fail("controller counted an overflow" + tag);
    if (r.max_inflight > window) o.fail("max_inflight above window" + tag);
    if (r.lines_acked > r.lines_sent) o.fail("more acks than lines" + tag);
    if (drain >= 1 && (!r.ok() || r.lines_acked != lines + 2)) o.fail("transfer incomplete" + tag);
  }
  if (o.pass) {
    o.detail = "500 episodes, " + std::to_string(responses_seen) +
               " responses, no overflow, acks increasing";
  }
  return o;
}

Outcome determinism() {
  Outcome o;
  std::string tmpl = (fs::temp_directory_path() / "braillecam-accept-XXXXXX").string();
  if (!mkdtemp(tmpl.data())) {
    o.fail("cannot create a temporary directory");
    return o;
  }
  const fs::path dir = tmpl;
  const fs::path input = dir / "input.txt";
  std::ofstream(input) << "The quick brown fox, 42 jumps!";
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::vector<std::string> outputs;
  for (const char* name : {"one.gcode", "two.gcode"}) {
    std::ostringstream out, err;
    const int code =
        run_cli({"gcode", input.string(), "--out", (dir / name).string()}, out, err);
    if (code != kExitOk) o.fail("gcode exited " + std::to_string(code) + ": " + err.str());
    outputs.push_back(slurp(dir / name));
  }
  const std::size_t h1 = std::hash<std::string>{}(outputs[0]);
  const std::size_t h2 = std::hash<std::string>{}(outputs[1]);
  if (outputs[0].empty()) o.fail("empty G-code output");
  if (h1 != h2 || outputs[0] != outputs[1]) o.fail("outputs differ");
  if (o.pass) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016zx", h1);
    o.detail = "two runs, " + std::to_string(outputs[0].size()) + " bytes, hash " + buf;
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  return o;
}

}  // namespace

int main() {
  const JobConfig cfg;
  struct Criterion {
    const char* name;
    double time_limit;  // seconds; 0 = none
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"64-code bijection", 1.0, bijection},
      {"pipeline identity", 10.0, [&] { return pipeline_identity(cfg, false); }},
      {"mirror rectification", 0, [&] { return mirror_rectification(cfg); }},
      {"geometry conformance", 0, geometry_conformance},
      {"machine constants", 0, [&] { return machine_constants(cfg); }},
      {"homing", 0, homing},
      {"flow control", 30.0, flow_control},
      {"determinism", 0, determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double took = seconds_since(t0);
    if (criteria[i].time_limit > 0 && took >= criteria[i].time_limit) {
      o.fail("took " + fmt("%.2f", took) + " s, limit " + fmt("%.0f", criteria[i].time_limit) + " s");
    }
    std::string timing = fmt("%.3f s", took);
    if (criteria[i].time_limit > 0) timing += " < " + fmt("%.0f s", criteria[i].time_limit);
    std::printf("[%s] %zu. %s: %s (%s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                o.detail.c_str(), timing.c_str());
    if (!o.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
