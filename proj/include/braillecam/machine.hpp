#pragma once

#include <array>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "braillecam/error.hpp"
#include "braillecam/gcode.hpp"
#include "braillecam/layout.hpp"
#include "braillecam/machine_config.hpp"

namespace braillecam {

enum class Units { kMm, kInch };
enum class DistanceMode { kAbsolute, kRelative };

struct MachineState {
  std::array<double, kAxisCount> position{};  // mm
  std::array<bool, kAxisCount> homed{};
  bool solenoid_on = false;
  double clock = 0.0;  // seconds
  Units units = Units::kMm;
  DistanceMode mode = DistanceMode::kAbsolute;

  double pos(Axis a) const { return position[static_cast<std::size_t>(a)]; }
  friend bool operator==(const MachineState&, const MachineState&) = default;
};

struct Strike {
  double x = 0;  // mm, machine frame
  double y = 0;
  double t = 0;  // seconds
};

struct StrikeRaster {
  std::vector<Strike> strikes;
  Side side = Side::kFront;
};

enum class HomingPhaseKind { kSearch, kLatchBackoff, kLatch, kZeroBackoff };
const char* to_string(HomingPhaseKind kind);

struct HomingPhase {
  Axis axis;
  HomingPhaseKind kind;
  double from;      // mm
  double to;        // mm
  double velocity;  // mm/min
  double duration;  // seconds
};

struct HomingResult {
  MachineState state;
  std::vector<HomingPhase> phases;
};

class SoftLimitViolation : public Error {
 public:
  SoftLimitViolation(Axis axis, int line, double value);
  Axis axis;
  int line;
  double value;
};

class NoSwitchConfigured : public Error {
 public:
  explicit NoSwitchConfigured(Axis axis);
  Axis axis;
};

class NotHomed : public Error {
 public:
  NotHomed(Axis axis, int line);
};

enum class Severity { kIgnore, kWarning, kError };

struct ExecuteOptions {
  // Motion on an unhomed axis is reported with `not_homed` severity.
  bool expect_homing = false;
  Severity not_homed = Severity::kWarning;
  Side side = Side::kFront;
};

struct ExecuteResult {
  StrikeRaster raster;
  MachineState final_state;
  double elapsed = 0;  // seconds
  std::vector<HomingPhase> homing;
  Warnings warnings;
};

// Homing cycle against the max-side switch:
// search -> latch backoff -> latch -> zero backoff.
// Ends at travel_max - zero_backoff with the axis marked homed.
HomingResult home_axis(const MachineState& state, Axis axis,
                       const MachineConfig& cfg);

// Nearest multiple of 1 / steps_per_mm.
double quantize_to_steps(double mm, double steps_per_mm);

// Step-by-step interpreter. `execute` and the protocol controller are both
// built on it.
class Machine {
 public:
  Machine(MachineConfig cfg, MachineState start, ExecuteOptions opt = {});

  void step(const GcodeCommand& cmd);
  bool ended() const { return ended_; }

  const MachineConfig& config() const { return cfg_; }
  const MachineState& state() const { return state_; }
  const StrikeRaster& raster() const { return raster_; }
  const std::vector<HomingPhase>& homing() const { return homing_; }
  const Warnings& warnings() const { return warnings_; }

 private:
  void move(const std::optional<double>& x, const std::optional<double>& y,
            double velocity_limit, int line);
  void check_homed(Axis axis, int line);

  MachineConfig cfg_;
  MachineState state_;
  ExecuteOptions opt_;
  StrikeRaster raster_;
  std::vector<HomingPhase> homing_;
  Warnings warnings_;
  std::optional<double> feed_;  // modal G1 feed, mm/min
  std::optional<Strike> pending_strike_;
  std::array<bool, kAxisCount> not_homed_reported_{};
  bool ended_ = false;
};

ExecuteResult execute(const GcodeProgram& program, const MachineConfig& cfg,
                      const MachineState& start = {},
                      const ExecuteOptions& opt = {});

// Line-oriented controller with a bounded planner queue. Each call to
// feed_line is one response cycle: `drain_rate` queued commands complete,
// then the new line is parsed and queued.
//
// Responses (one line, no padding):
//   {"r":{"n":<n>},"qr":<free>}           line accepted
//   {"er":{"n":<n>,"msg":"<reason>"}}      line rejected, no slot consumed
//   {"er":{"msg":"buffer overflow"}}       line arrived with no free slot
//   {"qr":<free>}                          idle cycle freed slots
class Controller {
 public:
  explicit Controller(MachineConfig cfg, MachineState start = {},
                      ExecuteOptions opt = {});

  std::string feed_line(std::string_view line);
  // A cycle with no incoming line. Returns a queue report when slots were
  // freed, nullopt when nothing changed.
  std::optional<std::string> idle_cycle();
  // Executes everything still queued.
  void finish();

  int planner_depth() const { return cfg_.planner_depth; }
  int free_slots() const { return cfg_.planner_depth - occupied_slots(); }
  int occupied_slots() const { return static_cast<int>(queue_.size()); }
  int lines_received() const { return lines_received_; }
  int overflow_count() const { return overflows_; }
  const std::optional<std::string>& alarm() const { return alarm_; }
  const Machine& machine() const { return machine_; }

 private:
  int drain(int count);

  MachineConfig cfg_;
  Machine machine_;
  std::deque<GcodeCommand> queue_;
  int lines_received_ = 0;
  int overflows_ = 0;
  std::optional<std::string> alarm_;
};

// {"side":"front","elapsed":..,"strikes":[{"x":..,"y":..,"t":..}]}
std::string raster_to_json(const StrikeRaster& raster, double elapsed);
StrikeRaster raster_from_json(const std::string& text);

}  // namespace braillecam
