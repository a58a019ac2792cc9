#include "braillecam/machine.hpp"

#include <algorithm>
#include <cmath>

#include "json_util.hpp"

namespace braillecam {
namespace {

constexpr double kMmPerInch = 25.4;

std::size_t idx(Axis a) { return static_cast<std::size_t>(a); }

// mm at mm/min -> seconds
double travel_seconds(double distance, double velocity) {
  return distance / velocity * 60.0;
}

}  // namespace

char axis_letter(Axis axis) { return axis == Axis::kX ? 'X' : 'Y'; }

double derive_steps_per_mm(double step_angle_deg, int microsteps,
                           double travel_per_rev_mm) {
  if (!(step_angle_deg > 0) || microsteps <= 0 || !(travel_per_rev_mm > 0)) {
    throw InvalidArgument("motor parameters must be > 0");
  }
  return (360.0 / step_angle_deg) * microsteps / travel_per_rev_mm;
}

void MachineConfig::validate() const {
  for (Axis a : kAxes) {
    const AxisConfig& ax = axis(a);
    const std::string name(1, axis_letter(a));
    if (!(ax.travel_max > 0)) throw InvalidArgument(name + " travel_max must be > 0");
    if (!(ax.travel_min < ax.travel_max)) {
      throw InvalidArgument(name + " travel_min must be below travel_max");
    }
    if (!(ax.velocity_max > 0)) throw InvalidArgument(name + " velocity_max must be > 0");
    if (!(ax.steps_per_mm > 0)) throw InvalidArgument(name + " steps_per_mm must be > 0");
  }
  if (!(homing.search_velocity > 0) || !(homing.latch_velocity > 0)) {
    throw InvalidArgument("homing velocities must be > 0");
  }
  if (homing.latch_backoff < 0 || homing.zero_backoff < 0) {
    throw InvalidArgument("homing backoffs must be >= 0");
  }
  if (planner_depth < 1) throw InvalidArgument("planner_depth must be >= 1");
  if (drain_rate < 0) throw InvalidArgument("drain_rate must be >= 0");
  if (supply_voltage < 12.0 || supply_voltage > 30.0) {
    throw InvalidArgument("supply_voltage must be between 12 and 30 V");
  }
  if (!(solenoid_voltage > 0) || solenoid_voltage > supply_voltage) {
    throw InvalidArgument("solenoid_voltage must be > 0 and within the supply voltage");
  }
}

const char* to_string(HomingPhaseKind kind) {
  switch (kind) {
    case HomingPhaseKind::kSearch: return "search";
    case HomingPhaseKind::kLatchBackoff: return "latch_backoff";
    case HomingPhaseKind::kLatch: return "latch";
    case HomingPhaseKind::kZeroBackoff: return "zero_backoff";
  }
  return "?";
}

SoftLimitViolation::SoftLimitViolation(Axis axis, int line, double value)
    : Error("SoftLimitViolation",
            "line " + std::to_string(line) + ": " + axis_letter(axis) +
                format_coord(value) + " is outside the soft limits"),
      axis(axis),
      line(line),
      value(value) {}

NoSwitchConfigured::NoSwitchConfigured(Axis axis)
    : Error("NoSwitchConfigured",
            std::string("no homing switch configured on axis ") + axis_letter(axis)),
      axis(axis) {}

NotHomed::NotHomed(Axis axis, int line)
    : Error("NotHomed", "line " + std::to_string(line) + ": axis " +
                            axis_letter(axis) + " moved before homing") {}

HomingResult home_axis(const MachineState& state, Axis axis,
                       const MachineConfig& cfg) {
  const AxisConfig& ax = cfg.axis(axis);
  if (!ax.switch_max_homing) throw NoSwitchConfigured(axis);
  const HomingConfig& h = cfg.homing;

  HomingResult result{state, {}};
  double pos = state.pos(axis);
  auto phase = [&](HomingPhaseKind kind, double to, double velocity) {
    const double duration = travel_seconds(std::abs(to - pos), velocity);
    result.phases.push_back({axis, kind, pos, to, velocity, duration});
    result.state.clock += duration;
    pos = to;
  };
  // The switch trips at travel_max; a start beyond it is already tripped.
  phase(HomingPhaseKind::kSearch, std::max(pos, ax.travel_max), h.search_velocity);
  pos = ax.travel_max;
  phase(HomingPhaseKind::kLatchBackoff, ax.travel_max - h.latch_backoff, h.search_velocity);
  phase(HomingPhaseKind::kLatch, ax.travel_max, h.latch_velocity);
  phase(HomingPhaseKind::kZeroBackoff, ax.travel_max - h.zero_backoff, h.latch_velocity);

  result.state.position[idx(axis)] = pos;
  result.state.homed[idx(axis)] = true;
  return result;
}

double quantize_to_steps(double mm, double steps_per_mm) {
  return std::round(mm * steps_per_mm) / steps_per_mm;
}

Machine::Machine(MachineConfig cfg, MachineState start, ExecuteOptions opt)
    : cfg_(std::move(cfg)), state_(start), opt_(opt) {
  cfg_.validate();
  raster_.side = opt.side;
}

void Machine::check_homed(Axis axis, int line) {
  if (!opt_.expect_homing || state_.homed[idx(axis)] ||
      not_homed_reported_[idx(axis)] || opt_.not_homed == Severity::kIgnore) {
    return;
  }
  if (opt_.not_homed == Severity::kError) throw NotHomed(axis, line);
  not_homed_reported_[idx(axis)] = true;
  warnings_.push_back(NotHomed(axis, line).what());
}

void Machine::move(const std::optional<double>& x, const std::optional<double>& y,
                   double velocity_limit, int line) {
  const double scale = state_.units == Units::kInch ? kMmPerInch : 1.0;
  std::array<double, kAxisCount> target = state_.position;
  const std::array<const std::optional<double>*, kAxisCount> words = {&x, &y};
  double velocity = velocity_limit;
  for (Axis a : kAxes) {
    const auto& word = *words[idx(a)];
    if (!word) continue;
    const AxisConfig& ax = cfg_.axis(a);
    double commanded = *word * scale;
    if (state_.mode == DistanceMode::kRelative) commanded += state_.position[idx(a)];
    if (commanded < ax.travel_min || commanded > ax.travel_max) {
      throw SoftLimitViolation(a, line, commanded);
    }
    check_homed(a, line);
    target[idx(a)] = quantize_to_steps(commanded, ax.steps_per_mm);
    if (target[idx(a)] != state_.position[idx(a)]) {
      velocity = std::min(velocity, ax.velocity_max);
    }
  }
  const double distance = std::hypot(target[0] - state_.position[0],
                                     target[1] - state_.position[1]);
  if (distance > 0 && state_.solenoid_on) {
    warnings_.push_back("line " + std::to_string(line) +
                        ": move with solenoid energized");
  }
  if (distance > 0) state_.clock += travel_seconds(distance, velocity);
  state_.position = target;
}

void Machine::step(const GcodeCommand& cmd) {
  if (ended_) return;
  const int line = cmd.line_number;
  const double scale = state_.units == Units::kInch ? kMmPerInch : 1.0;
  std::visit(
      [&](const auto& op) {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, gcmd::UnitsMm>) {
          state_.units = Units::kMm;
        } else if constexpr (std::is_same_v<T, gcmd::UnitsInch>) {
          state_.units = Units::kInch;
        } else if constexpr (std::is_same_v<T, gcmd::Absolute>) {
          state_.mode = DistanceMode::kAbsolute;
        } else if constexpr (std::is_same_v<T, gcmd::Relative>) {
          state_.mode = DistanceMode::kRelative;
        } else if constexpr (std::is_same_v<T, gcmd::Rapid>) {
          move(op.x, op.y, std::max(cfg_.x.velocity_max, cfg_.y.velocity_max), line);
        } else if constexpr (std::is_same_v<T, gcmd::Linear>) {
          if (op.f) feed_ = *op.f * scale;
          move(op.x, op.y,
               feed_.value_or(std::max(cfg_.x.velocity_max, cfg_.y.velocity_max)), line);
        } else if constexpr (std::is_same_v<T, gcmd::Dwell>) {
          state_.clock += op.seconds;
        } else if constexpr (std::is_same_v<T, gcmd::Home>) {
          for (Axis a : kAxes) {
            if ((a == Axis::kX && !op.x) || (a == Axis::kY && !op.y)) continue;
            HomingResult r = home_axis(state_, a, cfg_);
            state_ = r.state;
            homing_.insert(homing_.end(), r.phases.begin(), r.phases.end());
          }
        } else if constexpr (std::is_same_v<T, gcmd::SolenoidOn>) {
          if (!state_.solenoid_on) {
            state_.solenoid_on = true;
            pending_strike_ = Strike{state_.position[0], state_.position[1], state_.clock};
          }
        } else if constexpr (std::is_same_v<T, gcmd::SolenoidOff>) {
          if (state_.solenoid_on && pending_strike_) raster_.strikes.push_back(*pending_strike_);
          state_.solenoid_on = false;
          pending_strike_.reset();
        } else if constexpr (std::is_same_v<T, gcmd::ProgramEnd>) {
          if (state_.solenoid_on) {
            warnings_.push_back("line " + std::to_string(line) +
                                ": program ended with the solenoid energized");
          }
          ended_ = true;
        }
      },
      cmd.op);
}

ExecuteResult execute(const GcodeProgram& program, const MachineConfig& cfg,
                      const MachineState& start, const ExecuteOptions& opt) {
  Machine machine(cfg, start, opt);
  for (const GcodeCommand& cmd : program) {
    if (machine.ended()) break;
    machine.step(cmd);
  }
  ExecuteResult result;
  result.raster = machine.raster();
  result.final_state = machine.state();
  result.elapsed = machine.state().clock - start.clock;
  result.homing = machine.homing();
  result.warnings = machine.warnings();
  return result;
}

Controller::Controller(MachineConfig cfg, MachineState start, ExecuteOptions opt)
    : cfg_(cfg), machine_(std::move(cfg), start, opt) {}

int Controller::drain(int count) {
  int done = 0;
  while (done < count && !queue_.empty()) {
    GcodeCommand cmd = std::move(queue_.front());
    queue_.pop_front();
    ++done;
    if (alarm_) continue;
    try {
      machine_.step(cmd);
    } catch (const Error& e) {
      alarm_ = e.what();
      queue_.clear();
    }
  }
  return done;
}

std::string Controller::feed_line(std::string_view line) {
  drain(cfg_.drain_rate);
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) {
    line.remove_suffix(1);
  }
  const int n = ++lines_received_;
  auto error = [&](const std::string& msg) {
    return "{\"er\":{\"n\":" + std::to_string(n) +
           ",\"msg\":" + nlohmann::json(msg).dump() + "}}\n";
  };
  auto ack = [&] {
    return "{\"r\":{\"n\":" + std::to_string(n) + "},\"qr\":" +
           std::to_string(free_slots()) + "}\n";
  };
  if (alarm_) return error("alarm: " + *alarm_);

  std::optional<GcodeCommand> cmd;
  try {
    cmd = parse_line(line, n);
  } catch (const Error& e) {
    return error(e.what());
  }
  if (!cmd) return ack();
  if (free_slots() == 0) {
    ++overflows_;
    return "{\"er\":{\"msg\":\"buffer overflow\"}}\n";
  }
  queue_.push_back(std::move(*cmd));
  return ack();
}

std::optional<std::string> Controller::idle_cycle() {
  if (drain(cfg_.drain_rate) == 0) return std::nullopt;
  return "{\"qr\":" + std::to_string(free_slots()) + "}\n";
}

void Controller::finish() { drain(static_cast<int>(queue_.size())); }

std::string raster_to_json(const StrikeRaster& raster, double elapsed) {
  nlohmann::ordered_json doc;
  doc["side"] = to_string(raster.side);
  doc["elapsed"] = detail::round3(elapsed);
  auto strikes = nlohmann::ordered_json::array();
  for (const Strike& s : raster.strikes) {
    strikes.push_back({{"x", detail::round3(s.x)},
                       {"y", detail::round3(s.y)},
                       {"t", detail::round3(s.t)}});
  }
  doc["strikes"] = std::move(strikes);
  return doc.dump() + "\n";
}

StrikeRaster raster_from_json(const std::string& text) {
  const auto doc = detail::parse_json(text, "strike raster");
  StrikeRaster raster;
  raster.side = side_from_string(doc.at("side").get<std::string>());
  for (const auto& s : doc.at("strikes")) {
    raster.strikes.push_back(
        {s.at("x").get<double>(), s.at("y").get<double>(), s.at("t").get<double>()});
  }
  return raster;
}

}  // namespace braillecam
