#pragma once

#include <array>
#include <optional>
#include <string>

namespace braillecam {

enum class Axis { kX = 0, kY = 1 };
inline constexpr std::array<Axis, 2> kAxes = {Axis::kX, Axis::kY};
inline constexpr std::size_t kAxisCount = 2;
char axis_letter(Axis axis);

// (360 / step_angle) * microsteps / travel_per_rev.
double derive_steps_per_mm(double step_angle_deg, int microsteps,
                           double travel_per_rev_mm);

struct AxisConfig {
  double travel_min = 0.0;
  double travel_max = 75.0;
  double velocity_max = 1000.0;  // mm/min
  double steps_per_mm = derive_steps_per_mm(1.8, 4, 36.0);
  bool switch_max_homing = true;
};

struct HomingConfig {
  double search_velocity = 400.0;  // mm/min
  double latch_velocity = 100.0;   // mm/min
  double latch_backoff = 2.0;      // mm
  double zero_backoff = 2.0;       // mm
};

// X axis and homing values are the reference machine's controller settings.
// Y drives the paper roller; its travel covers a full page length.
struct MachineConfig {
  AxisConfig x;
  AxisConfig y{.travel_max = 300.0};
  HomingConfig homing;
  int planner_depth = 28;
  // Queued commands completed per protocol response cycle.
  int drain_rate = 1;
  double supply_voltage = 24.0;
  double solenoid_voltage = 12.0;
  double junction_deviation = 0.05;  // carried, unused by the motion model
  double max_jerk = 20.0;            // carried, unused by the motion model
  // When set, machine y = bed_depth - layout y. Unset: machine y = layout y.
  std::optional<double> bed_depth;

  const AxisConfig& axis(Axis a) const { return a == Axis::kX ? x : y; }
  AxisConfig& axis(Axis a) { return a == Axis::kX ? x : y; }
  void validate() const;
};

}  // namespace braillecam
