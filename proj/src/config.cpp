#include "braillecam/config.hpp"

#include <functional>
#include <set>

#include "json_util.hpp"

namespace braillecam {
namespace {

using Json = nlohmann::ordered_json;

// Walks one JSON object, rejecting keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw InvalidArgument(where() + " must be an object");
  }

  template <class T>
  ObjectReader& field(const char* key, T& out) {
    seen_.emplace(key);
    if (!j_.contains(key)) return *this;
    const Json& v = j_.at(key);
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw InvalidArgument("");
      } else if constexpr (std::is_same_v<T, int>) {
        if (!v.is_number_integer()) throw InvalidArgument("");
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw InvalidArgument("");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw InvalidArgument("");
      }
      out = v.get<T>();
    } catch (const std::exception&) {
      throw InvalidArgument(where(key) + " has the wrong type");
    }
    return *this;
  }

  ObjectReader& optional_number(const char* key, std::optional<double>& out) {
    seen_.emplace(key);
    if (!j_.contains(key)) return *this;
    const Json& v = j_.at(key);
    if (v.is_null()) {
      out.reset();
    } else if (v.is_number()) {
      out = v.get<double>();
    } else {
      throw InvalidArgument(where(key) + " must be a number or null");
    }
    return *this;
  }

  ObjectReader& object(const char* key, const std::function<void(ObjectReader&)>& fn) {
    seen_.emplace(key);
    if (!j_.contains(key)) return *this;
    ObjectReader child(j_.at(key), where(key));
    fn(child);
    child.finish();
    return *this;
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!seen_.contains(item.key())) {
        throw InvalidArgument("unknown config key " + where(item.key().c_str()));
      }
    }
  }

 private:
  std::string where(const char* key = nullptr) const {
    std::string p = path_.empty() ? "" : path_;
    if (key) p += (p.empty() ? "" : ".") + std::string(key);
    return p.empty() ? "<root>" : p;
  }

  const Json& j_;
  std::string path_;
  std::set<std::string, std::less<>> seen_;
};

void read_axis(ObjectReader& r, AxisConfig& ax) {
  r.field("travel_min", ax.travel_min)
      .field("travel_max", ax.travel_max)
      .field("velocity_max", ax.velocity_max)
      .field("steps_per_mm", ax.steps_per_mm)
      .field("switch_max_homing", ax.switch_max_homing);
}

Json axis_to_json(const AxisConfig& ax) {
  return Json{{"travel_min", ax.travel_min},
              {"travel_max", ax.travel_max},
              {"velocity_max", ax.velocity_max},
              {"steps_per_mm", ax.steps_per_mm},
              {"switch_max_homing", ax.switch_max_homing}};
}

void read_page(ObjectReader& r, PageSpec& page) {
  std::string side = to_string(page.side);
  r.field("width", page.width)
      .field("height", page.height)
      .field("margin_left", page.margin_left)
      .field("margin_right", page.margin_right)
      .field("margin_top", page.margin_top)
      .field("margin_bottom", page.margin_bottom)
      .field("side", side);
  page.side = side_from_string(side);
}

}  // namespace

namespace detail {

nlohmann::ordered_json page_to_json(const PageSpec& page) {
  return Json{{"width", round3(page.width)},
              {"height", round3(page.height)},
              {"margin_left", round3(page.margin_left)},
              {"margin_right", round3(page.margin_right)},
              {"margin_top", round3(page.margin_top)},
              {"margin_bottom", round3(page.margin_bottom)},
              {"side", to_string(page.side)}};
}

PageSpec page_from_json(const nlohmann::ordered_json& j) {
  PageSpec page;
  ObjectReader r(j, "page");
  read_page(r, page);
  r.finish();
  return page;
}

}  // namespace detail

void JobConfig::validate() const {
  geometry.validate();
  page.validate(geometry);
  machine.validate();
  emit.validate();
  // The tolerance-versus-pitch check belongs to the decode stage.
  if (!(decode.snap_tolerance > 0)) throw InvalidArgument("snap_tolerance must be > 0");
  sender.validate();
}

JobConfig job_config_from_json(const std::string& text) {
  const Json doc = detail::parse_json(text, "config");
  JobConfig cfg;
  ObjectReader root(doc, "");
  std::string unknown_chars = "strict";
  root.field("unknown_chars", unknown_chars);
  if (unknown_chars == "strict") {
    cfg.unknown_chars = UnknownCharPolicy::kStrict;
  } else if (unknown_chars == "replace") {
    cfg.unknown_chars = UnknownCharPolicy::kReplace;
  } else {
    throw InvalidArgument("unknown_chars must be \"strict\" or \"replace\"");
  }
  root.object("page", [&](ObjectReader& r) { read_page(r, cfg.page); });
  root.object("geometry", [&](ObjectReader& r) {
    r.field("dot_pitch", cfg.geometry.dot_pitch)
        .field("cell_pitch", cfg.geometry.cell_pitch)
        .field("line_pitch", cfg.geometry.line_pitch)
        .field("dot_diameter", cfg.geometry.dot_diameter);
  });
  root.object("machine", [&](ObjectReader& r) {
    MachineConfig& m = cfg.machine;
    r.object("x", [&](ObjectReader& a) { read_axis(a, m.x); })
        .object("y", [&](ObjectReader& a) { read_axis(a, m.y); })
        .object("homing", [&](ObjectReader& h) {
          h.field("search_velocity", m.homing.search_velocity)
              .field("latch_velocity", m.homing.latch_velocity)
              .field("latch_backoff", m.homing.latch_backoff)
              .field("zero_backoff", m.homing.zero_backoff);
        })
        .field("planner_depth", m.planner_depth)
        .field("drain_rate", m.drain_rate)
        .field("supply_voltage", m.supply_voltage)
        .field("solenoid_voltage", m.solenoid_voltage)
        .field("junction_deviation", m.junction_deviation)
        .field("max_jerk", m.max_jerk)
        .optional_number("bed_depth", m.bed_depth);
  });
  root.object("emit", [&](ObjectReader& r) {
    std::string traversal = to_string(cfg.emit.traversal);
    r.field("dwell_s", cfg.emit.dwell_s)
        .field("feed_mm_min", cfg.emit.feed_mm_min)
        .field("home_first", cfg.emit.home_first)
        .field("traversal", traversal);
    cfg.emit.traversal = traversal_from_string(traversal);
  });
  root.object("decode", [&](ObjectReader& r) {
    r.field("snap_tolerance", cfg.decode.snap_tolerance)
        .field("require_all_assigned", cfg.decode.require_all_assigned);
  });
  root.object("sender", [&](ObjectReader& r) {
    r.field("window", cfg.sender.window)
        .field("qr_floor", cfg.sender.qr_floor)
        .field("response_timeout", cfg.sender.response_timeout);
  });
  root.finish();
  cfg.validate();
  return cfg;
}

std::string job_config_to_json(const JobConfig& cfg) {
  const MachineConfig& m = cfg.machine;
  Json doc;
  doc["unknown_chars"] = cfg.unknown_chars == UnknownCharPolicy::kStrict ? "strict" : "replace";
  doc["page"] = detail::page_to_json(cfg.page);
  doc["geometry"] = Json{{"dot_pitch", cfg.geometry.dot_pitch},
                         {"cell_pitch", cfg.geometry.cell_pitch},
                         {"line_pitch", cfg.geometry.line_pitch},
                         {"dot_diameter", cfg.geometry.dot_diameter}};
  doc["machine"] = Json{
      {"x", axis_to_json(m.x)},
      {"y", axis_to_json(m.y)},
      {"homing", Json{{"search_velocity", m.homing.search_velocity},
                      {"latch_velocity", m.homing.latch_velocity},
                      {"latch_backoff", m.homing.latch_backoff},
                      {"zero_backoff", m.homing.zero_backoff}}},
      {"planner_depth", m.planner_depth},
      {"drain_rate", m.drain_rate},
      {"supply_voltage", m.supply_voltage},
      {"solenoid_voltage", m.solenoid_voltage},
      {"junction_deviation", m.junction_deviation},
      {"max_jerk", m.max_jerk},
      {"bed_depth", m.bed_depth ? Json(*m.bed_depth) : Json(nullptr)}};
  doc["emit"] = Json{{"dwell_s", cfg.emit.dwell_s},
                     {"feed_mm_min", cfg.emit.feed_mm_min},
                     {"home_first", cfg.emit.home_first},
                     {"traversal", to_string(cfg.emit.traversal)}};
  doc["decode"] = Json{{"snap_tolerance", cfg.decode.snap_tolerance},
                       {"require_all_assigned", cfg.decode.require_all_assigned}};
  doc["sender"] = Json{{"window", cfg.sender.window},
                       {"qr_floor", cfg.sender.qr_floor},
                       {"response_timeout", cfg.sender.response_timeout}};
  return doc.dump(2) + "\n";
}

}  // namespace braillecam
