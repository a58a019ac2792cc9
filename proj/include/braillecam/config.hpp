#pragma once

#include <string>

#include "braillecam/braille.hpp"
#include "braillecam/decoder.hpp"
#include "braillecam/gcode.hpp"
#include "braillecam/layout.hpp"
#include "braillecam/machine_config.hpp"
#include "braillecam/sender.hpp"

namespace braillecam {

// Everything one pipeline run needs. An empty JSON object is a valid config;
// every field has a default.
struct JobConfig {
  UnknownCharPolicy unknown_chars = UnknownCharPolicy::kStrict;
  PageSpec page;
  CellGeometry geometry;
  MachineConfig machine;
  EmitOptions emit;
  DecodeOptions decode;
  SenderConfig sender;

  // Checks every component invariant.
  void validate() const;
};

// Parses a config document. Unknown keys and wrong types are rejected with
// InvalidArgument naming the offending path.
JobConfig job_config_from_json(const std::string& text);
// Full document with every field spelled out.
std::string job_config_to_json(const JobConfig& cfg);

}  // namespace braillecam
