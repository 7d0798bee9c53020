#pragma once

#include "uwar/sim/scenario.hpp"

#include <string>

namespace uwar::sim {

/// Parses a scenario document. Keys not present keep their defaults; a
/// top-level `preset: <name>` starts from that preset instead. Unknown keys
/// and malformed values throw std::invalid_argument.
Scenario parse_scenario(const std::string& yaml_text);
Scenario load_scenario_file(const std::string& path);

/// Resolves `arg` as a preset name first, then as a file path.
Scenario load_scenario(const std::string& arg);

/// Emits every field; parse_scenario(emit_scenario(s)) reproduces s.
std::string emit_scenario(const Scenario& scenario);

/// Human-readable list of every scenario key, for --help.
std::string scenario_key_reference();

}  // namespace uwar::sim
