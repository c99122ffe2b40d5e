#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "p2c/automaton.hpp"
#include "p2c/mapper.hpp"
#include "p2c/quantize.hpp"

namespace p2c {

/// Per-organ hyper-parameters for the whole pipeline.
struct Preset {
  std::string organ = "generic";
  QuantizationParams quantization;
  SimulationParams simulation;
  MappingParams mapping;

  /// Field and cross-field range checks; throws Errc::validation.
  void validate() const;
};

struct PresetLoad {
  Preset preset;
  std::vector<std::string> warnings;  // one per defaulted or unknown field
};

/// YAML with top-level `organ` and sections `quantization`, `simulation`,
/// `mapping`. Missing fields take defaults and produce a warning.
PresetLoad parse_preset(const std::string& text, const std::string& source = "<string>");
PresetLoad load_preset(const std::filesystem::path& path);

/// Complete YAML dump; parse_preset(preset_to_yaml(p)) reproduces p exactly.
std::string preset_to_yaml(const Preset& p);

}  // namespace p2c
