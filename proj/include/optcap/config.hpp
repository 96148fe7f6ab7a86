#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "optcap/geometry.hpp"
#include "optcap/scenarios.hpp"

namespace optcap {

struct SweepSpec {
  double min = 0.0;
  double max = 0.0;
  int points = 0;
  bool log = true;

  std::vector<double> values() const;
};

/// Everything a CLI run needs, in SI units.
struct RunConfig {
  std::optional<OpticalGeometry> geometry;  // optional only with spectrum_file
  Scenario scenario = Scenario::Lens;
  GridConfig grid;
  std::vector<double> photons;    // single N or the expanded sweep
  bool photons_from_sweep = false;
  double thermal = 0.0;
  GainOptions gain;
  Scenario compare_subject = Scenario::Lens;
  Scenario compare_reference = Scenario::FreeSpace;
  std::optional<std::string> spectrum_file;
  std::optional<std::string> output;

  const OpticalGeometry& require_geometry() const;
};

Scenario parse_scenario(const std::string& name);

/// Validates a parsed document. Errors are ConfigError naming the field.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

}  // namespace optcap
