#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "optcap/capacity.hpp"
#include "optcap/mode_spectrum.hpp"
#include "optcap/scenarios.hpp"

namespace optcap {

/// Shortest round-trip text for a double: 17 significant digits.
std::string format_double(double v);

/// Modes with eta below this are left out of spectrum exports.
inline constexpr double kExportEtaFloor = 1e-30;

/// CSV `k,sigma,eta`, k starting at 1.
void write_spectrum_csv(std::ostream& os, const ModeSpectrum& spectrum);
nlohmann::json spectrum_json(const ModeSpectrum& spectrum);

/// Parses a `k,sigma,eta` table. Throws ConfigError on malformed input.
ModeSpectrum read_spectrum_csv(std::istream& is);
ModeSpectrum read_spectrum_file(const std::string& path);

struct CapacitySummary {
  CapacityReport report;
  double photons = 0.0;
  // Closed-form value for the scenario's asymptotic spectrum, when one exists.
  std::optional<double> closed_form;
  std::optional<FormulaTag> closed_form_tag;
};

/// CSV `k,eta,n,contribution_nats`, then `#`-prefixed summary lines with
/// totals in nats and bits.
void write_capacity_csv(std::ostream& os, const CapacitySummary& summary);
nlohmann::json capacity_json(const CapacitySummary& summary);

/// One line of a gain table.
struct GainRow {
  double photons = 0.0;
  double lens = 0.0;
  double free_space = 0.0;
  std::optional<double> gain;
  std::string method;  // "numerical" or "closed-form"
  bool converged = true;
};

/// CSV `N,C_lens_nats,C_fs_nats,gain,method,converged`.
void write_gain_csv(std::ostream& os, const std::vector<GainRow>& rows);
nlohmann::json gain_json(const std::vector<GainRow>& rows);

}  // namespace optcap
