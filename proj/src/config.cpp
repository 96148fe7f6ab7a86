#include "optcap/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>

#include "optcap/error.hpp"

namespace optcap {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError("config: " + field + ": " + what);
}

void allow_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(where.empty() ? "<root>" : where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) fail(where.empty() ? key : where + "." + key, "unknown key");
  }
}

std::optional<double> opt_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) return std::nullopt;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(where + "." + key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(where + "." + key, "must be finite");
  return d;
}

double number(const json& obj, const char* key, const std::string& where) {
  auto v = opt_number(obj, key, where);
  if (!v) fail(where + "." + key, "missing");
  return *v;
}

std::optional<int> opt_int(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) return std::nullopt;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
  return v.get<int>();
}

std::optional<bool> opt_bool(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) return std::nullopt;
  const json& v = obj.at(key);
  if (!v.is_boolean()) fail(where + "." + key, "expected true or false");
  return v.get<bool>();
}

std::optional<std::string> opt_string(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) return std::nullopt;
  const json& v = obj.at(key);
  if (!v.is_string()) fail(where.empty() ? key : where + "." + key, "expected a string");
  return v.get<std::string>();
}

OpticalGeometry parse_geometry(const json& g) {
  allow_keys(g, "geometry",
             {"wavelength", "object_distance", "image_distance", "focal_length", "magnification",
              "pupil_radius", "patch_side", "paraxial_ratio"});
  GeometryInput in;
  in.wavelength = number(g, "wavelength", "geometry");
  in.object_distance = number(g, "object_distance", "geometry");
  in.image_distance = opt_number(g, "image_distance", "geometry");
  in.focal_length = opt_number(g, "focal_length", "geometry");
  in.magnification = opt_number(g, "magnification", "geometry");
  const int given = int(in.image_distance.has_value()) + int(in.focal_length.has_value()) +
                    int(in.magnification.has_value());
  if (given != 1) {
    fail("geometry", "give exactly one of image_distance, focal_length, magnification");
  }
  in.pupil_radius = number(g, "pupil_radius", "geometry");
  in.patch_side = number(g, "patch_side", "geometry");
  if (auto p = opt_number(g, "paraxial_ratio", "geometry")) in.paraxial_ratio = *p;
  try {
    return OpticalGeometry::make(in);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

}  // namespace

std::vector<double> SweepSpec::values() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    if (log) {
      out.push_back(std::exp(std::log(min) + t * (std::log(max) - std::log(min))));
    } else {
      out.push_back(min + t * (max - min));
    }
  }
  out.front() = min;
  out.back() = max;
  return out;
}

Scenario parse_scenario(const std::string& name) {
  if (name == "lens") return Scenario::Lens;
  if (name == "free_space") return Scenario::FreeSpace;
  if (name == "hole") return Scenario::Hole;
  throw ConfigError("config: scenario: expected lens, free_space or hole, got '" + name + "'");
}

const OpticalGeometry& RunConfig::require_geometry() const {
  if (!geometry) throw ConfigError("config: geometry: missing");
  return *geometry;
}

RunConfig parse_config(const json& doc) {
  allow_keys(doc, "",
             {"scenario", "geometry", "kernel", "grid", "budget", "thresholds", "compare",
              "spectrum_file", "output"});
  RunConfig cfg;
  if (auto s = opt_string(doc, "scenario", "")) cfg.scenario = parse_scenario(*s);
  cfg.spectrum_file = opt_string(doc, "spectrum_file", "");
  cfg.output = opt_string(doc, "output", "");

  if (doc.contains("geometry")) {
    cfg.geometry = parse_geometry(doc.at("geometry"));
  } else if (!cfg.spectrum_file) {
    fail("geometry", "missing");
  }

  if (doc.contains("kernel")) {
    const json& k = doc.at("kernel");
    allow_keys(k, "kernel", {"phase"});
    if (auto p = opt_bool(k, "phase", "kernel")) cfg.grid.with_phase = *p;
  }

  if (doc.contains("grid")) {
    const json& g = doc.at("grid");
    allow_keys(g, "grid", {"initial_order", "max_order", "rtol", "pupil_order", "pupil_angular_order",
                          "precision"});
    if (auto v = opt_int(g, "initial_order", "grid")) cfg.grid.convergence.initial_order = *v;
    if (auto v = opt_int(g, "max_order", "grid")) cfg.grid.convergence.max_order = *v;
    if (auto v = opt_number(g, "rtol", "grid")) cfg.grid.convergence.rtol = *v;
    if (auto v = opt_int(g, "pupil_order", "grid")) cfg.grid.pupil_order = *v;
    if (auto v = opt_int(g, "pupil_angular_order", "grid")) cfg.grid.pupil_angular_order = *v;
    if (auto v = opt_string(g, "precision", "grid")) {
      if (*v == "double") {
        cfg.grid.convergence.precision = SvdPrecision::Double;
      } else if (*v == "extended") {
        cfg.grid.convergence.precision = SvdPrecision::Extended;
      } else {
        fail("grid.precision", "expected \"double\" or \"extended\", got \"" + *v + "\"");
      }
    }
  }
  if (cfg.grid.convergence.initial_order < 4) fail("grid.initial_order", "must be at least 4");
  if (cfg.grid.convergence.max_order < cfg.grid.convergence.initial_order) {
    fail("grid.max_order", "must not be below grid.initial_order");
  }
  if (!(cfg.grid.convergence.rtol > 0.0)) fail("grid.rtol", "must be positive");
  if (cfg.grid.pupil_order < 4) fail("grid.pupil_order", "must be at least 4");
  if (cfg.grid.pupil_angular_order != 0 && cfg.grid.pupil_angular_order < 4) {
    fail("grid.pupil_angular_order", "must be 0 (automatic) or at least 4");
  }

  if (doc.contains("budget")) {
    const json& b = doc.at("budget");
    allow_keys(b, "budget", {"N", "sweep", "N_th"});
    if (b.contains("N") == b.contains("sweep")) fail("budget", "give exactly one of N and sweep");
    if (auto n = opt_number(b, "N", "budget")) {
      if (*n < 0.0) fail("budget.N", "must be nonnegative");
      cfg.photons = {*n};
    } else {
      const json& s = b.at("sweep");
      allow_keys(s, "budget.sweep", {"min", "max", "points", "log"});
      SweepSpec sweep;
      sweep.min = number(s, "min", "budget.sweep");
      sweep.max = number(s, "max", "budget.sweep");
      auto points = opt_int(s, "points", "budget.sweep");
      if (!points) fail("budget.sweep.points", "missing");
      sweep.points = *points;
      if (auto l = opt_bool(s, "log", "budget.sweep")) sweep.log = *l;
      if (!(sweep.min < sweep.max)) fail("budget.sweep", "min must be below max");
      if (sweep.points < 2) fail("budget.sweep.points", "must be at least 2");
      if (sweep.log && !(sweep.min > 0.0)) fail("budget.sweep.min", "must be positive for a log sweep");
      if (sweep.min < 0.0) fail("budget.sweep.min", "must be nonnegative");
      cfg.photons = sweep.values();
      cfg.photons_from_sweep = true;
    }
    if (auto t = opt_number(b, "N_th", "budget")) {
      if (*t < 0.0) fail("budget.N_th", "must be nonnegative");
      cfg.thermal = *t;
    }
  }

  if (doc.contains("thresholds")) {
    const json& t = doc.at("thresholds");
    allow_keys(t, "thresholds", {"farfield", "nearfield", "mixed_margin"});
    if (auto v = opt_number(t, "farfield", "thresholds")) cfg.gain.thresholds.farfield = *v;
    if (auto v = opt_number(t, "nearfield", "thresholds")) cfg.gain.thresholds.nearfield = *v;
    if (auto v = opt_number(t, "mixed_margin", "thresholds")) cfg.gain.mixed_margin = *v;
  }
  if (!(cfg.gain.thresholds.farfield > 0.0) ||
      !(cfg.gain.thresholds.farfield < cfg.gain.thresholds.nearfield)) {
    fail("thresholds", "need 0 < farfield < nearfield");
  }
  if (!(cfg.gain.mixed_margin >= 1.0)) fail("thresholds.mixed_margin", "must be at least 1");

  if (doc.contains("compare")) {
    const json& c = doc.at("compare");
    allow_keys(c, "compare", {"subject", "reference"});
    if (auto s = opt_string(c, "subject", "compare")) cfg.compare_subject = parse_scenario(*s);
    if (auto s = opt_string(c, "reference", "compare")) cfg.compare_reference = parse_scenario(*s);
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + path + " is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

}  // namespace optcap
