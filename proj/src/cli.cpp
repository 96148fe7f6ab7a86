#include "optcap/cli.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "optcap/capacity.hpp"
#include "optcap/config.hpp"
#include "optcap/error.hpp"
#include "optcap/report_io.hpp"
#include "optcap/scenarios.hpp"

namespace optcap::cli {
namespace {

using nlohmann::json;

constexpr const char* kUnitsHelp =
    "All configuration values are SI: wavelength, distances, pupil_radius and patch_side in "
    "meters; photon numbers are dimensionless mean photon counts. Capacities are reported in "
    "nats (bits alongside).";

RunConfig load(const Options& opts) {
  RunConfig cfg = load_config(opts.config_path);
  if (opts.grid_order) {
    if (*opts.grid_order < 4) throw ConfigError("--grid-order must be at least 4");
    cfg.grid.convergence.initial_order = *opts.grid_order;
    cfg.grid.convergence.max_order = std::max(cfg.grid.convergence.max_order, *opts.grid_order);
  }
  if (opts.out) cfg.output = opts.out;
  return cfg;
}

void warn_geometry(const OpticalGeometry& geom, std::ostream& err) {
  for (const std::string& w : geom.warnings()) err << "warning: " << w << '\n';
}

// Writes `text` to `path`, or to `out` when no path is configured.
void emit(const std::optional<std::string>& path, const std::string& text, std::ostream& out) {
  if (!path) {
    out << text;
    return;
  }
  std::ofstream file(*path, std::ios::binary | std::ios::trunc);
  if (!file) throw ConfigError("cannot open output file '" + *path + "'");
  file << text;
  if (!file) throw ConfigError("failed writing '" + *path + "'");
}

void emit_json_mirror(const Options& opts, const std::optional<std::string>& path,
                      const json& doc, std::ostream& out) {
  if (!opts.json) return;
  const std::string text = doc.dump(2) + "\n";
  if (path) {
    emit(*path + ".json", text, out);
  } else {
    out << text;
  }
}

json geometry_json(const OpticalGeometry& g) {
  return {{"wavelength", g.wavelength()},         {"object_distance", g.object_distance()},
          {"image_distance", g.image_distance()}, {"focal_length", g.focal_length()},
          {"magnification", g.magnification()},   {"pupil_radius", g.pupil_radius()},
          {"patch_side", g.patch_side()}};
}

ModeSpectrum compute_spectrum(const RunConfig& cfg) {
  const Kernel kernel(make_kernel_spec(cfg.scenario, cfg.require_geometry(), cfg.grid));
  return converge_spectrum(kernel, cfg.grid.convergence);
}

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalError;
  }
}

}  // namespace

int cmd_classify(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded([&] {
    const RunConfig cfg = load(opts);
    const OpticalGeometry& geom = cfg.require_geometry();
    warn_geometry(geom, err);
    const RegimeThresholds& t = cfg.gain.thresholds;
    const RegimeLabel lens = classify_regime(fresnel_lens(geom), t);
    const RegimeLabel fs = classify_regime(fresnel_free_space(geom), t);
    const MixedRegimeCheck mixed = mixed_regime_check(geom, cfg.gain.mixed_margin);
    const auto gain = applicable_gain(geom, cfg.gain);

    if (opts.json) {
      json doc = {{"F", lens.fresnel},
                  {"F_fs", fs.fresnel},
                  {"x_R", rayleigh_length(geom)},
                  {"r1", ratio_r1(geom)},
                  {"r2", ratio_r2(geom)},
                  {"lens_regime", to_string(lens.regime)},
                  {"free_space_regime", to_string(fs.regime)},
                  {"mixed_regime", mixed.holds},
                  {"mixed_lower_slack", mixed.lower_slack},
                  {"mixed_upper_slack", mixed.upper_slack},
                  {"gain_formula", gain ? to_string(*gain) : "none"},
                  {"geometry", geometry_json(geom)}};
      emit(cfg.output, doc.dump(2) + "\n", out);
      return int(kOk);
    }
    std::ostringstream os;
    os << "F = " << format_double(lens.fresnel) << '\n'
       << "F_fs = " << format_double(fs.fresnel) << '\n'
       << "x_R = " << format_double(rayleigh_length(geom)) << " m\n"
       << "r1 = " << format_double(ratio_r1(geom)) << '\n'
       << "r2 = " << format_double(ratio_r2(geom)) << '\n'
       << "lens regime: " << to_string(lens.regime) << '\n'
       << "free-space regime: " << to_string(fs.regime) << '\n'
       << "mixed regime: " << (mixed.holds ? "true" : "false")
       << " (lower slack " << format_double(mixed.lower_slack) << ", upper slack "
       << format_double(mixed.upper_slack) << ")\n"
       << "gain formula: " << (gain ? to_string(*gain) : "none") << '\n';
    emit(cfg.output, os.str(), out);
    return int(kOk);
  }, err);
}

int cmd_spectrum(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded([&] {
    const RunConfig cfg = load(opts);
    const OpticalGeometry& geom = cfg.require_geometry();
    warn_geometry(geom, err);
    const ModeSpectrum spectrum = compute_spectrum(cfg);

    std::ostringstream csv;
    write_spectrum_csv(csv, spectrum);
    emit(cfg.output, csv.str(), out);
    emit_json_mirror(opts, cfg.output, spectrum_json(spectrum), out);

    if (cfg.output) {
      json meta = {{"scenario", to_string(cfg.scenario)},
                   {"geometry", geometry_json(geom)},
                   {"fresnel", scenario_fresnel(cfg.scenario, geom)},
                   {"phase", cfg.grid.with_phase},
                   {"grid",
                    {{"input_order", spectrum.input_order},
                     {"output_order", spectrum.output_order},
                     {"pupil_order", spectrum.pupil_order},
                     {"pupil_angular_order", spectrum.pupil_angular_order},
                     {"initial_order", cfg.grid.convergence.initial_order},
                     {"max_order", cfg.grid.convergence.max_order},
                     {"rtol", cfg.grid.convergence.rtol},
                     {"precision", to_string(cfg.grid.convergence.precision)}}},
                   {"converged", spectrum.converged},
                   {"modes", spectrum.size()},
                   {"nu_threshold", spectrum.nu_threshold()},
                   {"nu_sum", spectrum.nu_sum()},
                   {"clamp",
                    {{"max_before_clamp", spectrum.clamp.max_before_clamp},
                     {"clamped", spectrum.clamp.clamped}}}};
      emit(*cfg.output + ".meta.json", meta.dump(2) + "\n", out);
    }
    if (!spectrum.converged) {
      err << "warning: spectrum not converged at grid order " << spectrum.input_order << '\n';
      return int(kUnconverged);
    }
    return int(kOk);
  }, err);
}

int cmd_capacity(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded([&] {
    const RunConfig cfg = load(opts);
    if (cfg.photons.empty()) throw ConfigError("config: budget: missing");
    if (cfg.photons.size() != 1) throw ConfigError("config: budget: capacity takes a single N, not a sweep");
    if (cfg.geometry) warn_geometry(*cfg.geometry, err);

    const ModeSpectrum spectrum =
        cfg.spectrum_file ? read_spectrum_file(*cfg.spectrum_file) : compute_spectrum(cfg);
    const PhotonBudget budget{cfg.photons.front(), cfg.thermal};

    CapacitySummary summary;
    summary.photons = budget.total;
    if (budget.total == 0.0) {
      summary.report = capacity_of(uniform_allocation(spectrum.size(), 0.0), spectrum, budget.thermal);
    } else {
      summary.report = optimal_capacity(spectrum, budget);
    }
    if (cfg.geometry && cfg.scenario != Scenario::Hole && !cfg.spectrum_file) {
      const double f = scenario_fresnel(cfg.scenario, *cfg.geometry);
      const Regime regime = classify_regime(f, cfg.gain.thresholds).regime;
      if (regime != Regime::Intermediate) {
        // Farfield: one mode at F^2 (lens) or F_fs; nearfield: nu = F lossless modes.
        const bool far = regime == Regime::Farfield;
        const double eta = far ? (cfg.scenario == Scenario::Lens ? f * f : f) : 1.0;
        const double nu = far ? 1.0 : f;
        summary.closed_form = capacity_thermal(eta, nu, budget.total, budget.thermal);
        summary.closed_form_tag = FormulaTag{AllocationRule::Equal,
                                             budget.thermal > 0.0 ? NoiseModel::Thermal
                                                                  : NoiseModel::PureLoss};
      }
    }

    std::ostringstream csv;
    write_capacity_csv(csv, summary);
    emit(cfg.output, csv.str(), out);
    emit_json_mirror(opts, cfg.output, capacity_json(summary), out);
    if (!spectrum.converged) {
      err << "warning: spectrum not converged\n";
      return int(kUnconverged);
    }
    return int(kOk);
  }, err);
}

int cmd_compare(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded([&] {
    const RunConfig cfg = load(opts);
    const OpticalGeometry& geom = cfg.require_geometry();
    warn_geometry(geom, err);
    if (cfg.photons.empty()) throw ConfigError("config: budget: missing");
    for (double n : cfg.photons) {
      if (!(n > 0.0)) throw ConfigError("config: budget: compare needs positive photon numbers");
    }

    const bool lens_vs_fs =
        cfg.compare_subject == Scenario::Lens && cfg.compare_reference == Scenario::FreeSpace;
    std::optional<GainKind> closed;
    bool forced = false;
    if (lens_vs_fs) {
      closed = applicable_gain(geom, cfg.gain);
      if (!closed) {
        std::ostringstream msg;
        msg << "no closed-form gain applies to " << regime_pair(geom, cfg.gain.thresholds)
            << " (lens F = " << fresnel_lens(geom) << ", free-space F_fs = "
            << fresnel_free_space(geom) << ")";
        if (!opts.force) throw RegimeError(msg.str() + "; use --force to evaluate anyway");
        err << "warning: " << msg.str() << "; closed-form rows are flagged\n";
        forced = true;
        const double f = fresnel_lens(geom);
        const double f_fs = fresnel_free_space(geom);
        closed = f < 1.0 ? GainKind::G1 : (f_fs < 1.0 ? GainKind::G3 : GainKind::G2);
      }
    }

    const GainCurve numerical =
        compare_numerical(geom, cfg.photons, cfg.grid, cfg.thermal, cfg.compare_subject,
                          cfg.compare_reference, cfg.gain);
    std::optional<GainCurve> closed_curve;
    if (closed) closed_curve = closed_form_curve(geom, *closed, cfg.photons, cfg.thermal);

    std::vector<GainRow> rows;
    bool unconverged = false;
    for (std::size_t i = 0; i < cfg.photons.size(); ++i) {
      const GainPoint& p = numerical.points[i];
      rows.push_back({p.photons, p.subject, p.reference, p.gain, "numerical", p.converged});
      unconverged = unconverged || !p.converged;
      if (closed_curve) {
        const GainPoint& c = closed_curve->points[i];
        rows.push_back({c.photons, c.subject, c.reference, c.gain, "closed-form", !forced});
      }
    }
    std::ostringstream csv;
    write_gain_csv(csv, rows);
    emit(cfg.output, csv.str(), out);
    emit_json_mirror(opts, cfg.output, gain_json(rows), out);
    if (unconverged) {
      err << "warning: numerical spectra not converged\n";
      return int(kUnconverged);
    }
    return int(kOk);
  }, err);
}

int run(int argc, char** argv) {
  CLI::App app{"Classical capacity of diffraction-limited optical channels"};
  app.footer(kUnitsHelp);
  app.require_subcommand(1);

  Options opts;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "JSON run configuration (SI units)")->required();
    sub->add_option("--out", opts.out, "Output path (overrides the config)");
    sub->add_flag("--force", opts.force, "Evaluate closed forms outside their regime");
    sub->add_flag("--json", opts.json, "Mirror every table as a JSON array");
    sub->add_option("--grid-order", opts.grid_order, "Initial quadrature order per axis");
    sub->add_option("--seed", opts.seed, "Seed for randomized test utilities (results never depend on it)");
  };
  CLI::App* classify = app.add_subcommand("classify", "Fresnel numbers, ratios and regimes");
  CLI::App* spectrum = app.add_subcommand("spectrum", "Converged mode transmissivities (k,sigma,eta)");
  CLI::App* capacity = app.add_subcommand("capacity", "Water-filled capacity report");
  CLI::App* compare = app.add_subcommand("compare", "Lens versus free-space gain curve");
  for (CLI::App* sub : {classify, spectrum, capacity, compare}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? int(kOk) : int(kConfigError);
  }
  if (*classify) return cmd_classify(opts, std::cout, std::cerr);
  if (*spectrum) return cmd_spectrum(opts, std::cout, std::cerr);
  if (*capacity) return cmd_capacity(opts, std::cout, std::cerr);
  return cmd_compare(opts, std::cout, std::cerr);
}

}  // namespace optcap::cli
